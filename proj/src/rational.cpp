#include "dbnci/rational.hpp"

#include <cctype>
#include <cstddef>

#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = trimmed(text);
    if (s.empty()) throw ParseError("empty rational literal");

    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = (s[0] == '-');
        s.erase(0, 1);
    }

    Rational q;
    std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed rational '" + text + "'");
        mpz_class n(num), d(den);
        if (d == 0) throw ParseError("zero denominator in '" + text + "'");
        q = Rational(n, d);
        q.canonicalize();
    } else {
        std::size_t dot = s.find('.');
        if (dot != std::string::npos) {
            std::string ip = s.substr(0, dot);
            std::string fp = s.substr(dot + 1);
            if (ip.empty()) ip = "0";
            if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
                throw ParseError("malformed rational '" + text + "'");
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
            mpz_class num = mpz_class(ip) * scale + (fp.empty() ? mpz_class(0) : mpz_class(fp));
            q = Rational(num, scale);
            q.canonicalize();
        } else {
            if (!all_digits(s)) throw ParseError("malformed rational '" + text + "'");
            q = Rational(mpz_class(s));
        }
    }
    if (negative) q = -q;
    return q;
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational make_rational(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace dbnci
