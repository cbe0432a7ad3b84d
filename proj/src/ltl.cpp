#include "dbnci/ltl.hpp"

#include <cctype>
#include <unordered_map>

#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

FormulaPtr node(Formula::Op op, int atom, FormulaPtr lhs, FormulaPtr rhs) {
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->atom_index = atom;
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}

}  // namespace

FormulaPtr f_true() { return node(Formula::Op::ltrue, -1, nullptr, nullptr); }
FormulaPtr f_false() { return node(Formula::Op::lfalse, -1, nullptr, nullptr); }
FormulaPtr f_atom(int index) { return node(Formula::Op::atom, index, nullptr, nullptr); }
FormulaPtr f_not(FormulaPtr a) { return node(Formula::Op::lnot, -1, std::move(a), nullptr); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
    return node(Formula::Op::land, -1, std::move(a), std::move(b));
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
    return node(Formula::Op::lor, -1, std::move(a), std::move(b));
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    return node(Formula::Op::implies, -1, std::move(a), std::move(b));
}
FormulaPtr f_next(FormulaPtr a) { return node(Formula::Op::next, -1, std::move(a), nullptr); }
FormulaPtr f_until(FormulaPtr a, FormulaPtr b) {
    return node(Formula::Op::until, -1, std::move(a), std::move(b));
}
FormulaPtr f_eventually(FormulaPtr a) {
    return node(Formula::Op::eventually, -1, std::move(a), nullptr);
}
FormulaPtr f_globally(FormulaPtr a) {
    return node(Formula::Op::globally, -1, std::move(a), nullptr);
}

// --- parser ----------------------------------------------------------------

namespace {

struct LtlParser {
    const std::string& text;
    const DBNTemplate& tmpl;
    CIProposition::Kind kind;
    PropositionSet props;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("formula: " + msg + " at position " + std::to_string(pos) + " in '" +
                         text + "'");
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool eat_arrow() {
        skip_ws();
        if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
            pos += 2;
            return true;
        }
        return false;
    }

    // Word-shaped lookahead: identifiers and the single-letter operators.
    std::string peek_word() {
        skip_ws();
        std::size_t p = pos;
        while (p < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[p])) || text[p] == '_'))
            ++p;
        return text.substr(pos, p - pos);
    }

    FormulaPtr parse() {
        FormulaPtr f = parse_implies();
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        return f;
    }

    FormulaPtr parse_implies() {
        FormulaPtr lhs = parse_or();
        if (eat_arrow()) return f_implies(std::move(lhs), parse_implies());
        return lhs;
    }

    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (eat('|')) f = f_or(std::move(f), parse_and());
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_until();
        while (eat('&')) f = f_and(std::move(f), parse_until());
        return f;
    }

    FormulaPtr parse_until() {
        FormulaPtr lhs = parse_unary();
        if (peek_word() == "U") {
            pos += 1;
            return f_until(std::move(lhs), parse_until());
        }
        return lhs;
    }

    FormulaPtr parse_unary() {
        skip_ws();
        if (eat('!')) return f_not(parse_unary());
        std::string word = peek_word();
        if (word == "X") {
            pos += 1;
            return f_next(parse_unary());
        }
        if (word == "F") {
            pos += 1;
            return f_eventually(parse_unary());
        }
        if (word == "G") {
            pos += 1;
            return f_globally(parse_unary());
        }
        return parse_primary(word);
    }

    FormulaPtr parse_primary(const std::string& word) {
        skip_ws();
        if (eat('(')) {
            FormulaPtr f = parse_implies();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        if (word == "true") {
            pos += word.size();
            return f_true();
        }
        if (word == "false") {
            pos += word.size();
            return f_false();
        }
        if (word == "indep") {
            std::size_t close = text.find(')', pos);
            if (close == std::string::npos) fail("unterminated proposition");
            std::string prop_text = text.substr(pos, close - pos + 1);
            pos = close + 1;
            CIProposition p = parse_proposition(prop_text, tmpl, kind);
            return f_atom(props.intern(std::move(p)));
        }
        if (word.empty()) fail("expected a formula");
        fail("unexpected token '" + word + "'");
    }
};

}  // namespace

ParsedFormula parse_ltl(const std::string& text, const DBNTemplate& tmpl,
                        CIProposition::Kind atom_kind) {
    LtlParser parser{text, tmpl, atom_kind, {}};
    ParsedFormula out;
    out.root = parser.parse();
    out.props = std::move(parser.props);
    return out;
}

std::string formula_to_string(const FormulaPtr& f, const std::vector<CIProposition>& props,
                              const DBNTemplate& tmpl) {
    using Op = Formula::Op;
    switch (f->op) {
        case Op::ltrue: return "true";
        case Op::lfalse: return "false";
        case Op::atom: return props[static_cast<std::size_t>(f->atom_index)].to_string(tmpl);
        case Op::lnot: return "!" + formula_to_string(f->lhs, props, tmpl);
        case Op::land:
            return "(" + formula_to_string(f->lhs, props, tmpl) + " & " +
                   formula_to_string(f->rhs, props, tmpl) + ")";
        case Op::lor:
            return "(" + formula_to_string(f->lhs, props, tmpl) + " | " +
                   formula_to_string(f->rhs, props, tmpl) + ")";
        case Op::implies:
            return "(" + formula_to_string(f->lhs, props, tmpl) + " -> " +
                   formula_to_string(f->rhs, props, tmpl) + ")";
        case Op::next: return "X " + formula_to_string(f->lhs, props, tmpl);
        case Op::until:
            return "(" + formula_to_string(f->lhs, props, tmpl) + " U " +
                   formula_to_string(f->rhs, props, tmpl) + ")";
        case Op::eventually: return "F " + formula_to_string(f->lhs, props, tmpl);
        case Op::globally: return "G " + formula_to_string(f->lhs, props, tmpl);
    }
    throw ValidationError("corrupt formula node");
}

bool is_propositional(const FormulaPtr& f) {
    using Op = Formula::Op;
    switch (f->op) {
        case Op::ltrue:
        case Op::lfalse:
        case Op::atom: return true;
        case Op::lnot: return is_propositional(f->lhs);
        case Op::land:
        case Op::lor:
        case Op::implies: return is_propositional(f->lhs) && is_propositional(f->rhs);
        default: return false;
    }
}

bool eval_letter(const FormulaPtr& f, Letter letter) {
    using Op = Formula::Op;
    switch (f->op) {
        case Op::ltrue: return true;
        case Op::lfalse: return false;
        case Op::atom: return letter >> f->atom_index & 1;
        case Op::lnot: return !eval_letter(f->lhs, letter);
        case Op::land: return eval_letter(f->lhs, letter) && eval_letter(f->rhs, letter);
        case Op::lor: return eval_letter(f->lhs, letter) || eval_letter(f->rhs, letter);
        case Op::implies: return !eval_letter(f->lhs, letter) || eval_letter(f->rhs, letter);
        default: throw ValidationError("temporal operator in a letter predicate");
    }
}

// --- lasso evaluation ------------------------------------------------------

namespace {

// Satisfaction table for every subformula over the p+q positions of the
// lasso, position p+q-1 wrapping back to p.
struct LassoTables {
    const LassoTrace& tr;
    std::size_t count;
    std::unordered_map<const Formula*, std::vector<char>> memo;

    explicit LassoTables(const LassoTrace& tr_) : tr(tr_), count(tr_.positions()) {}

    std::size_t next(std::size_t pos) const {
        return pos + 1 < count ? pos + 1 : tr.prefix.size();
    }

    Letter letter(std::size_t pos) const {
        return pos < tr.prefix.size() ? tr.prefix[pos]
                                      : tr.period[pos - tr.prefix.size()];
    }

    const std::vector<char>& table(const FormulaPtr& f) {
        auto it = memo.find(f.get());
        if (it != memo.end()) return it->second;
        std::vector<char> sat = compute(f);
        return memo.emplace(f.get(), std::move(sat)).first->second;
    }

    std::vector<char> compute(const FormulaPtr& f) {
        using Op = Formula::Op;
        std::vector<char> sat(count, 0);
        switch (f->op) {
            case Op::ltrue:
                sat.assign(count, 1);
                break;
            case Op::lfalse:
                break;
            case Op::atom: {
                if (f->atom_index < 0 ||
                    static_cast<std::size_t>(f->atom_index) >= tr.props.size())
                    throw ValidationError("formula atom " + std::to_string(f->atom_index) +
                                          " is not declared in the trace");
                for (std::size_t i = 0; i < count; ++i)
                    sat[i] = letter(i) >> f->atom_index & 1;
                break;
            }
            case Op::lnot: {
                const auto& a = table(f->lhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = !a[i];
                break;
            }
            case Op::land: {
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = a[i] && b[i];
                break;
            }
            case Op::lor: {
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = a[i] || b[i];
                break;
            }
            case Op::implies: {
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = !a[i] || b[i];
                break;
            }
            case Op::next: {
                const auto& a = table(f->lhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = a[next(i)];
                break;
            }
            case Op::until: {
                // Least fixpoint of sat = rhs | (lhs & X sat): start from
                // all-false and sweep backwards until stable; bits only flip
                // upwards, so at most count+1 sweeps run.
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (std::size_t i = count; i-- > 0;) {
                        char nv = b[i] || (a[i] && sat[next(i)]);
                        if (nv != sat[i]) {
                            sat[i] = nv;
                            changed = true;
                        }
                    }
                }
                break;
            }
            case Op::eventually: {
                const auto& a = table(f->lhs);
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (std::size_t i = count; i-- > 0;) {
                        char nv = a[i] || sat[next(i)];
                        if (nv != sat[i]) {
                            sat[i] = nv;
                            changed = true;
                        }
                    }
                }
                break;
            }
            case Op::globally: {
                // Greatest fixpoint: start from all-true and knock bits down.
                const auto& a = table(f->lhs);
                sat.assign(count, 1);
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (std::size_t i = count; i-- > 0;) {
                        char nv = a[i] && sat[next(i)];
                        if (nv != sat[i]) {
                            sat[i] = nv;
                            changed = true;
                        }
                    }
                }
                break;
            }
        }
        return sat;
    }
};

}  // namespace

bool eval_lasso(const LassoTrace& tr, const FormulaPtr& f) {
    if (tr.period.empty()) throw ValidationError("lasso has an empty period");
    LassoTables tables(tr);
    return tables.table(f)[0];
}

CheckResult check_ltl(const DBNTemplate& tmpl, const ParsedFormula& f,
                      std::size_t state_budget) {
    CheckResult result;
    result.used_restricted = is_restricted(tmpl);
    result.trace = result.used_restricted ? restricted_trace(tmpl, f.props.props)
                                          : find_lasso(tmpl, f.props.props, state_budget);

    LassoTables tables(result.trace);
    result.holds = tables.table(f.root)[0];

    using Op = Formula::Op;
    if (f.root->op == Op::globally && !result.holds) {
        const auto& child = tables.table(f.root->lhs);
        for (std::size_t i = 0; i < child.size(); ++i)
            if (!child[i]) {
                result.witness = i;
                break;
            }
    } else if (f.root->op == Op::eventually && result.holds) {
        const auto& child = tables.table(f.root->lhs);
        for (std::size_t i = 0; i < child.size(); ++i)
            if (child[i]) {
                result.witness = i;
                break;
            }
    }
    return result;
}

// --- finite-word evaluation ------------------------------------------------

namespace {

Tri tri_not(Tri a) {
    if (a == Tri::Unknown) return Tri::Unknown;
    return a == Tri::True ? Tri::False : Tri::True;
}

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::True && b == Tri::True) return Tri::True;
    return Tri::Unknown;
}

Tri tri_or(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::False && b == Tri::False) return Tri::False;
    return Tri::Unknown;
}

struct PrefixTables {
    const std::vector<Letter>& word;
    std::unordered_map<const Formula*, std::vector<Tri>> memo;

    const std::vector<Tri>& table(const FormulaPtr& f) {
        auto it = memo.find(f.get());
        if (it != memo.end()) return it->second;
        std::vector<Tri> sat = compute(f);
        return memo.emplace(f.get(), std::move(sat)).first->second;
    }

    std::vector<Tri> compute(const FormulaPtr& f) {
        using Op = Formula::Op;
        const std::size_t count = word.size();
        std::vector<Tri> sat(count, Tri::Unknown);
        auto beyond = Tri::Unknown;  // the word says nothing past its end
        switch (f->op) {
            case Op::ltrue: sat.assign(count, Tri::True); break;
            case Op::lfalse: sat.assign(count, Tri::False); break;
            case Op::atom:
                for (std::size_t i = 0; i < count; ++i)
                    sat[i] = (word[i] >> f->atom_index & 1) ? Tri::True : Tri::False;
                break;
            case Op::lnot: {
                const auto& a = table(f->lhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = tri_not(a[i]);
                break;
            }
            case Op::land: {
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = tri_and(a[i], b[i]);
                break;
            }
            case Op::lor: {
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = tri_or(a[i], b[i]);
                break;
            }
            case Op::implies: {
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                for (std::size_t i = 0; i < count; ++i) sat[i] = tri_or(tri_not(a[i]), b[i]);
                break;
            }
            case Op::next: {
                const auto& a = table(f->lhs);
                for (std::size_t i = 0; i < count; ++i)
                    sat[i] = i + 1 < count ? a[i + 1] : beyond;
                break;
            }
            case Op::until: {
                const auto& a = table(f->lhs);
                const auto& b = table(f->rhs);
                Tri after = beyond;
                for (std::size_t i = count; i-- > 0;) {
                    sat[i] = tri_or(b[i], tri_and(a[i], after));
                    after = sat[i];
                }
                break;
            }
            case Op::eventually: {
                const auto& a = table(f->lhs);
                Tri after = beyond;
                for (std::size_t i = count; i-- > 0;) {
                    sat[i] = tri_or(a[i], after);
                    after = sat[i];
                }
                break;
            }
            case Op::globally: {
                const auto& a = table(f->lhs);
                Tri after = beyond;
                for (std::size_t i = count; i-- > 0;) {
                    sat[i] = tri_and(a[i], after);
                    after = sat[i];
                }
                break;
            }
        }
        return sat;
    }
};

}  // namespace

Tri eval_prefix(const std::vector<Letter>& word, const FormulaPtr& f) {
    if (word.empty()) return Tri::Unknown;
    PrefixTables tables{word, {}};
    return tables.table(f)[0];
}

namespace {

bool finite_eval_at(const std::vector<Letter>& word, const FormulaPtr& f, std::size_t pos,
                    std::unordered_map<const Formula*, std::vector<signed char>>& memo);

const std::vector<signed char>& finite_table(
    const std::vector<Letter>& word, const FormulaPtr& f,
    std::unordered_map<const Formula*, std::vector<signed char>>& memo) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    std::vector<signed char> sat(word.size());
    for (std::size_t i = word.size(); i-- > 0;) sat[i] = -1;
    auto& slot = memo.emplace(f.get(), std::move(sat)).first->second;
    for (std::size_t i = word.size(); i-- > 0;)
        slot[i] = finite_eval_at(word, f, i, memo) ? 1 : 0;
    return slot;
}

bool finite_eval_at(const std::vector<Letter>& word, const FormulaPtr& f, std::size_t pos,
                    std::unordered_map<const Formula*, std::vector<signed char>>& memo) {
    using Op = Formula::Op;
    const std::size_t count = word.size();
    switch (f->op) {
        case Op::ltrue: return true;
        case Op::lfalse: return false;
        case Op::atom: return word[pos] >> f->atom_index & 1;
        case Op::lnot: return !finite_table(word, f->lhs, memo)[pos];
        case Op::land:
            return finite_table(word, f->lhs, memo)[pos] && finite_table(word, f->rhs, memo)[pos];
        case Op::lor:
            return finite_table(word, f->lhs, memo)[pos] || finite_table(word, f->rhs, memo)[pos];
        case Op::implies:
            return !finite_table(word, f->lhs, memo)[pos] || finite_table(word, f->rhs, memo)[pos];
        case Op::next:
            return pos + 1 < count && finite_table(word, f->lhs, memo)[pos + 1];
        case Op::until: {
            const auto& a = finite_table(word, f->lhs, memo);
            const auto& b = finite_table(word, f->rhs, memo);
            for (std::size_t j = pos; j < count; ++j) {
                if (b[j]) return true;
                if (!a[j]) return false;
            }
            return false;
        }
        case Op::eventually: {
            const auto& a = finite_table(word, f->lhs, memo);
            for (std::size_t j = pos; j < count; ++j)
                if (a[j]) return true;
            return false;
        }
        case Op::globally: {
            const auto& a = finite_table(word, f->lhs, memo);
            for (std::size_t j = pos; j < count; ++j)
                if (!a[j]) return false;
            return true;
        }
    }
    throw ValidationError("corrupt formula node");
}

}  // namespace

bool eval_finite(const std::vector<Letter>& word, const FormulaPtr& f) {
    if (word.empty()) throw ValidationError("finite evaluation needs a non-empty word");
    std::unordered_map<const Formula*, std::vector<signed char>> memo;
    return finite_table(word, f, memo)[0];
}

}  // namespace dbnci
