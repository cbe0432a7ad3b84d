#include "dbnci/stochastic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

// Configurations are mixed-radix numbers with variable 0 least significant.
int config_value(const DBN& dbn, std::size_t config, int var) {
    std::size_t rest = config;
    for (int v = 0; v < var; ++v) rest /= dbn.domain_size(v);
    return static_cast<int>(rest % dbn.domain_size(var));
}

std::vector<int> tuple_of(const DBN& dbn, std::size_t config, const std::vector<int>& vars) {
    std::vector<int> out;
    out.reserve(vars.size());
    for (int v : vars) out.push_back(config_value(dbn, config, v));
    return out;
}

std::vector<std::vector<int>> all_tuples(const DBN& dbn, const std::vector<int>& vars) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(vars.size(), 0);
    while (true) {
        out.push_back(cur);
        std::size_t k = 0;
        while (k < vars.size()) {
            if (++cur[k] < static_cast<int>(dbn.domain_size(vars[k]))) break;
            cur[k] = 0;
            ++k;
        }
        if (k == vars.size()) break;
    }
    return out;
}

}  // namespace

Rational RationalDistribution::sum() const {
    Rational total = 0;
    for (const Rational& v : values) total += v;
    return total;
}

DbnEvaluator::DbnEvaluator(DBN dbn, std::size_t max_configs)
    : dbn_(std::move(dbn)), chain_(dbn_to_markov_chain(dbn_, max_configs)) {}

const RationalDistribution& DbnEvaluator::distribution_at(int t) const {
    if (t < 0) throw ValidationError("time index must be nonnegative");
    std::lock_guard<std::mutex> lock(mutex_);
    if (memo_.empty()) {
        RationalDistribution d;
        d.values = chain_.init;
        memo_.push_back(std::move(d));
    }
    while (memo_.size() <= static_cast<std::size_t>(t)) {
        const RationalDistribution& prev = memo_.back();
        RationalDistribution next;
        next.values.assign(chain_.size, Rational(0));
        for (std::size_t j = 0; j < chain_.size; ++j) {
            if (prev.values[j] == 0) continue;
            for (std::size_t i = 0; i < chain_.size; ++i) {
                if (chain_.matrix[i][j] == 0) continue;
                next.values[i] += chain_.matrix[i][j] * prev.values[j];
            }
        }
        memo_.push_back(std::move(next));
    }
    return memo_[static_cast<std::size_t>(t)];
}

bool DbnEvaluator::stochastic_ci(const CIProposition& prop, int t) const {
    const RationalDistribution& dist = distribution_at(t);

    std::map<std::vector<int>, Rational> p_xyz;
    std::map<std::vector<int>, Rational> p_xz;
    std::map<std::vector<int>, Rational> p_yz;
    std::map<std::vector<int>, Rational> p_z;

    auto concat = [](std::vector<int> a, const std::vector<int>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    for (std::size_t c = 0; c < dist.values.size(); ++c) {
        if (dist.values[c] == 0) continue;
        std::vector<int> xv = tuple_of(dbn_, c, prop.x);
        std::vector<int> yv = tuple_of(dbn_, c, prop.y);
        std::vector<int> zv = tuple_of(dbn_, c, prop.z);
        p_xyz[concat(concat(xv, yv), zv)] += dist.values[c];
        p_xz[concat(xv, zv)] += dist.values[c];
        p_yz[concat(yv, zv)] += dist.values[c];
        p_z[zv] += dist.values[c];
    }

    auto mass = [](const std::map<std::vector<int>, Rational>& m,
                   const std::vector<int>& key) -> Rational {
        auto it = m.find(key);
        return it == m.end() ? Rational(0) : it->second;
    };

    // Cross-multiplied factorization must hold for every value combination,
    // including ones with zero joint mass.
    std::vector<std::vector<int>> xs = all_tuples(dbn_, prop.x);
    std::vector<std::vector<int>> ys = all_tuples(dbn_, prop.y);
    std::vector<std::vector<int>> zs = all_tuples(dbn_, prop.z);
    for (const auto& zv : zs) {
        Rational mz = mass(p_z, zv);
        for (const auto& xv : xs) {
            Rational mxz = mass(p_xz, concat(xv, zv));
            for (const auto& yv : ys) {
                Rational lhs = mass(p_xyz, concat(concat(xv, yv), zv)) * mz;
                Rational rhs = mxz * mass(p_yz, concat(yv, zv));
                if (lhs != rhs) return false;
            }
        }
    }
    return true;
}

std::vector<Letter> DbnEvaluator::stochastic_trace(const std::vector<CIProposition>& props,
                                                   int horizon) const {
    if (props.size() > kMaxProps)
        throw ValidationError("too many propositions for one letter");
    std::vector<Letter> word;
    word.reserve(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t) {
        Letter letter = 0;
        for (std::size_t i = 0; i < props.size(); ++i) {
            if (stochastic_ci(props[i], t)) letter |= Letter{1} << i;
        }
        word.push_back(letter);
    }
    return word;
}

RationalDistribution distribution_at(const DBN& dbn, int t, std::size_t max_configs) {
    DbnEvaluator ev(dbn, max_configs);
    return ev.distribution_at(t);
}

bool stochastic_ci(const DBN& dbn, const CIProposition& prop, int t,
                   std::size_t max_configs) {
    DbnEvaluator ev(dbn, max_configs);
    return ev.stochastic_ci(prop, t);
}

BoundedVerdict bounded_check(const DbnEvaluator& ev, const ParsedFormula& f, int horizon) {
    if (horizon < 0) throw ValidationError("horizon must be nonnegative");
    std::vector<Letter> word = ev.stochastic_trace(f.props.props, horizon);

    BoundedVerdict v;
    v.horizon = horizon;
    for (int h = 0; h <= horizon; ++h) {
        std::vector<Letter> prefix(word.begin(), word.begin() + h + 1);
        Tri tri = eval_prefix(prefix, f.root);
        if (tri == Tri::False) {
            v.outcome = BoundedVerdict::Outcome::violated_at;
            v.position = h;
            v.conclusive = true;
            v.decided_at = h;
            return v;
        }
        if (tri == Tri::True) {
            v.outcome = BoundedVerdict::Outcome::holds_up_to;
            v.position = horizon;
            v.conclusive = true;
            v.decided_at = h;
            return v;
        }
    }
    if (eval_finite(word, f.root)) {
        v.outcome = BoundedVerdict::Outcome::holds_up_to;
        v.position = horizon;
    } else {
        v.outcome = BoundedVerdict::Outcome::unknown;
        v.position = -1;
    }
    v.conclusive = false;
    return v;
}

}  // namespace dbnci
