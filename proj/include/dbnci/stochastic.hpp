#pragma once

#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "dbnci/ltl.hpp"
#include "dbnci/model.hpp"
#include "dbnci/unfolding.hpp"

namespace dbnci {

// Exact distribution over joint configurations, indexed like the chain
// states (variable 0 least significant).
struct RationalDistribution {
    std::vector<Rational> values;

    Rational sum() const;
};

constexpr std::size_t kDefaultMaxConfigs = std::size_t{1} << 20;

// Immutable handle around a parameterized model: builds the configuration
// chain once and memoizes one exact distribution per time step. Safe to share
// across threads; cache writes are serialized.
class DbnEvaluator {
  public:
    explicit DbnEvaluator(DBN dbn, std::size_t max_configs = kDefaultMaxConfigs);

    const DBN& dbn() const { return dbn_; }
    const MarkovChain& chain() const { return chain_; }

    const RationalDistribution& distribution_at(int t) const;

    // Exact test of Pr(X,Y|Z) = Pr(X|Z) Pr(Y|Z) at time t, in the
    // cross-multiplied form Pr(xyz) Pr(z) = Pr(xz) Pr(yz) over every value
    // combination, which skips zero-probability contexts automatically.
    bool stochastic_ci(const CIProposition& prop, int t) const;

    std::vector<Letter> stochastic_trace(const std::vector<CIProposition>& props,
                                         int horizon) const;

  private:
    DBN dbn_;
    MarkovChain chain_;
    mutable std::mutex mutex_;
    mutable std::deque<RationalDistribution> memo_;  // deque keeps references stable
};

RationalDistribution distribution_at(const DBN& dbn, int t,
                                     std::size_t max_configs = kDefaultMaxConfigs);
bool stochastic_ci(const DBN& dbn, const CIProposition& prop, int t,
                   std::size_t max_configs = kDefaultMaxConfigs);

struct BoundedVerdict {
    enum class Outcome { violated_at, holds_up_to, unknown };

    Outcome outcome = Outcome::unknown;
    // violated_at: the earliest time the prefix refutes the formula;
    // holds_up_to: the horizon that was checked.
    int position = -1;
    int horizon = -1;
    // True when the finite prefix already decides every infinite extension;
    // inconclusive holds_up_to means "true on everything seen so far".
    bool conclusive = false;
    std::optional<int> decided_at;
};

// Bounded-horizon check of f over the stochastic CI trace: conclusive
// verdicts come from three-valued prefix evaluation, inconclusive ones fall
// back to finite-trace truth. Enlarging the horizon never flips a conclusive
// verdict.
BoundedVerdict bounded_check(const DbnEvaluator& ev, const ParsedFormula& f, int horizon);

}  // namespace dbnci
