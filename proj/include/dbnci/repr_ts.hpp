#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dbnci/model.hpp"

namespace dbnci {

// One state of the representative transition system. The time-0 state is the
// raw initial template; every later state is determined by which unordered
// variable pairs {i, j} are joined through the past by a collision-free path
// whose interior avoids the current slice. Those pairs are materialized as
// auxiliary fork nodes when the state is queried.
struct ReprState {
    bool is_initial = false;
    int n = 0;
    std::vector<std::uint64_t> u_bits;  // one bit per unordered pair, see pair_index

    bool u_edge(int i, int j) const;
    std::vector<std::pair<int, int>> u_pairs() const;

    friend bool operator==(const ReprState& a, const ReprState& b) {
        return a.is_initial == b.is_initial && a.n == b.n && a.u_bits == b.u_bits;
    }
};

// Dense index of the unordered pair {i, j}, i < j, among all n-choose-2 pairs.
std::size_t pair_index(int n, int i, int j);

struct ReprStateHash {
    std::size_t operator()(const ReprState& s) const;
};

// Ultimately periodic trace: letters (and, when produced by the transition
// system, states) split into a finite prefix and a forever-repeating period.
// Letters are bitmasks over `props`.
struct LassoTrace {
    std::vector<CIProposition> props;
    std::vector<Letter> prefix;
    std::vector<Letter> period;
    std::vector<ReprState> prefix_states;  // empty for synthetic letter lassos
    std::vector<ReprState> period_states;
    std::size_t states_visited = 0;

    Letter letter_at(std::size_t time) const;
    std::size_t positions() const { return prefix.size() + period.size(); }
};

ReprState initial_state(const DBNTemplate& tmpl);
ReprState successor(const DBNTemplate& tmpl, const ReprState& state);

// The state as a plain BN: template variables with the state's within-slice
// edges, plus one parentless fork node per recorded pair.
BNTemplate materialize(const DBNTemplate& tmpl, const ReprState& state);

// Evaluates every proposition at this state by d-separation on materialize().
Letter label(const DBNTemplate& tmpl, const ReprState& state,
             const std::vector<CIProposition>& props);

constexpr std::size_t kDefaultStateBudget = std::size_t{1} << 20;

// Iterates successor from the initial state until the first recurrence and
// splits the run there. Distinct states are bounded by 2^(n choose 2) plus
// the initial state, so this always terminates (or trips the budget first).
LassoTrace find_lasso(const DBNTemplate& tmpl, const std::vector<CIProposition>& props,
                      std::size_t state_budget = kDefaultStateBudget);

// Fast path for restricted templates: the trace is constant from time |V|^2
// on, so the lasso is the first |V|^2 letters plus a singleton period.
LassoTrace restricted_trace(const DBNTemplate& tmpl, const std::vector<CIProposition>& props);

}  // namespace dbnci
