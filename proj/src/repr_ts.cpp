#include "dbnci/repr_ts.hpp"

#include <deque>
#include <unordered_map>

#include "dbnci/dsep.hpp"
#include "dbnci/errors.hpp"

namespace dbnci {

std::size_t pair_index(int n, int i, int j) {
    // Row-by-row layout of the strict upper triangle.
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
           static_cast<std::size_t>(j - i - 1);
}

bool ReprState::u_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    std::size_t idx = pair_index(n, i, j);
    return u_bits[idx / 64] >> (idx % 64) & 1;
}

std::vector<std::pair<int, int>> ReprState::u_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u_edge(i, j)) out.emplace_back(i, j);
    return out;
}

std::size_t ReprStateHash::operator()(const ReprState& s) const {
    std::size_t h = s.is_initial ? 0x9e3779b97f4a7c15ull : 0x2545f4914f6cdd1dull;
    for (std::uint64_t w : s.u_bits) h = (h ^ w) * 0x100000001b3ull;
    return h;
}

Letter LassoTrace::letter_at(std::size_t time) const {
    if (time < prefix.size()) return prefix[time];
    if (period.empty()) throw ValidationError("lasso has an empty period");
    return period[(time - prefix.size()) % period.size()];
}

namespace {

std::size_t pair_words(int n) {
    std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    return (pairs + 63) / 64;
}

}  // namespace

ReprState initial_state(const DBNTemplate& tmpl) {
    ReprState s;
    s.is_initial = true;
    s.n = tmpl.n();
    s.u_bits.assign(pair_words(s.n), 0);
    return s;
}

ReprState successor(const DBNTemplate& tmpl, const ReprState& state) {
    const int n = tmpl.n();
    if (state.n != n) throw ValidationError("state does not match the template");

    // Layered reachability graph: the state's slice (variables plus fork
    // nodes) feeding the next slice through cross-slice step edges only.
    // Within-slice edges of the NEXT slice are deliberately absent: a path
    // witnessing a new pair must keep its interior out of the new slice.
    const auto u_pairs = state.is_initial ? std::vector<std::pair<int, int>>{} : state.u_pairs();
    const int u_base = n;
    const int total = n + static_cast<int>(u_pairs.size());

    std::vector<std::vector<int>> children(total);
    const auto current_edges =
        state.is_initial ? tmpl.initial_edges : tmpl.intra_step_edges();
    for (const auto& [u, v] : current_edges) children[u].push_back(v);
    for (std::size_t k = 0; k < u_pairs.size(); ++k) {
        children[u_base + static_cast<int>(k)].push_back(u_pairs[k].first);
        children[u_base + static_cast<int>(k)].push_back(u_pairs[k].second);
    }

    const auto cross = tmpl.cross_step_edges();
    std::vector<std::vector<int>> feeds(n);  // current var -> next-slice vars
    for (const auto& [u, v] : cross) feeds[u].push_back(v);

    // For every next-slice variable, collect which current-slice nodes reach
    // it; a pair of next-slice variables sharing a common source is exactly a
    // collision-free connection through the past.
    std::vector<std::vector<char>> sources(n, std::vector<char>(total, 0));
    {
        std::vector<std::vector<int>> rev(total);
        for (int v = 0; v < total; ++v)
            for (int c : children[v]) rev[c].push_back(v);
        std::vector<std::vector<int>> feeders(n);
        for (int v = 0; v < n; ++v)
            for (int t : feeds[v]) feeders[t].push_back(v);

        for (int t = 0; t < n; ++t) {
            std::deque<int> work(feeders[t].begin(), feeders[t].end());
            auto& mark = sources[t];
            for (int v : feeders[t]) mark[v] = 1;
            while (!work.empty()) {
                int v = work.front();
                work.pop_front();
                for (int p : rev[v])
                    if (!mark[p]) {
                        mark[p] = 1;
                        work.push_back(p);
                    }
            }
        }
    }

    ReprState next;
    next.is_initial = false;
    next.n = n;
    next.u_bits.assign(pair_words(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool joined = false;
            for (int v = 0; v < total && !joined; ++v)
                joined = sources[i][v] && sources[j][v];
            if (joined) {
                std::size_t idx = pair_index(n, i, j);
                next.u_bits[idx / 64] |= std::uint64_t{1} << (idx % 64);
            }
        }
    return next;
}

BNTemplate materialize(const DBNTemplate& tmpl, const ReprState& state) {
    if (state.is_initial) return initial_bn(tmpl);
    BNTemplate bn;
    for (const auto& v : tmpl.variables) bn.add_node(v.name);
    for (const auto& [u, v] : tmpl.intra_step_edges()) bn.add_edge(u, v);
    for (const auto& [i, j] : state.u_pairs()) {
        // '$' cannot occur in a variable identifier, so fork names are safe.
        int f = bn.add_node("$U_" + std::to_string(i) + "_" + std::to_string(j));
        bn.add_edge(f, i);
        bn.add_edge(f, j);
    }
    bn.finalize();
    return bn;
}

Letter label(const DBNTemplate& tmpl, const ReprState& state,
             const std::vector<CIProposition>& props) {
    if (props.size() > kMaxProps)
        throw ValidationError("at most 64 propositions per trace are supported");
    BNTemplate bn = materialize(tmpl, state);
    Letter letter = 0;
    for (std::size_t i = 0; i < props.size(); ++i) {
        DSepQuery q{props[i].x, props[i].y, props[i].z};
        if (d_separated(bn, q)) letter |= Letter{1} << i;
    }
    return letter;
}

LassoTrace find_lasso(const DBNTemplate& tmpl, const std::vector<CIProposition>& props,
                      std::size_t state_budget) {
    LassoTrace tr;
    tr.props = props;

    std::vector<ReprState> states;
    std::unordered_map<ReprState, std::size_t, ReprStateHash> seen;
    ReprState cur = initial_state(tmpl);
    std::size_t loop_start;
    for (;;) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            loop_start = it->second;
            break;
        }
        if (states.size() >= state_budget)
            throw BudgetError("state budget of " + std::to_string(state_budget) +
                                  " exhausted after visiting " + std::to_string(states.size()) +
                                  " states",
                              states.size());
        seen.emplace(cur, states.size());
        states.push_back(cur);
        cur = successor(tmpl, states.back());
    }

    tr.states_visited = states.size();
    for (std::size_t t = 0; t < states.size(); ++t) {
        Letter l = label(tmpl, states[t], props);
        if (t < loop_start) {
            tr.prefix.push_back(l);
            tr.prefix_states.push_back(states[t]);
        } else {
            tr.period.push_back(l);
            tr.period_states.push_back(states[t]);
        }
    }
    return tr;
}

LassoTrace restricted_trace(const DBNTemplate& tmpl, const std::vector<CIProposition>& props) {
    if (!is_restricted(tmpl))
        throw ValidationError("restricted_trace requires a restricted template");

    const std::size_t settle = static_cast<std::size_t>(tmpl.n()) * tmpl.n();
    LassoTrace tr;
    tr.props = props;
    tr.states_visited = settle + 1;

    std::vector<ReprState> states;
    states.push_back(initial_state(tmpl));
    for (std::size_t t = 0; t < settle + 1; ++t) states.push_back(successor(tmpl, states.back()));

    // states[settle] must be a fixpoint; the only template where it is not is
    // the vacuous 0-variable one, whose initial sentinel differs structurally
    // from its (identical-looking) successor. One extra prefix step fixes it.
    std::size_t loop = settle;
    if (!(states[loop + 1] == states[loop])) {
        states.push_back(successor(tmpl, states.back()));
        ++loop;
        if (!(states[loop + 1] == states[loop]))
            throw ValidationError("restricted template did not stabilize at |V|^2 steps");
    }
    for (std::size_t t = 0; t < loop; ++t) {
        tr.prefix.push_back(label(tmpl, states[t], props));
        tr.prefix_states.push_back(states[t]);
    }
    tr.period.push_back(label(tmpl, states[loop], props));
    tr.period_states.push_back(states[loop]);
    return tr;
}

}  // namespace dbnci
