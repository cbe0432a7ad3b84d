#pragma once

#include <string>
#include <vector>

#include "dbnci/ltl.hpp"
#include "dbnci/model.hpp"
#include "dbnci/repr_ts.hpp"

namespace dbnci {

// Nondeterministic Buchi automaton over trace letters. Transition guards are
// propositional formulas instead of explicit alphabet letters, so one edge
// covers every letter the guard accepts.
struct NBA {
    std::vector<std::string> states;
    std::vector<int> initial;
    std::vector<int> accepting;
    struct Transition {
        int from = -1;
        FormulaPtr guard;
        std::string guard_text;
        int to = -1;
    };
    std::vector<Transition> transitions;
    PropositionSet props;
};

// {"states": [...], "initial": [...], "accepting": [...],
//  "transitions": [{"from": s, "guard": text, "to": s}, ...]}
NBA parse_nba(const std::string& json_text, const DBNTemplate& tmpl);

// Whether the automaton accepts prefix.period^omega: build the product of
// automaton states with lasso positions, then look for a reachable cycle
// through an accepting state. Only positions inside the period can lie on a
// cycle, so the search is an SCC pass over the reachable product.
bool accepts_lasso(const NBA& nba, const LassoTrace& tr);

// Lasso via the representative transition system, then accepts_lasso. The
// verdict reports "holds" when the automaton accepts.
CheckResult check_nba(const DBNTemplate& tmpl, const NBA& nba,
                      std::size_t state_budget = kDefaultStateBudget);

}  // namespace dbnci
