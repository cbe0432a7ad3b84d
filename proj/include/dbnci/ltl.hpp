#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dbnci/model.hpp"
#include "dbnci/repr_ts.hpp"

namespace dbnci {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Negation-unnormalized LTL syntax tree. Atoms index into the proposition
// list the formula was parsed against.
struct Formula {
    enum class Op {
        ltrue,
        lfalse,
        atom,
        lnot,
        land,
        lor,
        implies,
        next,
        until,
        eventually,
        globally,
    };

    Op op;
    int atom_index = -1;
    FormulaPtr lhs, rhs;
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(int index);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_next(FormulaPtr a);
FormulaPtr f_until(FormulaPtr a, FormulaPtr b);
FormulaPtr f_eventually(FormulaPtr a);
FormulaPtr f_globally(FormulaPtr a);

struct ParsedFormula {
    FormulaPtr root;
    PropositionSet props;
};

// Grammar: atoms are indep(...), true, false; unary !, X, F, G bind tightest,
// then U (right-associative), then &, |, -> (right-associative, loosest).
// Proposition atoms are interned so repeated mentions share an index.
ParsedFormula parse_ltl(const std::string& text, const DBNTemplate& tmpl,
                        CIProposition::Kind atom_kind = CIProposition::Kind::structural);

std::string formula_to_string(const FormulaPtr& f, const std::vector<CIProposition>& props,
                              const DBNTemplate& tmpl);

bool is_propositional(const FormulaPtr& f);

// Truth of a propositional formula on a single letter; rejects temporal
// operators (automaton guards are letter predicates, not trace predicates).
bool eval_letter(const FormulaPtr& f, Letter letter);

// Truth at position 0 of the infinite word prefix.period^omega. Until-class
// operators are solved as fixpoints by repeated backward sweeps over the
// p+q positions.
bool eval_lasso(const LassoTrace& tr, const FormulaPtr& f);

struct CheckResult {
    bool holds = false;
    // Earliest position deciding a top-level G (counterexample) or F
    // (witness); absent for other shapes.
    std::optional<std::size_t> witness;
    bool used_restricted = false;
    LassoTrace trace;
};

// End-to-end structural check: lasso via the representative transition
// system (restricted fast path when the template allows), then eval_lasso.
CheckResult check_ltl(const DBNTemplate& tmpl, const ParsedFormula& f,
                      std::size_t state_budget = kDefaultStateBudget);

// Three-valued truth over a finite word: True/False only when every infinite
// extension agrees, Unknown otherwise. X past the end is Unknown.
enum class Tri : char { False, True, Unknown };
Tri eval_prefix(const std::vector<Letter>& word, const FormulaPtr& f);

// Classical finite-trace LTL on the word itself (X at the last position is
// false). Distinguishes "no violation seen yet" from "nothing decided".
bool eval_finite(const std::vector<Letter>& word, const FormulaPtr& f);

}  // namespace dbnci
