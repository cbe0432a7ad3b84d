#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dbnci/rational.hpp"

namespace dbnci {

struct VariableId {
    std::string name;
    int index = -1;

    friend bool operator==(const VariableId& a, const VariableId& b) {
        return a.index == b.index && a.name == b.name;
    }
};

// A variable reference inside a step template: either the previous-slice copy
// (primed == false) or the next-slice copy (primed == true). File syntax marks
// the next-slice copy with a trailing apostrophe ("L'").
struct SliceVar {
    int var = -1;
    bool primed = false;

    friend bool operator==(const SliceVar& a, const SliceVar& b) {
        return a.var == b.var && a.primed == b.primed;
    }
    friend bool operator<(const SliceVar& a, const SliceVar& b) {
        if (a.primed != b.primed) return !a.primed;
        return a.var < b.var;
    }
};

// Two-slice template <V, E0, Estep>. E0 lives inside slice 0; every step edge
// targets a next-slice variable and its source may sit in either slice.
// The unfolding at horizon t glues t copies of the step template onto slice 0.
struct DBNTemplate {
    std::vector<VariableId> variables;
    std::vector<std::pair<int, int>> initial_edges;     // (var, var), slice 0
    std::vector<std::pair<SliceVar, int>> step_edges;   // (source, primed target var)

    int n() const { return static_cast<int>(variables.size()); }
    int index_of(const std::string& name) const;  // -1 when absent

    // Step edges whose source is itself primed, i.e. the within-slice relation
    // replicated at every slice >= 1.
    std::vector<std::pair<int, int>> intra_step_edges() const;
    // Step edges crossing from one slice into the next.
    std::vector<std::pair<int, int>> cross_step_edges() const;

    friend bool operator==(const DBNTemplate& a, const DBNTemplate& b) {
        return a.variables == b.variables && a.initial_edges == b.initial_edges &&
               a.step_edges == b.step_edges;
    }
};

// Ordinary finite BN structure (a DAG): unfoldings, representative states and
// d-separation queries all work on this shape.
struct BNTemplate {
    std::vector<std::string> nodes;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;

    int add_node(std::string name);
    void add_edge(int from, int to);
    // Builds adjacency and rejects cyclic edge sets.
    void finalize();
    int node_index(const std::string& name) const;  // -1 when absent

  private:
    std::unordered_map<std::string, int> index_;
};

// Conditional-independence statement (X indep Y | Z) over template variables,
// instantiated at a single time slice when evaluated. Sets are kept sorted;
// X and Y are ordered so that syntactically swapped statements compare equal.
struct CIProposition {
    enum class Kind { structural, stochastic };

    std::vector<int> x, y, z;  // sorted variable indices, pairwise disjoint
    Kind kind = Kind::structural;

    void canonicalize();
    std::string to_string(const DBNTemplate& tmpl) const;

    friend bool operator==(const CIProposition& a, const CIProposition& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
};

// Interning registry: formulas and automata guards refer to propositions by
// index, and trace letters are bitmasks over this list.
struct PropositionSet {
    std::vector<CIProposition> props;

    int intern(CIProposition p);
    int find(const CIProposition& p) const;  // -1 when absent
};

// A letter of a trace: bit i set iff props[i] holds at that time step.
using Letter = std::uint64_t;
constexpr std::size_t kMaxProps = 64;

std::string letter_to_string(Letter letter, const std::vector<CIProposition>& props,
                             const DBNTemplate& tmpl);

// One conditional probability table. Rows are indexed by the mixed-radix
// encoding of the parent assignment with parent_order[0] least significant;
// each row is an exact distribution over the child's domain values.
struct CPDTable {
    SliceVar child;
    std::vector<SliceVar> parent_order;
    std::vector<std::vector<Rational>> rows;

    friend bool operator==(const CPDTable& a, const CPDTable& b) {
        return a.child == b.child && a.parent_order == b.parent_order && a.rows == b.rows;
    }
};

// Fully parameterized model: a template plus one CPD per slice-0 variable and
// one per next-slice variable. Domains default to {"0","1"}.
struct DBN {
    DBNTemplate tmpl;
    std::vector<std::vector<std::string>> domains;  // per variable, size >= 2
    std::vector<CPDTable> initial_cpds;             // indexed by variable
    std::vector<CPDTable> step_cpds;                // indexed by variable (child primed)

    int domain_size(int var) const { return static_cast<int>(domains[var].size()); }
    int value_index(int var, const std::string& value) const;  // -1 when absent

    friend bool operator==(const DBN& a, const DBN& b) {
        return a.tmpl == b.tmpl && a.domains == b.domains &&
               a.initial_cpds == b.initial_cpds && a.step_cpds == b.step_cpds;
    }
};

// Result of parsing a model document. `dbn` is present exactly when the file
// carries a complete CPD section; `propositions` echoes the optional
// "propositions" array for CLI defaults.
struct ModelFile {
    DBNTemplate tmpl;
    std::optional<DBN> dbn;
    std::vector<std::string> propositions;
};

ModelFile parse_dbn(const std::string& json_text);
std::string print_template(const DBNTemplate& tmpl,
                           const std::vector<std::string>& propositions = {});
std::string print_dbn(const DBN& dbn, const std::vector<std::string>& propositions = {});

// Structural validation shared by parsing and programmatic construction:
// unique nonempty names, edges over known variables, slice-0 and within-slice
// step subgraphs acyclic, step edges targeting primed variables only.
void validate_template(const DBNTemplate& tmpl);
// Additionally checks domains and CPD completeness/stochasticity.
void validate_dbn(const DBN& dbn);

// Every initial edge must also appear as a within-slice step edge.
bool is_restricted(const DBNTemplate& tmpl);

// Parses "indep(A,B ; C | D,E)" against the template's variable table.
CIProposition parse_proposition(const std::string& text, const DBNTemplate& tmpl,
                                CIProposition::Kind kind = CIProposition::Kind::structural);

// Slice-0 template as a plain BN (used for horizon-0 queries and as the
// initial representative state).
BNTemplate initial_bn(const DBNTemplate& tmpl);

}  // namespace dbnci
