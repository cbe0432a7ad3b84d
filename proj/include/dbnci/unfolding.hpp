#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dbnci/model.hpp"

namespace dbnci {

// Finite-state chain over joint configurations. Entry matrix[i][j] is the
// probability of moving to configuration i from configuration j, so columns
// sum to one; serialization is row-major.
struct MarkovChain {
    std::size_t size = 0;
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> init;

    friend bool operator==(const MarkovChain& a, const MarkovChain& b) {
        return a.size == b.size && a.matrix == b.matrix && a.init == b.init;
    }
};

// Horizon cap for brute-force unfolding queries; override explicitly when a
// deeper look is intended.
constexpr int kDefaultOracleCap = 64;

// DAG with (horizon+1) slices: slice 0 carries the initial edges, every later
// slice carries the within-slice step edges, and consecutive slices are glued
// by the cross-slice step edges. Node (var v, slice s) has index s*n + v and
// name "<var>@<s>".
BNTemplate unfold(const DBNTemplate& tmpl, int horizon);

// Ground-truth letter at `time`: unfold to that horizon and answer every
// proposition by plain d-separation on the unrolled DAG. Exponentially less
// clever than the representative construction, which is the point.
Letter oracle_letter(const DBNTemplate& tmpl, const std::vector<CIProposition>& props, int time,
                     int horizon_cap = kDefaultOracleCap);

// The chain whose states enumerate joint configurations in mixed-radix order
// (variable 0 least significant). max_states guards the blowup.
MarkovChain dbn_to_markov_chain(const DBN& dbn, std::size_t max_states = std::size_t{1} << 20);

// Inverse direction: binary variables X0..X{r-1} (X0 least significant), each
// next-slice bit conditioned on the previous configuration and the
// higher-order bits of the new one. Chains whose size is not a power of two
// are padded with absorbing states.
DBN markov_chain_to_dbn(const MarkovChain& chain);

MarkovChain parse_markov_chain(const std::string& json_text);
std::string print_markov_chain(const MarkovChain& chain);

}  // namespace dbnci
