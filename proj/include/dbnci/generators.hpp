#pragma once

#include <random>
#include <string>
#include <vector>

#include "dbnci/model.hpp"
#include "dbnci/stochastic.hpp"
#include "dbnci/unfolding.hpp"

namespace dbnci {

struct GeneratedInstance {
    DBNTemplate tmpl;
    CIProposition prop;
};

// Bridge gadget over the first k primes: variable chain X0..Xk with a
// p_i-cycle of W variables between X_{i-1} and X_i. Conditioning on the
// cycle entry points makes X0 and Xk d-connected at exactly the times
// divisible by every p_i, so the independence proposition has period
// p_1 * ... * p_k.
GeneratedInstance gen_prime_bridges(int k);

std::vector<long> first_primes(int k);

// Deterministic automaton over a one-letter alphabet; the initial state is
// the first one listed.
struct UnaryDFA {
    std::vector<std::string> names;
    std::vector<int> delta;
    std::vector<bool> accepting;

    bool accepts(long t) const;
};

std::vector<UnaryDFA> parse_dfas(const std::string& text);

// Same bridge shape with each prime cycle replaced by a DFA's transition
// graph: conditioning on the accepting states, X0 and Xk are d-connected at
// time t exactly when every automaton accepts the length-t word.
GeneratedInstance gen_dfa_intersection(const std::vector<UnaryDFA>& dfas);

// Embedding of a doubly stochastic chain into a parameterized template.
// State 0 of the chain is the distinguished state: writing m for the chain
// size, the constructed model satisfies, at every time n,
//   Pr[X=1|Y=1] - Pr[X=1|Y=0] = 2^-n ((M^n v)_0 - 1/m),
// so the stochastic proposition indep(X; Y) holds at time n exactly when
// (M^n v)_0 = 1/m. Y is a fresh fair coin each slice, so Pr[Y=1] stays 1/2.
struct SkolemInstance {
    MarkovChain chain;
    DBN dbn;
    CIProposition prop;  // indep(X; Y)
    int x_var = 0;
    int y_var = 0;
    std::vector<int> z_vars;
};

SkolemInstance gen_skolem_embedding(const MarkovChain& chain);

// Left side of the identity above, from the embedding's exact distribution.
Rational skolem_difference(const SkolemInstance& inst, const DbnEvaluator& ev, int n);
// Right side, by direct matrix powering of the input chain.
Rational skolem_closed_form(const MarkovChain& chain, int n);

// Random template over variables V0..V{n-1}; intra-slice edges follow a
// random topological order. With restricted=true the initial edges are a
// subset of the intra-slice step edges.
DBNTemplate random_template(int n_vars, std::mt19937_64& rng, bool restricted);

// Convex combination of `terms` random permutation matrices with rational
// weights; columns and rows both sum to one.
MarkovChain random_doubly_stochastic(std::size_t size, int terms, std::mt19937_64& rng);

}  // namespace dbnci
