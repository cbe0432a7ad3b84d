#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbnci {

// Malformed input text: JSON documents, proposition/formula syntax, rationals.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally well-formed input that breaks a semantic contract
// (cyclic templates, non-stochastic CPD rows, unknown variables, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configurable resource limit was hit before the computation finished.
struct BudgetError : std::runtime_error {
    BudgetError(const std::string& what, std::size_t visited)
        : std::runtime_error(what), states_visited(visited) {}
    std::size_t states_visited;
};

}  // namespace dbnci
