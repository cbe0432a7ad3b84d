#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "dbnci/errors.hpp"
#include "dbnci/generators.hpp"
#include "dbnci/repr_ts.hpp"
#include "dbnci/unfolding.hpp"
#include "oracle_helpers.hpp"

using namespace dbnci;

namespace {

std::string data_file(const std::string& name) {
    const char* dir = std::getenv("DBNCI_DATA_DIR");
    REQUIRE(dir != nullptr);
    std::ifstream in(std::string(dir) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("pair indexing is a bijection") {
    int n = 5;
    std::set<std::size_t> seen;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) seen.insert(pair_index(n, i, j));
    CHECK(seen.size() == 10);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 9);
    CHECK(pair_index(n, 1, 3) == pair_index(n, 1, 3));
}

TEST_CASE("three chained workers reach their fixpoint state by state") {
    DBNTemplate tmpl = parse_dbn(data_file("workers.json")).tmpl;
    std::vector<CIProposition> props{parse_proposition("indep(W1;W3)", tmpl)};

    LassoTrace tr = find_lasso(tmpl, props);
    REQUIRE(tr.prefix_states.size() == 3);
    REQUIRE(tr.period_states.size() == 1);

    CHECK(tr.prefix_states[0].is_initial);
    CHECK(tr.prefix_states[0].u_pairs().empty());
    CHECK_FALSE(tr.prefix_states[1].is_initial);
    CHECK(tr.prefix_states[1].u_pairs().empty());
    CHECK(tr.prefix_states[2].u_pairs() ==
          std::vector<std::pair<int, int>>{{0, 2}});
    CHECK(tr.period_states[0].u_pairs() ==
          std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});

    // The final state is a fixpoint of the successor map.
    CHECK(successor(tmpl, tr.period_states[0]) == tr.period_states[0]);

    // W1 and W3 stay independent for two steps, then couple forever.
    CHECK(tr.letter_at(0) == 1);
    CHECK(tr.letter_at(1) == 1);
    for (std::size_t t = 2; t < 10; ++t) CHECK(tr.letter_at(t) == 0);
}

TEST_CASE("materialized states expose the recorded pairs as forks") {
    DBNTemplate tmpl = parse_dbn(data_file("workers.json")).tmpl;
    LassoTrace tr = find_lasso(tmpl, {});
    const ReprState& last = tr.period_states.at(0);
    BNTemplate bn = materialize(tmpl, last);
    REQUIRE(bn.nodes.size() == 6);  // three variables plus three fork nodes
    int forks = 0;
    for (std::size_t v = 0; v < bn.nodes.size(); ++v) {
        if (bn.nodes[v].rfind("$U_", 0) == 0) {
            ++forks;
            CHECK(bn.parents[v].empty());
            CHECK(bn.children[v].size() == 2);
        }
    }
    CHECK(forks == 3);

    // The initial state materializes the initial slice itself.
    BNTemplate first = materialize(tmpl, initial_state(tmpl));
    CHECK(first.edges == initial_bn(tmpl).edges);
}

TEST_CASE("representative labels equal brute-force unfolding labels") {
    std::mt19937_64 rng(123456);
    int mismatches = 0;
    for (int round = 0; round < 100; ++round) {
        int n = 2 + static_cast<int>(rng() % 3);  // up to 4 variables
        DBNTemplate tmpl = random_template(n, rng, rng() % 2 == 0);
        std::vector<CIProposition> props{oracle::random_prop(n, rng),
                                         oracle::random_prop(n, rng)};
        LassoTrace tr = find_lasso(tmpl, props);
        for (int t = 0; t <= 10; ++t) {
            if (tr.letter_at(static_cast<std::size_t>(t)) !=
                oracle_letter(tmpl, props, t))
                ++mismatches;
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("restricted fast path agrees with the generic search") {
    std::mt19937_64 rng(777);
    for (int round = 0; round < 60; ++round) {
        int n = 2 + static_cast<int>(rng() % 3);
        DBNTemplate tmpl = random_template(n, rng, true);
        REQUIRE(is_restricted(tmpl));
        std::vector<CIProposition> props{oracle::random_prop(n, rng)};
        LassoTrace fast = restricted_trace(tmpl, props);
        LassoTrace slow = find_lasso(tmpl, props);
        std::size_t span = fast.positions() + slow.positions() + 4;
        for (std::size_t t = 0; t < span; ++t)
            REQUIRE(fast.letter_at(t) == slow.letter_at(t));
    }
}

TEST_CASE("restricted fast path rejects unrestricted templates") {
    GeneratedInstance bridge = gen_prime_bridges(1);
    REQUIRE_FALSE(is_restricted(bridge.tmpl));
    CHECK_THROWS_AS(restricted_trace(bridge.tmpl, {bridge.prop}), ValidationError);
}

TEST_CASE("state budget interrupts the search") {
    GeneratedInstance bridge = gen_prime_bridges(2);
    try {
        find_lasso(bridge.tmpl, {bridge.prop}, 3);
        FAIL("expected a budget error");
    } catch (const BudgetError& e) {
        CHECK(e.states_visited >= 3);
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("too many propositions are rejected") {
    DBNTemplate tmpl = parse_dbn(data_file("workers.json")).tmpl;
    std::vector<CIProposition> props(65, parse_proposition("indep(W1;W3)", tmpl));
    CHECK_THROWS_AS(find_lasso(tmpl, props), ValidationError);
}

TEST_CASE("lasso letters wrap around the period") {
    DBNTemplate tmpl = gen_prime_bridges(1).tmpl;
    CIProposition prop = gen_prime_bridges(1).prop;
    LassoTrace tr = find_lasso(tmpl, {prop});
    REQUIRE(tr.period.size() >= 1);
    for (std::size_t t = 0; t < 3 * tr.period.size(); ++t) {
        CHECK(tr.letter_at(tr.prefix.size() + t) ==
              tr.period[t % tr.period.size()]);
    }
}
