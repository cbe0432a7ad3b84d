#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "dbnci/errors.hpp"
#include "dbnci/stochastic.hpp"
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

DBN load_dbn(const std::string& name) {
    ModelFile mf = parse_dbn(data_file(name));
    REQUIRE(mf.dbn.has_value());
    return *mf.dbn;
}

}  // namespace

TEST_CASE("independent coins stay uniform and independent") {
    DBN dbn = load_dbn("coin.json");
    DbnEvaluator ev(dbn);
    for (int t = 0; t <= 5; ++t) {
        const RationalDistribution& d = ev.distribution_at(t);
        REQUIRE(d.values.size() == 4);
        for (const Rational& q : d.values) CHECK(q == make_rational(1, 4));
        CHECK(ev.stochastic_ci(parse_proposition("indep(A;B)", dbn.tmpl,
                                                 CIProposition::Kind::stochastic),
                               t));
    }
}

TEST_CASE("a copied bit is dependent from the first step on") {
    DBN dbn = load_dbn("copybit.json");
    DbnEvaluator ev(dbn);
    CIProposition prop =
        parse_proposition("indep(X;Y)", dbn.tmpl, CIProposition::Kind::stochastic);
    CHECK(ev.stochastic_ci(prop, 0));
    for (int t = 1; t <= 6; ++t) CHECK_FALSE(ev.stochastic_ci(prop, t));

    // From t >= 1 the configurations 01 and 10 are impossible.
    const RationalDistribution& d = ev.distribution_at(3);
    CHECK(d.values[0] == make_rational(1, 2));
    CHECK(d.values[1] == 0);
    CHECK(d.values[2] == 0);
    CHECK(d.values[3] == make_rational(1, 2));
}

TEST_CASE("distribution queries memoize consistently") {
    DBN dbn = load_dbn("copybit.json");
    DbnEvaluator out_of_order(dbn);
    out_of_order.distribution_at(4);
    const RationalDistribution& late = out_of_order.distribution_at(2);
    DbnEvaluator in_order(dbn);
    in_order.distribution_at(1);
    CHECK(late.values == in_order.distribution_at(2).values);
    CHECK(out_of_order.distribution_at(0).sum() == 1);
    CHECK(out_of_order.distribution_at(6).sum() == 1);
    CHECK_THROWS_AS(out_of_order.distribution_at(-1), ValidationError);
}

TEST_CASE("random models agree with trajectory enumeration") {
    std::mt19937_64 rng(60601);
    int ci_checked = 0;
    for (int round = 0; round < 60; ++round) {
        int n = 1 + static_cast<int>(rng() % 3);
        DBNTemplate tmpl = random_template(n, rng, rng() % 2 == 0);
        DBN dbn = oracle::random_binary_dbn(tmpl, rng);
        validate_dbn(dbn);

        int horizon = 4;
        oracle::TrajectoryJoint slow(dbn, horizon);
        DbnEvaluator ev(dbn);
        for (int t = 0; t <= horizon; ++t) {
            REQUIRE(ev.distribution_at(t).values == slow.at(t));
        }
        if (n >= 2) {
            for (int q = 0; q < 3; ++q) {
                CIProposition prop = oracle::random_prop(n, rng);
                prop.kind = CIProposition::Kind::stochastic;
                int t = static_cast<int>(rng() % 5);
                CHECK(ev.stochastic_ci(prop, t) ==
                      oracle::ci_on_joint(dbn, slow.at(t), prop));
                ++ci_checked;
            }
        }
    }
    CHECK(ci_checked > 100);
}

TEST_CASE("stochastic traces pack letters over the proposition list") {
    DBN dbn = load_dbn("copybit.json");
    DbnEvaluator ev(dbn);
    CIProposition prop =
        parse_proposition("indep(X;Y)", dbn.tmpl, CIProposition::Kind::stochastic);
    std::vector<Letter> letters = ev.stochastic_trace({prop}, 4);
    CHECK(letters == std::vector<Letter>{1, 0, 0, 0, 0});
}

TEST_CASE("bounded checking distinguishes all four endings") {
    DBN coin = load_dbn("coin.json");
    DBN copy = load_dbn("copybit.json");
    auto formula = [](const DBN& dbn, const std::string& text) {
        return parse_ltl(text, dbn.tmpl, CIProposition::Kind::stochastic);
    };

    SUBCASE("conclusive violation") {
        DbnEvaluator ev(copy);
        BoundedVerdict v = bounded_check(ev, formula(copy, "G indep(X;Y)"), 8);
        CHECK(v.outcome == BoundedVerdict::Outcome::violated_at);
        CHECK(v.position == 1);
        CHECK(v.conclusive);
    }
    SUBCASE("conclusive success") {
        DbnEvaluator ev(copy);
        BoundedVerdict v = bounded_check(ev, formula(copy, "F !indep(X;Y)"), 8);
        CHECK(v.outcome == BoundedVerdict::Outcome::holds_up_to);
        CHECK(v.conclusive);
        REQUIRE(v.decided_at.has_value());
        CHECK(*v.decided_at == 1);
    }
    SUBCASE("open success") {
        DbnEvaluator ev(coin);
        BoundedVerdict v = bounded_check(ev, formula(coin, "G indep(A;B)"), 8);
        CHECK(v.outcome == BoundedVerdict::Outcome::holds_up_to);
        CHECK_FALSE(v.conclusive);
        CHECK(v.horizon == 8);
    }
    SUBCASE("fully open") {
        DbnEvaluator ev(coin);
        BoundedVerdict v = bounded_check(ev, formula(coin, "F !indep(A;B)"), 8);
        CHECK(v.outcome == BoundedVerdict::Outcome::unknown);
        CHECK_FALSE(v.conclusive);
    }
}

TEST_CASE("zero probability contexts do not break independence checks") {
    // B is a constant, so conditioning on its impossible value must not
    // produce spurious dependence.
    ModelFile mf = parse_dbn(R"json({
        "variables": ["A", "B"],
        "cpds": {
            "A":  {"parents": [], "table": [{"given": [], "dist": ["1/2", "1/2"]}]},
            "B":  {"parents": [], "table": [{"given": [], "dist": ["1", "0"]}]},
            "A'": {"parents": [], "table": [{"given": [], "dist": ["1/2", "1/2"]}]},
            "B'": {"parents": [], "table": [{"given": [], "dist": ["1", "0"]}]}}})json");
    REQUIRE(mf.dbn.has_value());
    DbnEvaluator ev(*mf.dbn);
    CIProposition prop =
        parse_proposition("indep(A;B)", mf.dbn->tmpl, CIProposition::Kind::stochastic);
    for (int t = 0; t <= 3; ++t) CHECK(ev.stochastic_ci(prop, t));
}

TEST_CASE("evaluator guards the configuration blowup") {
    DBNTemplate tmpl;
    for (int i = 0; i < 21; ++i)
        tmpl.variables.push_back({"V" + std::to_string(i), i});
    DBN dbn;
    dbn.tmpl = tmpl;
    dbn.domains.assign(21, {"0", "1"});
    CHECK_THROWS_AS(DbnEvaluator(dbn, 1 << 20), BudgetError);
}
