#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dbnci/errors.hpp"
#include "dbnci/generators.hpp"
#include "dbnci/model.hpp"
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

template <typename E, typename F>
bool throws_containing(F&& f, const std::string& needle) {
    try {
        f();
    } catch (const E& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    } catch (...) {
        return false;
    }
    return false;
}

const char* kTinyModel = R"({
  "variables": ["A", "B", "C"],
  "initial_edges": [["A", "B"]],
  "step_edges": [["A", "A'"], ["A'", "B'"], ["B", "C'"]]
})";

}  // namespace

TEST_CASE("template parsing and round trip") {
    ModelFile mf = parse_dbn(kTinyModel);
    CHECK(mf.tmpl.n() == 3);
    CHECK(mf.tmpl.variables[0].name == "A");
    CHECK(mf.tmpl.initial_edges == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(mf.tmpl.step_edges.size() == 3);
    CHECK_FALSE(mf.dbn.has_value());

    ModelFile again = parse_dbn(print_template(mf.tmpl));
    CHECK(again.tmpl == mf.tmpl);

    SUBCASE("intra and cross step views") {
        auto intra = mf.tmpl.intra_step_edges();
        auto cross = mf.tmpl.cross_step_edges();
        CHECK(intra == std::vector<std::pair<int, int>>{{0, 1}});
        CHECK(cross == std::vector<std::pair<int, int>>{{0, 0}, {1, 2}});
    }
    SUBCASE("index lookup") {
        CHECK(mf.tmpl.index_of("C") == 2);
        CHECK(mf.tmpl.index_of("missing") == -1);
    }
}

TEST_CASE("fixture models parse as expected") {
    ModelFile monitor = parse_dbn(data_file("monitor.json"));
    CHECK(monitor.tmpl.n() == 4);
    CHECK(monitor.tmpl.initial_edges.size() == 2);
    CHECK(monitor.tmpl.step_edges.size() == 7);
    CHECK(is_restricted(monitor.tmpl));
    CHECK(monitor.propositions == std::vector<std::string>{"indep(O;S|L)"});

    ModelFile workers = parse_dbn(data_file("workers.json"));
    CHECK(workers.tmpl.n() == 3);
    CHECK(workers.tmpl.initial_edges.empty());
    CHECK(is_restricted(workers.tmpl));

    ModelFile coin = parse_dbn(data_file("coin.json"));
    REQUIRE(coin.dbn.has_value());
    validate_dbn(*coin.dbn);
    ModelFile coin2 = parse_dbn(print_dbn(*coin.dbn, coin.propositions));
    CHECK(coin2.dbn.has_value());
    CHECK(*coin2.dbn == *coin.dbn);
}

TEST_CASE("structural validation rejects malformed templates") {
    CHECK_THROWS_AS(parse_dbn("not json"), ParseError);
    CHECK_THROWS_AS(parse_dbn("[]"), ParseError);
    CHECK(throws_containing<ValidationError>(
        [] { parse_dbn(R"({"variables": ["A", "A"]})"); }, "duplicate"));
    CHECK(throws_containing<ValidationError>(
        [] {
            parse_dbn(R"({"variables": ["A"], "initial_edges": [["A", "B"]]})");
        },
        "unknown"));
    CHECK(throws_containing<ValidationError>(
        [] {
            parse_dbn(R"({"variables": ["A", "B"], "step_edges": [["A", "B"]]})");
        },
        "primed"));
    CHECK(throws_containing<ValidationError>(
        [] {
            parse_dbn(
                R"({"variables": ["A", "B"],
                    "initial_edges": [["A", "B"], ["B", "A"]]})");
        },
        "acyclic"));
    CHECK(throws_containing<ValidationError>(
        [] {
            parse_dbn(
                R"({"variables": ["A", "B"],
                    "step_edges": [["A'", "B'"], ["B'", "A'"]]})");
        },
        "acyclic"));
    // Cross-slice self loops are legitimate.
    CHECK_NOTHROW(parse_dbn(R"({"variables": ["A"], "step_edges": [["A", "A'"]]})"));
    CHECK(throws_containing<ParseError>(
        [] { parse_dbn(R"({"variables": ["A"], "extra": 1})"); }, "unknown key"));
}

TEST_CASE("CPD parsing is exact and strict") {
    auto model = [](const std::string& dist_row) {
        return std::string(R"({"variables": ["A"], "step_edges": [["A", "A'"]], "cpds": {
            "A": {"parents": [], "table": [{"given": [], "dist": ["1/2", "1/2"]}]},
            "A'": {"parents": ["A"], "table": [
                {"given": ["0"], "dist": )") +
               dist_row + R"(},
                {"given": ["1"], "dist": ["0", "1"]}]}}})";
    };
    ModelFile ok = parse_dbn(model(R"(["0.25", "0.75"])"));
    REQUIRE(ok.dbn.has_value());
    CHECK(ok.dbn->step_cpds[0].rows[0][0] == make_rational(1, 4));

    CHECK(throws_containing<ParseError>([&] { parse_dbn(model(R"([0.25, 0.75])")); },
                                        "float literals lose exactness"));
    CHECK(throws_containing<ValidationError>(
        [&] { parse_dbn(model(R"(["1/3", "1/3"])")); }, "sums to"));
    CHECK(throws_containing<ValidationError>(
        [&] { parse_dbn(model(R"(["-1/2", "3/2"])")); }, "negative"));
    CHECK(throws_containing<ValidationError>(
        [&] { parse_dbn(model(R"(["1/2", "1/4", "1/4"])")); }, "length"));

    CHECK(throws_containing<ValidationError>(
        [] {
            parse_dbn(R"({"variables": ["A"], "cpds": {
                "A": {"parents": [], "table": [{"given": [], "dist": ["1", "0"]}]}}})");
        },
        "missing CPD"));
    CHECK(throws_containing<ValidationError>(
        [] {
            parse_dbn(R"({"variables": ["A", "B"], "initial_edges": [["A", "B"]], "cpds": {
                "A": {"parents": [], "table": [{"given": [], "dist": ["1", "0"]}]},
                "B": {"parents": [], "table": [{"given": [], "dist": ["1", "0"]}]},
                "A'": {"parents": [], "table": [{"given": [], "dist": ["1", "0"]}]},
                "B'": {"parents": [], "table": [{"given": [], "dist": ["1", "0"]}]}}})");
        },
        "does not match the template edges"));
}

TEST_CASE("proposition parsing canonicalizes") {
    ModelFile mf = parse_dbn(kTinyModel);
    CIProposition p = parse_proposition("indep(B , A ; C)", mf.tmpl);
    CHECK(p.x == std::vector<int>{0, 1});
    CHECK(p.y == std::vector<int>{2});
    CHECK(p.z.empty());

    // Swapping the two sides names the same statement.
    CHECK(parse_proposition("indep(C;A)", mf.tmpl) ==
          parse_proposition("indep(A;C)", mf.tmpl));
    CHECK(parse_proposition("indep(A;B|C)", mf.tmpl).z == std::vector<int>{2});
    CHECK(parse_proposition("indep(A;B)", mf.tmpl).to_string(mf.tmpl) == "indep(A;B)");
    CHECK(parse_proposition("indep(C;A,B)", mf.tmpl).to_string(mf.tmpl) ==
          "indep(A,B;C)");

    CHECK_THROWS_AS(parse_proposition("indep(A;)", mf.tmpl), ParseError);
    CHECK_THROWS_AS(parse_proposition("indep(A,B)", mf.tmpl), ParseError);
    CHECK(throws_containing<ValidationError>(
        [&] { parse_proposition("indep(A;A)", mf.tmpl); }, "disjoint"));
    CHECK(throws_containing<ValidationError>(
        [&] { parse_proposition("indep(A;B|A)", mf.tmpl); }, "disjoint"));
    CHECK(throws_containing<ValidationError>(
        [&] { parse_proposition("indep(A;Q)", mf.tmpl); }, "unknown variable"));
    CHECK_THROWS_AS(parse_proposition("indep(A;B) junk", mf.tmpl), ParseError);
}

TEST_CASE("proposition interning and letters") {
    ModelFile mf = parse_dbn(kTinyModel);
    PropositionSet set;
    int a = set.intern(parse_proposition("indep(A;B)", mf.tmpl));
    int b = set.intern(parse_proposition("indep(A;C)", mf.tmpl));
    CHECK(a == 0);
    CHECK(b == 1);
    CHECK(set.intern(parse_proposition("indep(B;A)", mf.tmpl)) == a);
    CHECK(set.find(parse_proposition("indep(C;A)", mf.tmpl)) == b);
    CHECK(set.find(parse_proposition("indep(B;C)", mf.tmpl)) == -1);

    std::string text = letter_to_string(0b10, set.props, mf.tmpl);
    CHECK(text.find("indep(A;C)") != std::string::npos);
    CHECK(text.find("indep(A;B)") == std::string::npos);
}

TEST_CASE("restricted templates require initial edges inside the step slice") {
    ModelFile mf = parse_dbn(kTinyModel);
    CHECK(is_restricted(mf.tmpl));  // A->B mirrored by A'->B'

    ModelFile loose = parse_dbn(R"({
        "variables": ["A", "B"],
        "initial_edges": [["A", "B"]],
        "step_edges": [["A", "A'"]]})");
    CHECK_FALSE(is_restricted(loose.tmpl));
}

TEST_CASE("slice zero projection") {
    ModelFile mf = parse_dbn(kTinyModel);
    BNTemplate bn = initial_bn(mf.tmpl);
    CHECK(bn.nodes == std::vector<std::string>{"A", "B", "C"});
    CHECK(bn.edges == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(bn.children[0] == std::vector<int>{1});
    CHECK(bn.parents[1] == std::vector<int>{0});
}

TEST_CASE("BN structure rejects cycles") {
    BNTemplate bn;
    int a = bn.add_node("a");
    int b = bn.add_node("b");
    bn.add_edge(a, b);
    bn.add_edge(b, a);
    CHECK_THROWS_AS(bn.finalize(), ValidationError);
}

TEST_CASE("rational text parsing") {
    CHECK(parse_rational("0.2") == make_rational(1, 5));
    CHECK(parse_rational("3/6") == make_rational(1, 2));
    CHECK(parse_rational("-2") == make_rational(-2));
    CHECK(format_rational(make_rational(2, 4)) == "1/2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
}
