#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "steerlab/classical_bound.hpp"
#include "steerlab/oneway_computing.hpp"
#include "steerlab/serialization.hpp"

using namespace steerlab;

TEST_CASE("graph documents are 1-based") {
    const ColoredGraph g = parse_graph(R"({"n": 3, "d": 3, "edges": [[1, 2], [2, 3]], "colors": [[1, 3], [2]]})");
    CHECK(g.n_vertices() == 3);
    CHECK(g.d() == 3);
    CHECK(g.edges().front().a == 0);
    CHECK(g.edges().back().b == 2);
    CHECK(g.colors() == std::vector<std::vector<std::size_t>>{{0, 2}, {1}});
}

TEST_CASE("graph round trip") {
    for (const Preset& p : {chain(5, 2), star(4, 3), box4(2)}) {
        const ColoredGraph back = parse_graph(dump_graph(p.graph));
        CHECK(back.edges() == p.graph.edges());
        CHECK(back.colors() == p.graph.colors());
        CHECK(back.d() == p.graph.d());
    }
}

TEST_CASE("missing colors fall back to a proper greedy coloring") {
    const ColoredGraph g = parse_graph(R"({"n": 3, "d": 2, "edges": [[1, 2], [2, 3], [1, 3]]})");
    CHECK(g.colors().size() == 3);
    CHECK(validate_coloring(g).empty());
}

TEST_CASE("malformed graph documents") {
    CHECK_THROWS_AS(parse_graph("{"), ValidationError);
    CHECK_THROWS_AS(parse_graph("[]"), ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"n": 2, "d": 2, "edges": [[1, 2]], "colour": [[1], [2]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"n": 2, "d": 2, "edges": [[0, 1]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"n": 2, "d": 2, "edges": [[1, 2]], "colors": [[1, 2]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"n": 2, "edges": [[1, 2]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"n": "two", "d": 2, "edges": []})"), ValidationError);
}

TEST_CASE("spec documents") {
    const WitnessSpec s = parse_spec(R"({"dims": [2, 2], "terms": [
        {"settings": [2, 1], "constraints": [{"participants": [[1, 2], [2, 1]], "modulus": 2}]},
        {"settings": [1, 2], "constraints": [{"participants": [[2, 2], [1, 1]], "modulus": 2, "target": 0}]}]})");
    CHECK(equivalent(s, spec_from_graph(two_vertex(2).graph)));
    CHECK(s.terms()[0].constraints[0].participants.front() == Participant{0, 2});
}

TEST_CASE("spec round trip keeps basis overrides exactly") {
    for (const WitnessSpec& spec : {w4_spec(), w4box_prime_spec(), spec_from_graph(star(3, 3).graph)}) {
        const WitnessSpec back = parse_spec(dump_spec(spec));
        CHECK(equivalent(back, spec));
        CHECK(dump_spec(back) == dump_spec(spec));
    }
    std::vector<WitnessTerm> terms = spec_from_graph(two_vertex(2).graph).terms();
    Matrix y(2, 2);
    y << 1.0, 1.0, Complex(0.0, 1.0), Complex(0.0, -1.0);
    terms[0].settings[1].basis = y / std::sqrt(2.0);
    const WitnessSpec custom(QuditRegister::uniform(2, 2), terms);
    const WitnessSpec back = parse_spec(dump_spec(custom));
    REQUIRE(back.terms()[0].settings[1].basis.has_value());
    CHECK(*back.terms()[0].settings[1].basis == *custom.terms()[0].settings[1].basis);
}

TEST_CASE("malformed spec documents") {
    CHECK_THROWS_AS(parse_spec(R"({"dims": [2, 2]})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"dims": [2, 2], "terms": [{"settings": [2, 1], "constraints": [], "extra": 1}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"dims": [2, 2], "terms": [{"settings": [2, 1], "constraints": [
        {"participants": [[3, 2]], "modulus": 2}]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"dims": [2, 2], "terms": [{"settings": [{"id": 2, "basis": [[[1, 0], [1, 0]], [[1, 0], [1, 0]]]}, 1],
        "constraints": []}]})"),
                    ValidationError);
}

TEST_CASE("graph files") {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / "steerlab_test_graph.json";
    {
        std::ofstream f(path);
        f << dump_graph(chain(4, 2).graph);
    }
    CHECK(load_graph_file(path).edges() == chain(4, 2).graph.edges());
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_graph_file(path), ValidationError);
}
