#include <doctest.h>

#include <chrono>
#include <cmath>

#include "oracles.hpp"
#include "steerlab/classical_bound.hpp"

using namespace steerlab;

TEST_CASE("gamma recursion") {
    CHECK(gamma(2) == 0);
    CHECK(gamma(3) == 1);
    CHECK(gamma(4) == 4);
    CHECK(gamma(5) == 9);
    for (int q = 2; q <= 40; ++q) {
        CHECK(gamma(q) == static_cast<long long>(q - 2) * (q - 2));
    }
    CHECK_THROWS_AS(gamma(1), ValidationError);
}

TEST_CASE("closed-form bound values") {
    CHECK(closed_form_bound(2, 2) == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(closed_form_bound(2, 2) - 1.707106781) < 1e-9);
    CHECK(closed_form_bound(3, 2) == doctest::Approx(0.5 * (3.0 + std::sqrt(5.5))));
    CHECK(std::abs(closed_form_bound(3, 2) - 2.6726039) < 1e-6);
    for (int d = 2; d <= 9; ++d) {
        CHECK(closed_form_bound(2, d) == doctest::Approx(1.0 + 1.0 / std::sqrt(static_cast<double>(d))));
        // Always strictly between q / 2 and q.
        for (int q = 2; q <= 6; ++q) {
            CHECK(closed_form_bound(q, d) < q);
            CHECK(closed_form_bound(q, d) > q / 2.0);
        }
    }
    CHECK_THROWS_AS(closed_form_bound(1, 2), ValidationError);
    CHECK_THROWS_AS(closed_form_bound(2, 1), ValidationError);
}

TEST_CASE("eigenvalue bound agrees with the closed form only at q = 2") {
    for (int d = 2; d <= 7; ++d) {
        CHECK(eigenvalue_bound_q2(d) == doctest::Approx(closed_form_bound(2, d)).epsilon(1e-12));
    }
    CHECK(std::abs(eigenvalue_bound(3, 2) - (3.0 + std::sqrt(5.0)) / 2.0) < 1e-12);
    CHECK(std::abs(eigenvalue_bound(3, 2) - 2.618034) < 1e-6);
    CHECK(eigenvalue_bound(3, 2) < closed_form_bound(3, 2));
}

TEST_CASE("brute force on chain4 reproduces 1 + 1/sqrt(2)") {
    const auto start = std::chrono::steady_clock::now();
    const WitnessSpec spec = spec_from_graph(chain(4, 2).graph);
    const BruteForceResult r = brute_force_bound(spec);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(std::abs(r.value - closed_form_bound(2, 2)) < 1e-9);
    CHECK(seconds < 10.0);
    // The winning strategy replays to the same value, checked with the bisection oracle.
    CHECK(replay_strategy(spec, r.strategy) == doctest::Approx(r.value).epsilon(1e-12));
    CHECK(oracle::max_eigenvalue(strategy_operator(spec, r.strategy).matrix()) == doctest::Approx(r.value).epsilon(1e-9));
    // 14 subsets, 2^(|A| q) tables each: sum_k C(4,k) 4^k for k = 1..3.
    CHECK(r.strategies_examined == 4 * 4 + 6 * 16 + 4 * 64);
}

TEST_CASE("brute force matches the closed form for other two-colorable graphs") {
    for (const Preset& p : {two_vertex(2), two_vertex(3), star(3, 2), star(3, 3), chain(3, 3), box4(2), star(4, 2)}) {
        CAPTURE(p.name);
        const BruteForceResult r = brute_force_bound(spec_from_graph(p.graph));
        CHECK(r.value == doctest::Approx(closed_form_bound(2, p.graph.d())).epsilon(1e-9));
    }
}

TEST_CASE("two-vertex strategy by hand") {
    // Party 1 untrusted, declaring 0 in both terms: party 2 needs outcome 0 in
    // the computational basis and outcome 0 in the Fourier basis.
    const WitnessSpec spec = spec_from_graph(two_vertex(3).graph);
    const CheatingStrategy s{{0}, {{0, 0}}};
    CHECK(replay_strategy(spec, s) == doctest::Approx(1.0 + 1.0 / std::sqrt(3.0)));
    CHECK_THROWS_AS(replay_strategy(spec, CheatingStrategy{{0}, {{0}}}), ValidationError);
    CHECK_THROWS_AS(replay_strategy(spec, CheatingStrategy{{0}, {{0, 3}}}), ValidationError);
    CHECK_THROWS_AS(replay_strategy(spec, CheatingStrategy{{0, 1}, {{0, 0}, {0, 0}}}), ValidationError);
    CHECK_THROWS_AS(replay_strategy(spec, CheatingStrategy{{}, {}}), ValidationError);
}

TEST_CASE("ties go to the first strategy found") {
    const WitnessSpec spec = spec_from_graph(two_vertex(2).graph);
    const BruteForceResult r = brute_force_bound(spec);
    // Mask 1 (party 1 untrusted) with the all-zero table is optimal and enumerated first.
    CHECK(r.strategy.untrusted == std::vector<std::size_t>{0});
    CHECK(r.strategy.declared == std::vector<std::vector<int>>{{0, 0}});
}

TEST_CASE("brute force refuses specs beyond its caps") {
    CHECK_THROWS_AS(brute_force_bound(spec_from_graph(chain(5, 2).graph)), CapExceeded);
    CHECK_THROWS_AS(brute_force_bound(spec_from_graph(two_vertex(4).graph)), CapExceeded);
    // Three settings for party 1 across three terms.
    const ColoredGraph triangle(3, 2, {{0, 1}, {1, 2}, {0, 2}}, {{0}, {1}, {2}});
    const WitnessSpec spec = spec_from_graph(triangle);
    CHECK(brute_force_bound(spec).value > 0.0);  // two settings per party: within caps
    std::vector<WitnessTerm> terms = spec.terms();
    Matrix y(2, 2);
    y << 1.0, 1.0, Complex(0.0, 1.0), Complex(0.0, -1.0);
    terms[0].settings[1].basis = y / std::sqrt(2.0);
    const WitnessSpec three_settings(spec.reg(), terms);
    CHECK_THROWS_AS(brute_force_bound(three_settings), CapExceeded);
}

TEST_CASE("raising the caps is allowed") {
    BruteForceOptions wide;
    wide.max_dimension = 4;
    const BruteForceResult r = brute_force_bound(spec_from_graph(two_vertex(4).graph), wide);
    CHECK(r.value == doctest::Approx(1.5).epsilon(1e-9));
}
