#include <doctest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"
#include "steerlab/classical_bound.hpp"
#include "steerlab/oneway_computing.hpp"
#include "steerlab/witness_kernel.hpp"

using namespace steerlab;

TEST_CASE("ideal graph states reach the kernel maximum q") {
    const std::vector<Preset> presets{chain(3, 2), chain(4, 2), chain(4, 3), star(3, 2), star(4, 2), box4(2),
                                      two_vertex(2), two_vertex(3), two_vertex(4), two_vertex(5)};
    for (const Preset& p : presets) {
        const WitnessSpec spec = spec_from_graph(p.graph);
        CHECK(evaluate_kernel(spec, p.state) == doctest::Approx(static_cast<double>(spec.q())).epsilon(1e-12));
        CHECK(evaluate_kernel(spec, DensityOperator::from_pure(p.state)) ==
              doctest::Approx(static_cast<double>(spec.q())).epsilon(1e-12));
    }
}

TEST_CASE("spec from a graph follows the neighbor constraints") {
    const WitnessSpec spec = spec_from_graph(chain(4, 3).graph);
    REQUIRE(spec.q() == 2);
    const WitnessTerm& t0 = spec.terms()[0];
    CHECK(t0.settings[0].id == 2);
    CHECK(t0.settings[1].id == 1);
    REQUIRE(t0.constraints.size() == 2);
    // Vertex 1 with neighbor 2; vertex 3 with neighbors 2 and 4.
    CHECK(t0.constraints[0].participants == std::vector<Participant>{{0, 2}, {1, 1}});
    CHECK(t0.constraints[1].participants == std::vector<Participant>{{2, 2}, {1, 1}, {3, 1}});
    CHECK(t0.constraints[1].modulus == 3);
}

TEST_CASE("kernel evaluation agrees with the enumeration oracle on random states") {
    const std::vector<Preset> presets{chain(3, 2), star(3, 3), box4(2), two_vertex(4)};
    std::uint64_t seed = 1;
    for (const Preset& p : presets) {
        const WitnessSpec spec = spec_from_graph(p.graph);
        for (int i = 0; i < 5; ++i) {
            const DensityOperator rho = random_mixed_state(spec.reg(), seed++);
            CHECK(evaluate_kernel(spec, rho) == doctest::Approx(oracle::kernel(spec, rho.matrix())).epsilon(1e-12));
            const StateVector psi = random_pure_state(spec.reg(), seed++);
            CHECK(evaluate_kernel(spec, psi) ==
                  doctest::Approx(oracle::kernel(spec, DensityOperator::from_pure(psi).matrix())).epsilon(1e-12));
        }
    }
}

TEST_CASE("sampled kernel lies within three standard errors") {
    const Preset p = chain(3, 2);
    const WitnessSpec spec = spec_from_graph(p.graph);
    const DensityOperator rho = random_mixed_state(spec.reg(), 77);
    const auto [mean, se] = oracle::sampled_kernel(spec, rho.matrix(), 100000, 5);
    CHECK(std::abs(mean - evaluate_kernel(spec, rho)) <= 3.0 * se);
}

TEST_CASE("maximally mixed kernel counts satisfying outcomes") {
    for (const Preset& p : {chain(4, 2), star(3, 3), box4(2), two_vertex(5)}) {
        const WitnessSpec spec = spec_from_graph(p.graph);
        CHECK(evaluate_kernel_maximally_mixed(spec) ==
              doctest::Approx(evaluate_kernel(spec, DensityOperator::maximally_mixed(spec.reg()))).epsilon(1e-12));
    }
    // Each constraint cuts the outcomes by d: chain4 has two constraints per term.
    CHECK(evaluate_kernel_maximally_mixed(spec_from_graph(chain(4, 2).graph)) == doctest::Approx(0.5));
}

TEST_CASE("kernel operator has eigenvalues within [0, q] and its top eigenvector is the graph state") {
    const Preset p = chain(4, 2);
    const WitnessSpec spec = spec_from_graph(p.graph);
    const LinearOperator k = kernel_operator(spec);
    const std::vector<double> ev = hermitian_eigenvalues(k.matrix());
    CHECK(ev.front() > -1e-12);
    CHECK(ev.back() == doctest::Approx(2.0));
    const Vector kpsi = k.matrix() * p.state.amplitudes();
    CHECK((kpsi - 2.0 * p.state.amplitudes()).norm() < 1e-12);
    for (const WitnessTerm& t : spec.terms()) {
        const Matrix proj = term_projector(t, spec.reg()).matrix();
        CHECK((proj * proj - proj).norm() < 1e-12);
    }
}

TEST_CASE("local conjugation is undone by rotating the state") {
    const Preset p = star(3, 3);
    const WitnessSpec spec = spec_from_graph(p.graph);
    const LinearOperator u(QuditRegister({3}), oracle::random_unitary(3, 3));
    REQUIRE(u.is_unitary());
    const std::map<std::size_t, LinearOperator> rot{{1, u}, {2, qft_matrix(3)}};
    const WitnessSpec rotated = apply_local_conjugation(spec, rot);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityOperator rho = random_mixed_state(spec.reg(), seed);
        const std::array<std::size_t, 1> t1{1};
        const std::array<std::size_t, 1> t2{2};
        const DensityOperator moved = apply_local(qft_matrix(3), t2, apply_local(u, t1, rho));
        CHECK(evaluate_kernel(rotated, moved) == doctest::Approx(evaluate_kernel(spec, rho)).epsilon(1e-12));
    }
}

TEST_CASE("Hadamard conjugation relabels named settings instead of storing overrides") {
    const WitnessSpec prime = w4_prime_spec();
    for (const WitnessTerm& t : prime.terms()) {
        for (const LocalSetting& s : t.settings) {
            CHECK_FALSE(s.basis.has_value());
        }
    }
    // P(v1^(2) + v2^(2) + v3^(1) = 0, v3^(1) + v4^(1) = 0) + P(v2^(1) + v3^(2) + v4^(2) = 0, v1^(1) + v2^(1) = 0)
    WitnessTerm a;
    a.settings = {{2, {}}, {2, {}}, {1, {}}, {1, {}}};
    a.constraints = {{{{0, 2}, {1, 2}, {2, 1}}, 2, 0}, {{{2, 1}, {3, 1}}, 2, 0}};
    WitnessTerm b;
    b.settings = {{1, {}}, {1, {}}, {2, {}}, {2, {}}};
    b.constraints = {{{{1, 1}, {2, 2}, {3, 2}}, 2, 0}, {{{0, 1}, {1, 1}}, 2, 0}};
    const WitnessSpec literal(QuditRegister::uniform(4, 2), {a, b});
    CHECK(equivalent(prime, literal));
    CHECK(evaluate_kernel(literal, g4_prime().state) == doctest::Approx(2.0));
}

TEST_CASE("the rotated box witness coincides with the rotated chain witness") {
    const WitnessSpec box_prime = w4box_prime_spec();
    CHECK(equivalent(box_prime, w4_prime_spec()));
    CHECK_FALSE(equivalent(w4box_spec(), w4_spec()));
    CHECK(evaluate_kernel(box_prime, g4_prime().state) == doctest::Approx(2.0));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DensityOperator rho = random_mixed_state(QuditRegister::uniform(4, 2), 500 + seed);
        CHECK(evaluate_kernel(box_prime, rho) == doctest::Approx(evaluate_kernel(w4_prime_spec(), rho)).epsilon(1e-10));
    }
}

TEST_CASE("permuting parties moves settings and constraints") {
    const WitnessSpec spec = spec_from_graph(star(3, 2).graph);
    const std::array<std::size_t, 3> perm{2, 0, 1};
    const WitnessSpec moved = permute_parties(spec, perm);
    const DensityOperator rho = random_mixed_state(spec.reg(), 8);
    // Relabel the state the same way: party k of rho becomes party perm[k].
    const QuditRegister& reg = rho.reg();
    Matrix m(8, 8);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            const auto vi = reg.digits(i);
            const auto vj = reg.digits(j);
            std::vector<int> wi(3);
            std::vector<int> wj(3);
            for (std::size_t k = 0; k < 3; ++k) {
                wi[perm[k]] = vi[k];
                wj[perm[k]] = vj[k];
            }
            m(static_cast<Eigen::Index>(reg.index(wi)), static_cast<Eigen::Index>(reg.index(wj))) =
                rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    const DensityOperator rho_moved = DensityOperator::from_matrix(reg, m);
    CHECK(evaluate_kernel(moved, rho_moved) == doctest::Approx(evaluate_kernel(spec, rho)).epsilon(1e-12));
    const std::array<std::size_t, 3> bad{0, 0, 1};
    CHECK_THROWS_AS(permute_parties(spec, bad), ValidationError);
}

TEST_CASE("spec validation") {
    const QuditRegister reg = QuditRegister::uniform(2, 2);
    WitnessTerm t;
    t.settings = {{1, {}}, {2, {}}};
    t.constraints = {{{{0, 2}, {1, 2}}, 2, 0}};
    CHECK_THROWS_AS(WitnessSpec(reg, {t}), ValidationError);  // party 1 measured with setting 1
    t.constraints = {{{{0, 1}, {0, 1}}, 2, 0}};
    CHECK_THROWS_AS(WitnessSpec(reg, {t}), ValidationError);
    t.constraints = {{{{0, 1}, {5, 1}}, 2, 0}};
    CHECK_THROWS_AS(WitnessSpec(reg, {t}), ValidationError);
    t.settings = {{3, {}}, {2, {}}};
    t.constraints = {};
    CHECK_THROWS_AS(WitnessSpec(reg, {t}), ValidationError);
    CHECK_THROWS_AS(WitnessSpec(reg, {}), ValidationError);
    t.settings = {{1, Matrix::Ones(2, 2)}, {2, {}}};
    CHECK_THROWS_AS(WitnessSpec(reg, {t}), ValidationError);
    CHECK_THROWS_AS(spec_from_graph(ColoredGraph(3, 2, {{0, 1}, {1, 2}}, {{0, 1}, {2}})), ValidationError);
}

TEST_CASE("steering report for a measured value") {
    const double bound = closed_form_bound(2, 2);
    const SteeringReport r = report_from_value(1.8829, 2, 2, bound);
    CHECK(r.steerable);
    CHECK(r.margin == doctest::Approx(1.8829 - bound));
    CHECK(r.fidelity_window.lower == doctest::Approx(0.8829));
    CHECK(r.fidelity_window.upper == doctest::Approx(0.94145));
    CHECK(r.provenance == KernelProvenance::user_supplied);
    CHECK(to_string(r.provenance) == "user_supplied");
    CHECK_FALSE(report_from_value(1.55, 2, 2, bound).steerable);
    CHECK_THROWS_AS(report_from_value(2.5, 2, 2, bound), ValidationError);
    CHECK_THROWS_AS(report_from_value(-0.1, 2, 2, bound), ValidationError);
}

TEST_CASE("steering report for a simulated state") {
    const Preset p = chain(4, 2);
    const WitnessSpec spec = spec_from_graph(p.graph);
    const SteeringReport r = report(spec, DensityOperator::from_pure(p.state), closed_form_bound(2, 2));
    CHECK(r.kernel_value == doctest::Approx(2.0));
    CHECK(r.steerable);
    CHECK(r.provenance == KernelProvenance::simulated);
    CHECK(r.fidelity_window.lower == doctest::Approx(1.0));
    CHECK(r.fidelity_window.upper == doctest::Approx(1.0));
}
