#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstring>

#include "qdist/builders.hpp"
#include "qdist/metrics.hpp"
#include "qdist/rng.hpp"
#include "qdist/statevector.hpp"
#include "qdist/unitary.hpp"

using namespace qdist;

namespace {

ProbDist random_dist(int dim, Rng& rng) {
    ProbDist d;
    d.num_qubits = 0;
    d.p.resize(static_cast<std::size_t>(dim));
    double total = 0.0;
    for (auto& x : d.p) {
        x = rng.uniform();
        total += x;
    }
    for (auto& x : d.p) x /= total;
    return d;
}

} // namespace

TEST_CASE("bhattacharyya point values") {
    ProbDist p{1, {0.5, 0.5}}, q{1, {1.0, 0.0}}, r{1, {0.0, 1.0}};
    REQUIRE(bhattacharyya(q, r) == 0.0);
    REQUIRE(bhattacharyya(p, q) == Catch::Approx(std::sqrt(0.5)));
    REQUIRE(bhattacharyya(p, p) == Catch::Approx(1.0));
    ProbDist wide{2, {0.25, 0.25, 0.25, 0.25}};
    REQUIRE_THROWS_AS(bhattacharyya(p, wide), std::invalid_argument);
}

TEST_CASE("bhattacharyya property suite: 1e4 random pairs") {
    Rng rng(808);
    for (int trial = 0; trial < 10000; ++trial) {
        const int dim = 2 + static_cast<int>(rng.below(31));
        const auto p = random_dist(dim, rng);
        const auto q = random_dist(dim, rng);
        const double b = bhattacharyya(p, q);
        REQUIRE(b == bhattacharyya(q, p));           // exact symmetry
        REQUIRE(b >= 0.0);
        REQUIRE(b <= 1.0 + 1e-12);
        REQUIRE(std::abs(bhattacharyya(p, p) - 1.0) < 1e-12);
    }
}

TEST_CASE("gate fidelity") {
    const auto u = unitary_of(conventional_iqft(2));
    REQUIRE(gate_fidelity(u, u) == Catch::Approx(1.0));
    SECTION("global phase invariance") {
        Unitary v = u;
        const auto phase = std::polar(1.0, 0.987);
        for (auto& e : v.entries) e *= phase;
        REQUIRE(std::abs(gate_fidelity(u, v) - 1.0) < 1e-12);
    }
    SECTION("identity vs NOT on one of two qubits is 0") {
        Circuit c(2);
        c.append(Gate::not_gate(0));
        REQUIRE(gate_fidelity(Unitary::identity(4), unitary_of(c)) == Catch::Approx(0.0));
    }
    SECTION("dimension mismatch") {
        REQUIRE_THROWS_AS(gate_fidelity(Unitary::identity(4), Unitary::identity(8)),
                          std::invalid_argument);
    }
}

TEST_CASE("targets apply their matrices") {
    const auto target = Target::iqft(3);
    const auto in = run_circuit(random_input_circuit(3, 12, 999));
    const auto via_target = target.apply(in);
    const auto via_circuit = run_circuit(conventional_iqft(3), in);
    for (std::size_t i = 0; i < via_target.amps.size(); ++i)
        REQUIRE(std::abs(via_target.amps[i] - via_circuit.amps[i]) < 1e-9);
    REQUIRE_THROWS_AS(target.apply(StateVector::zero_state(2)), std::invalid_argument);
    const auto id = Target::identity(2);
    const auto s = run_circuit(random_input_circuit(2, 8, 1));
    REQUIRE(id.apply(s).amps == s.amps);
}

TEST_CASE("b_ave protocol") {
    SECTION("candidate equal to the reference scores 1 on every input") {
        const auto report = b_ave(conventional_iqft(3), Target::iqft(3), 10, 77);
        REQUIRE(report.rows.size() == 10);
        for (const auto& row : report.rows) REQUIRE(std::abs(row.b - 1.0) < 1e-12);
        REQUIRE(std::abs(report.b_ave - 1.0) < 1e-12);
        REQUIRE(report.shots_label == "exact");
    }
    SECTION("zero inputs is an error") {
        REQUIRE_THROWS_AS(b_ave(conventional_iqft(2), Target::iqft(2), 0, 1),
                          std::invalid_argument);
    }
    SECTION("width mismatch is an error") {
        REQUIRE_THROWS_AS(b_ave(conventional_iqft(2), Target::iqft(3), 5, 1),
                          std::invalid_argument);
    }
    SECTION("exact mode is reproducible bit for bit") {
        const auto a = b_ave(generalized_iqft(3), Target::iqft(3), 8, 123);
        const auto b = b_ave(generalized_iqft(3), Target::iqft(3), 8, 123);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            REQUIRE(a.rows[i].input_seed == b.rows[i].input_seed);
            REQUIRE(std::memcmp(&a.rows[i].b, &b.rows[i].b, sizeof(double)) == 0);
        }
        REQUIRE(std::memcmp(&a.b_ave, &b.b_ave, sizeof(double)) == 0);
    }
    SECTION("B_ave exceeds gate fidelity for the generalized circuit") {
        for (int n = 2; n <= 4; ++n) {
            const auto report = b_ave(generalized_iqft(n), Target::iqft(n), 20, 42);
            const double f = gate_fidelity(unitary_of(generalized_iqft(n)),
                                           unitary_of(conventional_iqft(n)));
            INFO("n=" << n << " B_ave=" << report.b_ave << " F=" << f);
            REQUIRE(report.b_ave > f);
        }
    }
    SECTION("shot mode with zero noise approaches the exact value") {
        const auto exact = b_ave(generalized_iqft(2), Target::iqft(2), 10, 5);
        const auto shot = b_ave(generalized_iqft(2), Target::iqft(2), 10, EvalMode::shots,
                                NoiseModel{0.0, 0.0, 0.0}, 8192, 5);
        REQUIRE(shot.shots_label == "8192");
        REQUIRE(std::abs(shot.b_ave - exact.b_ave) < 0.02);
    }
}

TEST_CASE("bootstrap standard error") {
    std::vector<double> values;
    Rng rng(321);
    for (int i = 0; i < 40; ++i) values.push_back(rng.uniform());
    const double a = bootstrap_se(values, 500, 9);
    const double b = bootstrap_se(values, 500, 9);
    REQUIRE(a == b);
    REQUIRE(a > 0.0);
    // SE of a mean of 40 uniforms is about sqrt(1/12/40) = 0.046
    REQUIRE(a < 0.1);
    REQUIRE_THROWS_AS(bootstrap_se({}, 100, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(bootstrap_se(values, 1, 1), std::invalid_argument);
}
