#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qdist/circuit.hpp"
#include "qdist/rng.hpp"
#include "qdist/statevector.hpp"

namespace qdist {

/// Depolarizing-style stochastic noise parameters.
///   p1: per-qubit Pauli-error probability after a one-qubit gate
///   p2: per-qubit Pauli-error probability after a two-qubit gate
///   r:  per-bit classical readout flip probability
struct NoiseModel {
    double p1 = 0.001;
    double p2 = 0.01;
    double r = 0.03;

    bool is_zero() const { return p1 == 0.0 && p2 == 0.0 && r == 0.0; }
};

inline void validate_noise(const NoiseModel& m) {
    auto check = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(std::string("noise parameter ") + name +
                                        " must lie in [0, 1]");
    };
    check(m.p1, "p1");
    check(m.p2, "p2");
    check(m.r, "r");
}

namespace detail {

/// Apply Pauli X (which = 0), Y (1) or Z (2) to qubit q in place.
inline void apply_pauli(StateVector& state, int q, int which) {
    auto& a = state.amps;
    const std::uint64_t dim = state.dim();
    switch (which) {
        case 0:
            for_each_pair(dim, q, [&](std::uint64_t i0, std::uint64_t i1) {
                std::swap(a[i0], a[i1]);
            });
            break;
        case 1:
            for_each_pair(dim, q, [&](std::uint64_t i0, std::uint64_t i1) {
                const auto x = a[i0], y = a[i1];
                a[i0] = std::complex<double>{y.imag(), -y.real()};  // -i * y
                a[i1] = std::complex<double>{-x.imag(), x.real()};  //  i * x
            });
            break;
        case 2:
            for_each_pair(dim, q, [&](std::uint64_t, std::uint64_t i1) { a[i1] = -a[i1]; });
            break;
        default:
            throw std::logic_error("apply_pauli: bad index");
    }
}

} // namespace detail

/// Monte-Carlo trajectory sampler.
///
/// Each shot replays the circuit; after every gate each touched qubit
/// independently suffers a uniformly random Pauli (X, Y or Z) with
/// probability p1 or p2 according to the gate's arity. The shot's outcome
/// is drawn from the final trajectory state, then every outcome bit flips
/// independently with probability r.
///
/// Randomness order per shot is fixed (gate order; within a gate, qubit
/// slot order; one trigger draw per touched qubit, one Pauli choice when
/// triggered; one outcome draw; one readout draw per qubit when r > 0),
/// so (circuit, input, noise, shots, seed) fully determines the result.
/// Zero-probability events consume no randomness, which makes the
/// noiseless sampler a strict special case: with NoiseModel{0, 0, 0} the
/// result equals sample(measure_dist(run_circuit(c, input)), shots, seed)
/// exactly.
inline ProbDist run_noisy(const Circuit& c, const StateVector& input, const NoiseModel& noise,
                          std::uint64_t shots, std::uint64_t seed) {
    validate_noise(noise);
    if (shots == 0) throw std::invalid_argument("run_noisy needs at least one shot");
    if (c.num_qubits != input.num_qubits)
        throw std::invalid_argument("circuit and input register widths differ");

    const std::uint64_t dim = input.dim();
    std::vector<std::uint64_t> counts(dim, 0);
    Rng rng(seed);
    StateVector state;
    std::vector<double> cumulative(dim);

    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        state = input;
        for (const Gate& g : c.gates) {
            apply_gate_inplace(state, g);
            const double p_err = (g.arity() == 2) ? noise.p2 : noise.p1;
            if (p_err > 0.0)
                for (int slot = 0; slot < g.arity(); ++slot)
                    if (rng.uniform() < p_err)
                        detail::apply_pauli(state, g.qubits[slot],
                                            static_cast<int>(rng.below(3)));
        }
        double run = 0.0;
        for (std::uint64_t i = 0; i < dim; ++i) {
            run += std::norm(state.amps[i]);
            cumulative[i] = run;
        }
        std::uint64_t outcome = detail::draw_index(cumulative, rng.uniform());
        if (noise.r > 0.0)
            for (int q = 0; q < c.num_qubits; ++q)
                if (rng.uniform() < noise.r) outcome ^= std::uint64_t{1} << q;
        ++counts[outcome];
    }

    ProbDist out;
    out.num_qubits = c.num_qubits;
    out.p.resize(dim);
    for (std::uint64_t i = 0; i < dim; ++i)
        out.p[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    return out;
}

} // namespace qdist
