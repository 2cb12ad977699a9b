#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdist/circuit.hpp"
#include "qdist/gate.hpp"
#include "qdist/rng.hpp"

namespace qdist {

/// Dense amplitude vector over the computational basis.
///
/// Bit convention: qubit q contributes bit (index >> q) & 1, i.e. qubit 0
/// is the least significant bit of the basis index. When an index is
/// printed as a bitstring the most significant qubit appears leftmost.
struct StateVector {
    int num_qubits = 0;
    std::vector<std::complex<double>> amps;

    static constexpr int max_qubits = 24;

    static StateVector zero_state(int n) { return basis_state(n, 0); }

    static StateVector basis_state(int n, std::uint64_t index) {
        if (n < 1 || n > max_qubits)
            throw std::invalid_argument("state width must be in [1, " +
                                        std::to_string(max_qubits) + "], got " +
                                        std::to_string(n));
        std::uint64_t dim = std::uint64_t{1} << n;
        if (index >= dim) throw std::invalid_argument("basis index out of range");
        StateVector s;
        s.num_qubits = n;
        s.amps.assign(dim, {0.0, 0.0});
        s.amps[index] = {1.0, 0.0};
        return s;
    }

    std::uint64_t dim() const { return amps.size(); }

    double norm() const {
        double total = 0.0;
        for (const auto& a : amps) total += std::norm(a);
        return std::sqrt(total);
    }
};

/// Probability distribution over the 2^n basis outcomes of an n-qubit
/// register. Same bit convention as StateVector.
struct ProbDist {
    int num_qubits = 0;
    std::vector<double> p;

    std::uint64_t dim() const { return p.size(); }

    double total() const {
        double sum = 0.0;
        for (double x : p) sum += x;
        return sum;
    }
};

namespace detail {

/// Visit every basis-index pair (i0, i1) that differs only in bit `q`.
template <typename F>
void for_each_pair(std::uint64_t dim, int q, F&& f) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t base = 0; base < dim; base += bit << 1)
        for (std::uint64_t low = 0; low < bit; ++low) {
            const std::uint64_t i0 = base | low;
            f(i0, i0 | bit);
        }
}

} // namespace detail

/// In-place gate application; the workhorse behind the pure wrappers and
/// the noisy trajectory sampler. The gate must already be valid for the
/// state's width.
inline void apply_gate_inplace(StateVector& state, const Gate& g) {
    auto& a = state.amps;
    const std::uint64_t dim = state.dim();
    switch (g.kind) {
        case GateKind::Hadamard: {
            constexpr double inv_sqrt2 = 0.70710678118654752440;
            detail::for_each_pair(dim, g.qubits[0], [&](std::uint64_t i0, std::uint64_t i1) {
                const auto x = a[i0], y = a[i1];
                a[i0] = (x + y) * inv_sqrt2;
                a[i1] = (x - y) * inv_sqrt2;
            });
            break;
        }
        case GateKind::Not: {
            detail::for_each_pair(dim, g.qubits[0], [&](std::uint64_t i0, std::uint64_t i1) {
                std::swap(a[i0], a[i1]);
            });
            break;
        }
        case GateKind::PhaseShift: {
            const std::complex<double> ph = std::polar(1.0, g.angle);
            detail::for_each_pair(dim, g.qubits[0], [&](std::uint64_t, std::uint64_t i1) {
                a[i1] *= ph;
            });
            break;
        }
        case GateKind::CNot: {
            const std::uint64_t cbit = std::uint64_t{1} << g.qubits[0];
            const std::uint64_t tbit = std::uint64_t{1} << g.qubits[1];
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
            break;
        }
        case GateKind::Swap: {
            const std::uint64_t abit = std::uint64_t{1} << g.qubits[0];
            const std::uint64_t bbit = std::uint64_t{1} << g.qubits[1];
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & abit) && !(i & bbit)) std::swap(a[i], (a[(i ^ abit) | bbit]));
            break;
        }
        case GateKind::ControlledPhase: {
            const std::uint64_t mask = (std::uint64_t{1} << g.qubits[0]) |
                                       (std::uint64_t{1} << g.qubits[1]);
            const std::complex<double> ph = std::polar(1.0, g.angle);
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & mask) == mask) a[i] *= ph;
            break;
        }
    }
}

/// Pure single-gate application.
inline StateVector apply_gate(const StateVector& state, const Gate& g) {
    validate_gate(g, state.num_qubits);
    StateVector out = state;
    apply_gate_inplace(out, g);
    return out;
}

inline void run_circuit_inplace(StateVector& state, const Circuit& c) {
    if (c.num_qubits != state.num_qubits)
        throw std::invalid_argument("circuit width " + std::to_string(c.num_qubits) +
                                    " does not match state width " +
                                    std::to_string(state.num_qubits));
    for (const Gate& g : c.gates) apply_gate_inplace(state, g);
}

/// Run `c` on `input` and return the final state.
inline StateVector run_circuit(const Circuit& c, const StateVector& input) {
    StateVector out = input;
    run_circuit_inplace(out, c);
    return out;
}

/// Run `c` on |0...0>.
inline StateVector run_circuit(const Circuit& c) {
    StateVector s = StateVector::zero_state(c.num_qubits);
    run_circuit_inplace(s, c);
    return s;
}

/// Born-rule measurement distribution of a state.
inline ProbDist measure_dist(const StateVector& state) {
    ProbDist d;
    d.num_qubits = state.num_qubits;
    d.p.resize(state.amps.size());
    for (std::size_t i = 0; i < state.amps.size(); ++i) d.p[i] = std::norm(state.amps[i]);
    return d;
}

namespace detail {

/// Inverse-CDF draw: smallest index whose cumulative probability exceeds u.
inline std::uint64_t draw_index(const std::vector<double>& cumulative, double u) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) return cumulative.size() - 1;
    return static_cast<std::uint64_t>(it - cumulative.begin());
}

inline std::vector<double> cumulative_of(const std::vector<double>& p) {
    std::vector<double> c(p.size());
    double run = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        run += p[i];
        c[i] = run;
    }
    return c;
}

} // namespace detail

/// Draw `shots` outcomes from `dist` and return raw counts per basis index.
/// One uniform variate is consumed per shot, in shot order.
inline std::vector<std::uint64_t> sample_counts(const ProbDist& dist, std::uint64_t shots,
                                                Rng& rng) {
    if (shots == 0) throw std::invalid_argument("sampling needs at least one shot");
    const std::vector<double> cumulative = detail::cumulative_of(dist.p);
    std::vector<std::uint64_t> counts(dist.p.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s)
        ++counts[detail::draw_index(cumulative, rng.uniform())];
    return counts;
}

/// Empirical distribution from `shots` draws with a fresh engine seeded by
/// `seed`. Same (dist, shots, seed) always yields the same result.
inline ProbDist sample(const ProbDist& dist, std::uint64_t shots, std::uint64_t seed) {
    Rng rng(seed);
    const auto counts = sample_counts(dist, shots, rng);
    ProbDist out;
    out.num_qubits = dist.num_qubits;
    out.p.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        out.p[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    return out;
}

} // namespace qdist
