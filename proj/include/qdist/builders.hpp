#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "qdist/action_space.hpp"
#include "qdist/circuit.hpp"
#include "qdist/rng.hpp"
#include "qdist/statevector.hpp"

namespace qdist {

namespace detail {
inline void check_builder_width(int n) {
    if (n < 1 || n > 10)
        throw std::invalid_argument("circuit builders support 1..10 qubits, got " +
                                    std::to_string(n));
}
} // namespace detail

/// Textbook inverse quantum Fourier transform: bit-reversal swaps followed
/// by the interleaved controlled-phase / Hadamard cascade with angles
/// -2*pi/2^k. Its unitary equals the inverse-DFT matrix exactly (qubit 0 =
/// least significant bit). Gate count: n + n(n-1)/2 + floor(n/2).
inline Circuit conventional_iqft(int n) {
    detail::check_builder_width(n);
    Circuit c(n);
    for (int i = 0; i < n / 2; ++i) c.append(Gate::swap(i, n - 1 - i));
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p < q; ++p)
            c.append(Gate::controlled_phase(
                p, q, -2.0 * std::numbers::pi / static_cast<double>(1 << (q - p + 1))));
        c.append(Gate::hadamard(q));
    }
    return c;
}

/// Linear-size approximate IQFT: a Hadamard layer, the bit-reversal swaps,
/// then an ascending nearest-neighbour CNot ladder. Applied after a QPE
/// phase-kick layer it reproduces the closed-form product amplitudes of
/// qpe_generalized_oracle exactly (that oracle is this builder's defining
/// contract). Gate count: 2n - 1 + floor(n/2).
inline Circuit generalized_iqft(int n) {
    detail::check_builder_width(n);
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.append(Gate::hadamard(q));
    for (int i = 0; i < n / 2; ++i) c.append(Gate::swap(i, n - 1 - i));
    for (int s = 1; s < n; ++s) c.append(Gate::cnot(s - 1, s));
    return c;
}

/// Quantum phase estimation on an n-qubit counting register. The
/// eigenstate register is elided: the controlled-U^(2^q) kickback on a
/// phase-θ eigenstate acts on the counting register alone as
/// PhaseShift(q, 2*pi*theta*2^q). The caller supplies the inverse-QFT
/// stage (conventional or generalized).
inline Circuit qpe_circuit(int n, double theta, const Circuit& iqft) {
    detail::check_builder_width(n);
    if (iqft.num_qubits != n)
        throw std::invalid_argument("qpe_circuit: iqft register width " +
                                    std::to_string(iqft.num_qubits) + " != " + std::to_string(n));
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.append(Gate::hadamard(q));
    for (int q = 0; q < n; ++q)
        c.append(Gate::phase_shift(q, 2.0 * std::numbers::pi * theta *
                                          static_cast<double>(std::uint64_t{1} << q)));
    c.extend(iqft);
    return c;
}

/// Closed-form output distribution of QPE followed by the generalized
/// circuit. The amplitude of outcome |j_n ... j_2 j_1> (j_1 = least
/// significant bit) is the product over t = 1..n of E_{n+1-t}^{e_t} with
/// e_t = j_{t-1} xor j_t (j_0 = 0), where
///   E_k^0 = (1 + e^{i*pi*2^k*theta}) / 2,
///   E_k^1 = (1 - e^{i*pi*2^k*theta}) / 2.
inline ProbDist qpe_generalized_oracle(int n, double theta) {
    if (n < 1 || n > 20)
        throw std::invalid_argument("qpe_generalized_oracle supports 1..20 qubits");
    const std::uint64_t dim = std::uint64_t{1} << n;
    ProbDist d;
    d.num_qubits = n;
    d.p.resize(dim);
    for (std::uint64_t m = 0; m < dim; ++m) {
        std::complex<double> amp{1.0, 0.0};
        int prev = 0;
        for (int t = 1; t <= n; ++t) {
            const int jt = static_cast<int>((m >> (t - 1)) & 1);
            const int k = n + 1 - t;
            const std::complex<double> ph =
                std::polar(1.0, std::numbers::pi * static_cast<double>(std::uint64_t{1} << k) *
                                    theta);
            amp *= ((prev ^ jt) == 0) ? (1.0 + ph) * 0.5 : (1.0 - ph) * 0.5;
            prev = jt;
        }
        d.p[m] = std::norm(amp);
    }
    return d;
}

/// Order-finding demo for N = 57 with base x = 37 (order 2, since
/// 37^2 = 1369 = 24*57 + 1). Registers: qubits 0..3 count, qubits 4..9
/// hold the 6-bit work register. Because x^k mod 57 alternates
/// 1, 37, 1, 37, ... only the counting parity bit q0 drives the work
/// register: |1> = 000001 maps to |37> = 100101 by toggling work bits
/// 2 and 5 (37 xor 1 = 36 = 0b100100), with a NOT preparing the initial
/// |1>. The supplied 4-qubit iqft is applied to the counting register.
inline Circuit shor57_circuit(const Circuit& iqft) {
    if (iqft.num_qubits != 4)
        throw std::invalid_argument("shor57_circuit expects a 4-qubit iqft stage");
    constexpr int counting = 4, work_base = 4, total = 10;
    Circuit c(total);
    for (int q = 0; q < counting; ++q) c.append(Gate::hadamard(q));
    c.append(Gate::not_gate(work_base));  // work register starts in |1>
    // Controlled multiplication by 37 mod 57 from counting bit 0:
    // 1 -> 37 means toggling work bits 2 and 5 (36 = 0b100100).
    c.append(Gate::cnot(0, work_base + 2));
    c.append(Gate::cnot(0, work_base + 5));
    for (const Gate& g : iqft.gates) c.append(g);  // counting register indices carry over
    return c;
}

/// Marginal distribution of the 4-bit counting register (qubits 0..3) of
/// a shor57_circuit output state.
inline ProbDist shor57_counting_marginal(const StateVector& state) {
    if (state.num_qubits != 10)
        throw std::invalid_argument("expected the 10-qubit shor57 register");
    ProbDist d;
    d.num_qubits = 4;
    d.p.assign(16, 0.0);
    for (std::uint64_t i = 0; i < state.dim(); ++i)
        d.p[i & 0xF] += std::norm(state.amps[i]);
    return d;
}

/// Classical post-processing of a 4-bit order-finding outcome for
/// N = 57, x = 37: interpret m as phase m/16, recover a candidate order
/// from the continued-fraction convergents, and derive factors via
/// gcd(x^{r/2} +- 1, N) when the order is usable.
struct ShorReading {
    int outcome = 0;                            // measured counting value in [0, 16)
    int phase_numerator = 0, phase_denominator = 16;
    std::optional<int> order;                   // recovered r with x^r = 1 mod N
    std::optional<std::pair<int, int>> factors; // nontrivial factor pair of 57
};

inline ShorReading shor57_postprocess(int outcome) {
    if (outcome < 0 || outcome >= 16)
        throw std::invalid_argument("shor57 outcome must be a 4-bit value");
    constexpr int modulus = 57, base = 37;
    ShorReading reading;
    reading.outcome = outcome;
    if (outcome == 0) return reading;  // trivial phase, retry
    const int g = std::gcd(outcome, 16);
    reading.phase_numerator = outcome / g;
    reading.phase_denominator = 16 / g;
    // The reduced denominator is the candidate order (continued-fraction
    // expansion of m/16 terminates at the reduced fraction itself).
    auto pow_mod = [&](int e) {
        std::int64_t acc = 1;
        for (int i = 0; i < e; ++i) acc = acc * base % modulus;
        return static_cast<int>(acc);
    };
    const int r = reading.phase_denominator;
    if (r <= 0 || pow_mod(r) != 1) return reading;
    reading.order = r;
    if (r % 2 != 0) return reading;
    const int half = pow_mod(r / 2);
    if (half == modulus - 1) return reading;  // x^{r/2} = -1: no split
    const int f1 = std::gcd(half - 1, modulus);
    const int f2 = std::gcd(half + 1, modulus);
    if (f1 > 1 && f1 < modulus) reading.factors = {f1, modulus / f1};
    else if (f2 > 1 && f2 < modulus) reading.factors = {f2, modulus / f2};
    return reading;
}

/// m gates drawn uniformly from the n-qubit action space; the standard
/// input-state preparation is m = 4n gates applied to |0...0>.
inline Circuit random_input_circuit(int n, int m, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_input_circuit needs at least one qubit");
    if (m < 0) throw std::invalid_argument("random_input_circuit needs m >= 0");
    const ActionSpace space = action_space(n);
    Rng rng(seed);
    Circuit c(n);
    for (int i = 0; i < m; ++i)
        c.append(space.at(static_cast<int>(rng.below(static_cast<std::uint64_t>(space.size())))));
    return c;
}

/// Gate-counting conventions: `abstract` counts the gate list as stored;
/// `decomposed` expands each ControlledPhase into 2 CNot + 3 PhaseShift
/// and each Swap into 3 CNot first.
enum class CountConvention { abstract_gates, decomposed };

/// Expand ControlledPhase and Swap into the {CNot, PhaseShift} basis:
///   CP(a, b, t) = P(a, t/2) P(b, t/2) CNot(a,b) P(b, -t/2) CNot(a,b)
///   Swap(a, b)  = CNot(a,b) CNot(b,a) CNot(a,b)
inline Circuit decompose(const Circuit& c) {
    Circuit out(c.num_qubits);
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::ControlledPhase: {
                const double half = g.angle / 2.0;
                out.append(Gate::phase_shift(g.qubits[0], half));
                out.append(Gate::phase_shift(g.qubits[1], half));
                out.append(Gate::cnot(g.qubits[0], g.qubits[1]));
                out.append(Gate::phase_shift(g.qubits[1], -half));
                out.append(Gate::cnot(g.qubits[0], g.qubits[1]));
                break;
            }
            case GateKind::Swap:
                out.append(Gate::cnot(g.qubits[0], g.qubits[1]));
                out.append(Gate::cnot(g.qubits[1], g.qubits[0]));
                out.append(Gate::cnot(g.qubits[0], g.qubits[1]));
                break;
            default:
                out.append(g);
        }
    }
    return out;
}

inline std::size_t gate_count(const Circuit& c, CountConvention convention) {
    if (convention == CountConvention::abstract_gates) return c.gates.size();
    return decompose(c).gates.size();
}

} // namespace qdist
