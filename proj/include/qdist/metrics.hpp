#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdist/builders.hpp"
#include "qdist/circuit.hpp"
#include "qdist/noise.hpp"
#include "qdist/rng.hpp"
#include "qdist/statevector.hpp"
#include "qdist/unitary.hpp"

namespace qdist {

/// Bhattacharyya coefficient B(p, q) = sum_i sqrt(p_i q_i).
/// 1 iff the distributions coincide, 0 iff their supports are disjoint.
inline double bhattacharyya(const ProbDist& p, const ProbDist& q) {
    if (p.p.size() != q.p.size())
        throw std::invalid_argument("bhattacharyya: distribution dimensions differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) sum += std::sqrt(p.p[i] * q.p[i]);
    return sum;
}

/// Normalized Hilbert-Schmidt gate fidelity |Tr(U†V)|^2 / d^2 — invariant
/// under a global phase on either argument.
inline double gate_fidelity(const Unitary& u, const Unitary& v) {
    if (u.dim != v.dim) throw std::invalid_argument("gate_fidelity: dimensions differ");
    std::complex<double> trace{0.0, 0.0};
    for (std::size_t i = 0; i < u.entries.size(); ++i)
        trace += std::conj(u.entries[i]) * v.entries[i];
    const double d = static_cast<double>(u.dim);
    return std::norm(trace) / (d * d);
}

/// An exact reference transform: the ideal answer a candidate circuit is
/// measured against. Holds the dense matrix so application is exact and
/// independent of any circuit construction.
struct Target {
    int num_qubits = 0;
    std::string name;
    Unitary matrix;

    StateVector apply(const StateVector& in) const {
        if (in.num_qubits != num_qubits)
            throw std::invalid_argument("target '" + name + "' expects " +
                                        std::to_string(num_qubits) + " qubits");
        StateVector out;
        out.num_qubits = num_qubits;
        out.amps.assign(in.amps.size(), {0.0, 0.0});
        for (std::uint64_t r = 0; r < matrix.dim; ++r) {
            std::complex<double> acc{0.0, 0.0};
            for (std::uint64_t c = 0; c < matrix.dim; ++c) acc += matrix.at(r, c) * in.amps[c];
            out.amps[r] = acc;
        }
        return out;
    }

    static Target iqft(int n) {
        return Target{n, "iqft-" + std::to_string(n), Unitary::inverse_dft(n)};
    }

    static Target identity(int n) {
        return Target{n, "identity-" + std::to_string(n),
                      Unitary::identity(std::uint64_t{1} << n)};
    }

    static Target from_unitary(std::string name, int n, Unitary u) {
        if (u.dim != (std::uint64_t{1} << n))
            throw std::invalid_argument("target matrix dimension does not match qubit count");
        return Target{n, std::move(name), std::move(u)};
    }
};

enum class EvalMode { exact, shots };

/// One random-input evaluation plus the report aggregate.
struct EvalRow {
    std::uint64_t input_seed = 0;
    double b = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    double b_ave = 0.0;
    std::string shots_label;          // "exact" or the shot count
    std::optional<double> fidelity;   // candidate-vs-reference gate fidelity, when computed
};

/// Averaged Bhattacharyya protocol: for each of num_inputs derived seeds,
/// prepare |Psi> by a random 4n-gate circuit on |0...0>, compute the
/// reference answer exactly and the candidate's distribution either
/// exactly or by noisy sampling, and record B. Deterministic in all
/// arguments.
inline EvalReport b_ave(const Circuit& candidate, const Target& reference, int num_inputs,
                        EvalMode mode, const NoiseModel& noise, std::uint64_t shots,
                        std::uint64_t seed) {
    if (candidate.num_qubits != reference.num_qubits)
        throw std::invalid_argument("b_ave: candidate width " +
                                    std::to_string(candidate.num_qubits) +
                                    " does not match reference '" + reference.name + "'");
    if (num_inputs <= 0)
        throw std::invalid_argument("b_ave needs at least one input state (B_ave undefined)");
    const int n = candidate.num_qubits;
    EvalReport report;
    report.shots_label = (mode == EvalMode::exact) ? "exact" : std::to_string(shots);
    double total = 0.0;
    for (int i = 0; i < num_inputs; ++i) {
        const std::uint64_t input_seed = Rng::derive(seed, static_cast<std::uint64_t>(i));
        const Circuit prep = random_input_circuit(n, 4 * n, input_seed);
        const StateVector input = run_circuit(prep);
        const ProbDist answer = measure_dist(reference.apply(input));
        ProbDist measured;
        if (mode == EvalMode::exact) {
            measured = measure_dist(run_circuit(candidate, input));
        } else {
            measured = run_noisy(candidate, input, noise, shots,
                                 Rng::derive(input_seed, 0x73686f74ULL));
        }
        const double b = bhattacharyya(measured, answer);
        report.rows.push_back({input_seed, b});
        total += b;
    }
    report.b_ave = total / static_cast<double>(num_inputs);
    return report;
}

/// Exact-mode convenience overload.
inline EvalReport b_ave(const Circuit& candidate, const Target& reference, int num_inputs,
                        std::uint64_t seed) {
    return b_ave(candidate, reference, num_inputs, EvalMode::exact, NoiseModel{0.0, 0.0, 0.0},
                 0, seed);
}

/// Bootstrap standard error of the mean of `values` (resampling with
/// replacement, deterministic in seed).
inline double bootstrap_se(const std::vector<double>& values, int resamples,
                           std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("bootstrap_se needs nonempty values");
    if (resamples < 2) throw std::invalid_argument("bootstrap_se needs at least 2 resamples");
    Rng rng(seed);
    const std::size_t n = values.size();
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += values[rng.below(n)];
        means[static_cast<std::size_t>(r)] = sum / static_cast<double>(n);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(resamples);
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(resamples - 1);
    return std::sqrt(var);
}

} // namespace qdist
