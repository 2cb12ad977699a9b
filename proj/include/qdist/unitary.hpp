#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdist/circuit.hpp"
#include "qdist/statevector.hpp"

namespace qdist {

/// Dense column-major-agnostic matrix: entry(r, c) addresses row r,
/// column c of a dim x dim complex matrix. Only intended for small
/// registers (building one costs dim state-vector runs).
struct Unitary {
    std::uint64_t dim = 0;
    std::vector<std::complex<double>> entries; // row-major, dim * dim

    std::complex<double>& at(std::uint64_t r, std::uint64_t c) { return entries[r * dim + c]; }
    const std::complex<double>& at(std::uint64_t r, std::uint64_t c) const {
        return entries[r * dim + c];
    }

    static Unitary identity(std::uint64_t dim) {
        Unitary u;
        u.dim = dim;
        u.entries.assign(dim * dim, {0.0, 0.0});
        for (std::uint64_t i = 0; i < dim; ++i) u.at(i, i) = {1.0, 0.0};
        return u;
    }

    /// Exact inverse discrete Fourier transform on n qubits:
    /// entry(j, k) = exp(-2*pi*i*j*k / 2^n) / sqrt(2^n).
    static Unitary inverse_dft(int n) {
        if (n < 1 || n > 12)
            throw std::invalid_argument("inverse_dft supports 1..12 qubits");
        const std::uint64_t dim = std::uint64_t{1} << n;
        Unitary u;
        u.dim = dim;
        u.entries.resize(dim * dim);
        const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
        for (std::uint64_t j = 0; j < dim; ++j)
            for (std::uint64_t k = 0; k < dim; ++k) {
                const double phase = -2.0 * std::numbers::pi *
                                     static_cast<double>((j * k) % dim) /
                                     static_cast<double>(dim);
                u.at(j, k) = std::polar(scale, phase);
            }
        return u;
    }
};

/// Full matrix of a circuit, built column by column from basis-state runs.
/// Guarded to 10 qubits: beyond that the dense matrix is no longer a
/// sensible object to materialize.
inline Unitary unitary_of(const Circuit& c) {
    if (c.num_qubits > 10)
        throw std::invalid_argument("unitary_of is limited to 10 qubits, got " +
                                    std::to_string(c.num_qubits));
    const std::uint64_t dim = std::uint64_t{1} << c.num_qubits;
    Unitary u;
    u.dim = dim;
    u.entries.resize(dim * dim);
    for (std::uint64_t col = 0; col < dim; ++col) {
        StateVector s = StateVector::basis_state(c.num_qubits, col);
        run_circuit_inplace(s, c);
        for (std::uint64_t row = 0; row < dim; ++row) u.at(row, col) = s.amps[row];
    }
    return u;
}

/// Largest entry-wise magnitude difference between two matrices.
inline double max_abs_diff(const Unitary& a, const Unitary& b) {
    if (a.dim != b.dim) throw std::invalid_argument("matrix dimensions differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
    return worst;
}

/// Largest deviation of U†U from the identity.
inline double unitarity_defect(const Unitary& u) {
    double worst = 0.0;
    for (std::uint64_t r = 0; r < u.dim; ++r)
        for (std::uint64_t c = 0; c < u.dim; ++c) {
            std::complex<double> dot{0.0, 0.0};
            for (std::uint64_t k = 0; k < u.dim; ++k)
                dot += std::conj(u.at(k, r)) * u.at(k, c);
            const std::complex<double> want = (r == c) ? std::complex<double>{1.0, 0.0}
                                                       : std::complex<double>{0.0, 0.0};
            worst = std::max(worst, std::abs(dot - want));
        }
    return worst;
}

} // namespace qdist
