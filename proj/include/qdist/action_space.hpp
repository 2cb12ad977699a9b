#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qdist/gate.hpp"
#include "qdist/tolerances.hpp"

namespace qdist {

/// The distiller's gate menu for an n-qubit register: G = 2n + 4n + n(n-1)
/// candidate gates in a fixed, documented order:
///   [0, n)        hadamard(q)
///   [n, 2n)       not(q)
///   [2n, 6n)      phase_shift(q, -2*pi/2^k), grouped by qubit, k = 1..4
///   [6n, G)       cnot(c, t), control-major over ordered pairs c != t
struct ActionSpace {
    int num_qubits = 0;
    std::vector<Gate> gates;

    int size() const { return static_cast<int>(gates.size()); }

    const Gate& at(int action) const {
        if (action < 0 || action >= size())
            throw std::out_of_range("action index out of range");
        return gates[static_cast<std::size_t>(action)];
    }

    /// Inverse lookup: the action index of `g`, or nullopt when `g` is not
    /// in the menu (phase angles are matched against the menu within a
    /// tight tolerance; qubit order matters for CNot).
    std::optional<int> index_of(const Gate& g) const {
        const int n = num_qubits;
        auto in_range = [&](int q) { return q >= 0 && q < n; };
        if (!in_range(g.qubits[0])) return std::nullopt;
        switch (g.kind) {
            case GateKind::Hadamard:
                return g.qubits[0];
            case GateKind::Not:
                return n + g.qubits[0];
            case GateKind::PhaseShift: {
                const auto menu = phase_angle_menu();
                for (int k = 0; k < 4; ++k)
                    if (std::abs(g.angle - menu[static_cast<std::size_t>(k)]) < tol.angle_match)
                        return 2 * n + 4 * g.qubits[0] + k;
                return std::nullopt;
            }
            case GateKind::CNot: {
                const int c = g.qubits[0], t = g.qubits[1];
                if (!in_range(t) || c == t) return std::nullopt;
                // Targets for control c enumerate 0..n-1 skipping c itself.
                const int offset = t - (t > c ? 1 : 0);
                return 6 * n + c * (n - 1) + offset;
            }
            default:
                return std::nullopt;
        }
    }
};

inline ActionSpace action_space(int n) {
    if (n < 1) throw std::invalid_argument("action space needs at least one qubit");
    ActionSpace space;
    space.num_qubits = n;
    space.gates.reserve(static_cast<std::size_t>(6 * n + n * (n - 1)));
    for (int q = 0; q < n; ++q) space.gates.push_back(Gate::hadamard(q));
    for (int q = 0; q < n; ++q) space.gates.push_back(Gate::not_gate(q));
    const auto menu = phase_angle_menu();
    for (int q = 0; q < n; ++q)
        for (double angle : menu) space.gates.push_back(Gate::phase_shift(q, angle));
    for (int c = 0; c < n; ++c)
        for (int t = 0; t < n; ++t)
            if (t != c) space.gates.push_back(Gate::cnot(c, t));
    return space;
}

} // namespace qdist
