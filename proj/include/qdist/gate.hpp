#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qdist {

/// The primitive gate alphabet. Every circuit in the library is spelled
/// with these six gates; anything richer (e.g. controlled-phase expressed
/// through CNots) goes through an explicit decomposition pass.
enum class GateKind : std::uint8_t {
    Hadamard,
    Not,
    PhaseShift,       // diag(1, e^{i angle})
    CNot,             // qubits = {control, target}
    Swap,
    ControlledPhase,  // symmetric phase e^{i angle} on |11>
};

inline bool is_two_qubit(GateKind k) {
    return k == GateKind::CNot || k == GateKind::Swap || k == GateKind::ControlledPhase;
}

inline bool has_angle(GateKind k) {
    return k == GateKind::PhaseShift || k == GateKind::ControlledPhase;
}

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::Hadamard: return "h";
        case GateKind::Not: return "x";
        case GateKind::PhaseShift: return "p";
        case GateKind::CNot: return "cx";
        case GateKind::Swap: return "swap";
        case GateKind::ControlledPhase: return "cp";
    }
    throw std::logic_error("gate_name: unknown kind");
}

/// One gate application. For single-qubit gates `qubits[1]` is unused and
/// held at -1; for CNot the order is {control, target}; Swap is symmetric
/// but both slots must name distinct qubits.
struct Gate {
    GateKind kind = GateKind::Hadamard;
    std::array<int, 2> qubits{-1, -1};
    double angle = 0.0;

    static Gate hadamard(int q) { return {GateKind::Hadamard, {q, -1}, 0.0}; }
    static Gate not_gate(int q) { return {GateKind::Not, {q, -1}, 0.0}; }
    static Gate phase_shift(int q, double angle) { return {GateKind::PhaseShift, {q, -1}, angle}; }
    static Gate cnot(int control, int target) { return {GateKind::CNot, {control, target}, 0.0}; }
    static Gate swap(int a, int b) { return {GateKind::Swap, {a, b}, 0.0}; }
    static Gate controlled_phase(int a, int b, double angle) {
        return {GateKind::ControlledPhase, {a, b}, angle};
    }

    int arity() const { return is_two_qubit(kind) ? 2 : 1; }

    bool operator==(const Gate& other) const {
        return kind == other.kind && qubits == other.qubits && angle == other.angle;
    }
};

/// Throws std::invalid_argument unless `g` is well-formed on an
/// `num_qubits`-qubit register: indices in range, two-qubit gates on
/// distinct qubits, angles only where the gate has one.
inline void validate_gate(const Gate& g, int num_qubits) {
    auto check_index = [&](int q) {
        if (q < 0 || q >= num_qubits)
            throw std::invalid_argument("gate qubit index " + std::to_string(q) +
                                        " out of range for " + std::to_string(num_qubits) +
                                        " qubits");
    };
    check_index(g.qubits[0]);
    if (is_two_qubit(g.kind)) {
        check_index(g.qubits[1]);
        if (g.qubits[0] == g.qubits[1])
            throw std::invalid_argument("two-qubit gate needs distinct qubits");
    }
    if (!has_angle(g.kind) && g.angle != 0.0)
        throw std::invalid_argument(std::string("gate '") + gate_name(g.kind) +
                                    "' does not take an angle");
    if (has_angle(g.kind) && !std::isfinite(g.angle))
        throw std::invalid_argument("gate angle must be finite");
}

/// Phase angles the distiller is allowed to place: -2*pi / 2^k for
/// k = 1..4. Index i holds k = i+1.
inline constexpr std::array<double, 4> phase_angle_menu() {
    std::array<double, 4> menu{};
    for (int i = 0; i < 4; ++i)
        menu[static_cast<std::size_t>(i)] = -2.0 * std::numbers::pi / static_cast<double>(1 << (i + 1));
    return menu;
}

} // namespace qdist
