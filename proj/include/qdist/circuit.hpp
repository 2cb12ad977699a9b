#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qdist/gate.hpp"

namespace qdist {

/// An ordered gate list on a fixed-width register. Gates are validated on
/// the way in, so a Circuit that exists is always runnable.
struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n) : num_qubits(n) {
        if (n < 1) throw std::invalid_argument("circuit needs at least one qubit");
    }

    Circuit& append(const Gate& g) {
        validate_gate(g, num_qubits);
        gates.push_back(g);
        return *this;
    }

    /// Append every gate of `other` (same register width required).
    Circuit& extend(const Circuit& other) {
        if (other.num_qubits != num_qubits)
            throw std::invalid_argument("cannot extend: register widths differ (" +
                                        std::to_string(num_qubits) + " vs " +
                                        std::to_string(other.num_qubits) + ")");
        for (const Gate& g : other.gates) append(g);
        return *this;
    }

    std::size_t size() const { return gates.size(); }

    bool operator==(const Circuit& other) const {
        return num_qubits == other.num_qubits && gates == other.gates;
    }
};

} // namespace qdist
