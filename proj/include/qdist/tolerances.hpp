#pragma once

namespace qdist {

/// Numeric tolerance constants shared by the library and its consumers.
/// Collected in one place so simulation, metrics and tests agree on what
/// "equal" means at each level of the stack.
struct Tolerances {
    double norm = 1e-9;          // state-vector norm drift
    double unitarity = 1e-9;     // U†U vs identity, builder-vs-oracle matrices
    double prob_sum = 1e-9;      // probability distributions summing to 1
    double policy_sum = 1e-6;    // MCTS / network policy normalization
    double metric_exact = 1e-12; // Bhattacharyya identity-of-distributions checks
    double angle_match = 1e-12;  // matching gate angles against the action menu
};

inline constexpr Tolerances tol{};

} // namespace qdist
