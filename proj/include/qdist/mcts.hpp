#pragma once
// Network-guided Monte-Carlo tree search over variable-length circuits:
// the similarity reward, the fixed evaluation panel it is scored on, PUCT
// selection with running-mean backup, and the visit-count policy.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qdist/action_space.hpp"
#include "qdist/builders.hpp"
#include "qdist/circuit.hpp"
#include "qdist/metrics.hpp"
#include "qdist/nn/dual_net.hpp"
#include "qdist/rng.hpp"
#include "qdist/statevector.hpp"

namespace qdist {

/// Search hyperparameters. `max_len <= 0` stands for the default cap of
/// 4n gates, resolved against the target's qubit count at run time.
struct MctsConfig {
    double c_puct = 1.5;     // exploration constant in the upper confidence bound
    int sims_per_move = 200; // tree simulations per emitted policy
    double b_threshold = 0.9; // similarity bar the candidate must clear on every panel state
    int max_len = 0;         // candidate length cap N; <= 0 resolves to 4n
    int test_inputs = 5;     // evaluation panel size
    int reward_shots = 0;    // 0: exact distributions in the reward; > 0: finite-shot estimate
    std::uint64_t seed = 0;  // run seed: panel generation and shot-mode reward draws

    int resolved_max_len(int num_qubits) const {
        return max_len > 0 ? max_len : 4 * num_qubits;
    }
};

inline void validate_mcts(const MctsConfig& cfg, int num_qubits) {
    if (num_qubits < 1) throw std::invalid_argument("search needs at least one qubit");
    if (cfg.resolved_max_len(num_qubits) < 1)
        throw std::invalid_argument("length cap must be at least 1");
    if (!(cfg.b_threshold > 0.0 && cfg.b_threshold < 1.0))
        throw std::invalid_argument("similarity threshold must lie strictly inside (0, 1)");
    if (cfg.sims_per_move < 1)
        throw std::invalid_argument("at least one simulation per move is required");
    if (cfg.test_inputs < 1) throw std::invalid_argument("evaluation panel cannot be empty");
    if (cfg.c_puct < 0.0) throw std::invalid_argument("exploration constant cannot be negative");
    if (cfg.reward_shots < 0) throw std::invalid_argument("reward shot count cannot be negative");
}

/// The fixed evaluation panel: `count` input states, each prepared by a
/// random 4n-gate circuit on |0...0>, together with the target's exact
/// output distribution on each. Building the panel once per run makes the
/// reward a deterministic function of the candidate circuit.
struct TestPanel {
    std::vector<StateVector> inputs;
    std::vector<ProbDist> answers;

    static TestPanel make(const Target& target, int count, std::uint64_t seed) {
        if (count < 1) throw std::invalid_argument("evaluation panel cannot be empty");
        TestPanel panel;
        const std::uint64_t base = Rng::derive(seed, 0x70616e656cULL); // stream tag "panel"
        for (int i = 0; i < count; ++i) {
            const Circuit prep =
                random_input_circuit(target.num_qubits, 4 * target.num_qubits,
                                     Rng::derive(base, static_cast<std::uint64_t>(i)));
            StateVector input = run_circuit(prep);
            panel.answers.push_back(measure_dist(target.apply(input)));
            panel.inputs.push_back(std::move(input));
        }
        return panel;
    }
};

namespace detail {

/// FNV-1a over an integer vector; used both as the eval-cache hash and as a
/// per-circuit stream tag for shot-mode reward draws.
inline std::uint64_t fnv1a(const std::vector<int>& v) {
    std::uint64_t h = 1469598103934665603ULL;
    for (int x : v) {
        h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
        h *= 1099511628211ULL;
    }
    return h;
}

struct IntVecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        return static_cast<std::size_t>(fnv1a(v));
    }
};

} // namespace detail

/// Step reward for a candidate whose panel outputs are already evolved:
/// +1 when B exceeds the threshold on every panel state (terminal success),
/// -1 when the length cap is reached without success (terminal failure),
/// 0 otherwise (search continues). With `shots > 0` the candidate side of B
/// is a finite-shot estimate drawn deterministically from `shot_seed`.
inline int reward_from_outputs(const std::vector<StateVector>& outputs, const TestPanel& panel,
                               double b_th, bool at_max_len, int shots = 0,
                               std::uint64_t shot_seed = 0) {
    if (outputs.empty()) throw std::invalid_argument("reward needs at least one test state");
    if (outputs.size() != panel.answers.size())
        throw std::invalid_argument("reward: evolved outputs do not match the panel");
    bool success = true;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        ProbDist measured = measure_dist(outputs[i]);
        if (shots > 0)
            measured = sample(measured, static_cast<std::uint64_t>(shots),
                              Rng::derive(shot_seed, static_cast<std::uint64_t>(i)));
        if (!(bhattacharyya(measured, panel.answers[i]) > b_th)) {
            success = false;
            break;
        }
    }
    if (success) return 1;
    return at_max_len ? -1 : 0;
}

/// Reward of a candidate circuit against a target on explicit test states.
/// Exact-simulation form of the step reward; see reward_from_outputs.
inline int reward(const Circuit& candidate, const Target& target,
                  const std::vector<StateVector>& test_states, double b_th, bool at_max_len) {
    if (test_states.empty()) throw std::invalid_argument("reward needs at least one test state");
    bool success = true;
    for (const StateVector& input : test_states) {
        const ProbDist got = measure_dist(run_circuit(candidate, input));
        const ProbDist want = measure_dist(target.apply(input));
        if (!(bhattacharyya(got, want) > b_th)) {
            success = false;
            break;
        }
    }
    if (success) return 1;
    return at_max_len ? -1 : 0;
}

/// Memo of network evaluations keyed by the encoded circuit. Valid for one
/// set of network weights only: clear it after every training phase.
class EvalCache {
public:
    struct Entry {
        std::vector<double> priors; // exp of the log-policy; sums to 1
        double value = 0.0;
    };

    const Entry* find(const std::vector<int>& key) const {
        const auto it = map_.find(key);
        return it == map_.end() ? nullptr : &it->second;
    }

    void put(const std::vector<int>& key, Entry entry) {
        if (map_.size() >= max_entries_) map_.clear();
        map_.emplace(key, std::move(entry));
    }

    void clear() { map_.clear(); }
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<std::vector<int>, Entry, detail::IntVecHash> map_;
    std::size_t max_entries_ = 1u << 20;
};

/// Shared, read-only context for every search of one run: the action space,
/// the evaluation panel, and (optionally) the per-generation network memo.
struct SearchContext {
    ActionSpace space;
    TestPanel panel;
    EvalCache* cache = nullptr;

    static SearchContext make(const Target& target, const MctsConfig& cfg,
                              EvalCache* cache = nullptr) {
        validate_mcts(cfg, target.num_qubits);
        return SearchContext{action_space(target.num_qubits),
                             TestPanel::make(target, cfg.test_inputs, cfg.seed), cache};
    }
};

namespace detail {

/// One search-tree node: the panel states evolved through its circuit (so a
/// child costs one gate application per panel state), its terminal status,
/// and — once expanded — per-action edge statistics N, Q, P.
struct SearchNode {
    std::vector<int> encoded;        // length-N integer encoding of the circuit
    std::vector<StateVector> states; // panel evolved through the circuit
    int depth = 0;                   // circuit length
    int terminal_reward = 0;         // +1 / -1 when terminal
    bool terminal = false;
    bool expanded = false;
    std::vector<double> prior; // P(s, a)
    std::vector<int> visits;   // N(s, a)
    std::vector<double> q;     // Q(s, a), running mean of backed-up values
    std::vector<int> child;    // pool index per action, -1 where not yet created
};

/// Network evaluation with optional memoization; returns priors and value.
template <class NetT>
EvalCache::Entry evaluate_leaf(const NetT& net, const std::vector<int>& encoded,
                               EvalCache* cache) {
    if (cache != nullptr) {
        if (const EvalCache::Entry* hit = cache->find(encoded)) return *hit;
    }
    const auto pred = net.predict(encoded);
    EvalCache::Entry entry;
    entry.priors.resize(pred.log_policy.size());
    for (std::size_t a = 0; a < pred.log_policy.size(); ++a)
        entry.priors[a] = std::exp(pred.log_policy[a]);
    entry.value = pred.value;
    if (cache != nullptr) cache->put(encoded, entry);
    return entry;
}

} // namespace detail

/// One PUCT search from `root`: runs `sims_per_move` simulations, each
/// descending by argmax of Q(s,a) + c_puct P(s,a) sqrt(sum_b N(s,b)) /
/// [1 + N(s,a)] (ties to the lowest action index), expanding one leaf with
/// network priors/value — terminal leaves back up their reward of +1/-1
/// without a network call — and updating every traversed edge by
/// Q <- [N Q + V] / [1 + N], N <- N + 1. Returns the visit-count policy
/// pi(a) = N(root, a) / sims_per_move.
///
/// `NetT` needs `predict(const std::vector<int>&)` returning members
/// `log_policy` (length G, exp summing to 1) and `value`.
template <class NetT>
std::vector<double> mcts_policy(const Circuit& root, const NetT& net, const MctsConfig& cfg,
                                const SearchContext& ctx) {
    const int n = root.num_qubits;
    validate_mcts(cfg, n);
    const int max_len = cfg.resolved_max_len(n);
    const int num_actions = static_cast<int>(ctx.space.gates.size());
    if (num_actions < 1) throw std::invalid_argument("search needs a nonempty action space");
    if (ctx.space.num_qubits != n)
        throw std::invalid_argument("action space does not match the root circuit width");
    if (ctx.panel.inputs.empty() || ctx.panel.inputs.size() != ctx.panel.answers.size())
        throw std::invalid_argument("search context holds no usable evaluation panel");
    if (static_cast<int>(root.gates.size()) >= max_len)
        throw std::invalid_argument("search root is already at the length cap");
    const std::uint64_t shot_base =
        cfg.reward_shots > 0 ? Rng::derive(cfg.seed, 0x72657761ULL) : 0; // stream tag "rewa"

    std::vector<detail::SearchNode> pool;
    pool.reserve(static_cast<std::size_t>(cfg.sims_per_move) + 1);

    {
        detail::SearchNode rn;
        rn.depth = static_cast<int>(root.gates.size());
        rn.encoded = encode_state(root, ctx.space, max_len);
        rn.states.reserve(ctx.panel.inputs.size());
        for (const StateVector& input : ctx.panel.inputs)
            rn.states.push_back(run_circuit(root, input));
        const int r = reward_from_outputs(rn.states, ctx.panel, cfg.b_threshold,
                                          rn.depth >= max_len, cfg.reward_shots,
                                          Rng::derive(shot_base, detail::fnv1a(rn.encoded)));
        if (r != 0) throw std::invalid_argument("search root is already terminal");
        const auto eval = detail::evaluate_leaf(net, rn.encoded, ctx.cache);
        if (static_cast<int>(eval.priors.size()) != num_actions)
            throw std::invalid_argument("network policy width does not match the action space");
        rn.prior = eval.priors;
        rn.visits.assign(static_cast<std::size_t>(num_actions), 0);
        rn.q.assign(static_cast<std::size_t>(num_actions), 0.0);
        rn.child.assign(static_cast<std::size_t>(num_actions), -1);
        rn.expanded = true;
        pool.push_back(std::move(rn));
    }

    std::vector<std::pair<int, int>> path; // (node index, action) per traversed edge
    for (int sim = 0; sim < cfg.sims_per_move; ++sim) {
        path.clear();
        int node_idx = 0;
        double leaf_value = 0.0;
        while (true) {
            int best_action = 0;
            {
                const detail::SearchNode& node = pool[static_cast<std::size_t>(node_idx)];
                int total_visits = 0;
                for (int v : node.visits) total_visits += v;
                const double sqrt_total = std::sqrt(static_cast<double>(total_visits));
                double best_score = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < num_actions; ++a) {
                    const std::size_t ai = static_cast<std::size_t>(a);
                    const double u = cfg.c_puct * node.prior[ai] * sqrt_total /
                                     (1.0 + static_cast<double>(node.visits[ai]));
                    const double score = node.q[ai] + u;
                    if (score > best_score) {
                        best_score = score;
                        best_action = a;
                    }
                }
            }
            path.emplace_back(node_idx, best_action);

            int child_idx = pool[static_cast<std::size_t>(node_idx)]
                                .child[static_cast<std::size_t>(best_action)];
            if (child_idx < 0) {
                // Create the child: one gate application per panel state.
                detail::SearchNode child;
                {
                    const detail::SearchNode& parent = pool[static_cast<std::size_t>(node_idx)];
                    child.depth = parent.depth + 1;
                    child.encoded = parent.encoded;
                    child.encoded[static_cast<std::size_t>(parent.depth)] = 1 + best_action;
                    child.states = parent.states;
                }
                const Gate& g = ctx.space.gates[static_cast<std::size_t>(best_action)];
                for (StateVector& s : child.states) apply_gate_inplace(s, g);
                const int r = reward_from_outputs(
                    child.states, ctx.panel, cfg.b_threshold, child.depth >= max_len,
                    cfg.reward_shots, Rng::derive(shot_base, detail::fnv1a(child.encoded)));
                child.terminal = (r != 0);
                child.terminal_reward = r;
                if (child.terminal) {
                    leaf_value = static_cast<double>(r);
                } else {
                    const auto eval = detail::evaluate_leaf(net, child.encoded, ctx.cache);
                    child.prior = eval.priors;
                    child.visits.assign(static_cast<std::size_t>(num_actions), 0);
                    child.q.assign(static_cast<std::size_t>(num_actions), 0.0);
                    child.child.assign(static_cast<std::size_t>(num_actions), -1);
                    child.expanded = true;
                    leaf_value = eval.value;
                }
                child_idx = static_cast<int>(pool.size());
                pool.push_back(std::move(child));
                pool[static_cast<std::size_t>(node_idx)]
                    .child[static_cast<std::size_t>(best_action)] = child_idx;
                break;
            }

            const detail::SearchNode& child = pool[static_cast<std::size_t>(child_idx)];
            if (child.terminal) {
                // Terminal nodes are re-backed on every visit, no network call.
                leaf_value = static_cast<double>(child.terminal_reward);
                break;
            }
            node_idx = child_idx;
        }

        for (const auto& [ni, a] : path) {
            detail::SearchNode& node = pool[static_cast<std::size_t>(ni)];
            const std::size_t ai = static_cast<std::size_t>(a);
            const double old_n = static_cast<double>(node.visits[ai]);
            node.q[ai] = (old_n * node.q[ai] + leaf_value) / (old_n + 1.0);
            node.visits[ai] += 1;
        }
    }

    std::vector<double> pi(static_cast<std::size_t>(num_actions), 0.0);
    const detail::SearchNode& rn = pool[0];
    for (int a = 0; a < num_actions; ++a)
        pi[static_cast<std::size_t>(a)] = static_cast<double>(rn.visits[static_cast<std::size_t>(a)]) /
                                          static_cast<double>(cfg.sims_per_move);
    return pi;
}

/// Convenience form that builds a fresh context (panel from cfg.seed, no
/// network memo) for a single search against `target`.
template <class NetT>
std::vector<double> mcts_policy(const Circuit& root, const NetT& net, const MctsConfig& cfg,
                                const Target& target) {
    const SearchContext ctx = SearchContext::make(target, cfg);
    return mcts_policy(root, net, cfg, ctx);
}

} // namespace qdist
