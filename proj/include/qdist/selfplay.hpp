#pragma once
// Self-play episode generation: starting from the empty circuit, alternate
// tree search and action selection until the step reward turns terminal,
// then label every searched (state, pi) pair with the episode total.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qdist/circuit.hpp"
#include "qdist/mcts.hpp"
#include "qdist/metrics.hpp"
#include "qdist/nn/dual_net.hpp"
#include "qdist/rng.hpp"
#include "qdist/statevector.hpp"

namespace qdist {

struct EpisodeResult {
    std::vector<TrainingExample> examples; // one per searched move, labeled with z
    Circuit circuit;                       // the terminal circuit of the episode
    int z = 0;                             // +1 success, -1 failure

    EpisodeResult() : circuit(1) {}
    explicit EpisodeResult(int num_qubits) : circuit(num_qubits) {}
};

namespace detail {

/// Draw an action from a visit-count policy (inverse CDF over pi).
inline int sample_action(const std::vector<double>& pi, Rng& rng) {
    const std::vector<double> cumulative = cumulative_of(pi);
    return static_cast<int>(draw_index(cumulative, rng.uniform()));
}

/// Most-visited action; ties go to the lowest index.
inline int argmax_action(const std::vector<double>& pi) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(pi.size()); ++a)
        if (pi[static_cast<std::size_t>(a)] > pi[static_cast<std::size_t>(best)]) best = a;
    return best;
}

} // namespace detail

/// Play one episode against `target`. The step reward is checked before
/// every move — a target already satisfied by the empty circuit terminates
/// immediately with z = +1 and no moves — then the tree search runs and the
/// move is drawn from pi (`sample_actions`, training behavior) or taken as
/// the most-visited action (extraction behavior). The loop ends when the
/// reward is +1 or -1, which the length cap forces at the latest.
template <class NetT>
EpisodeResult self_play_episode(const Target& target, const NetT& net, const MctsConfig& cfg,
                                const SearchContext& ctx, Rng& move_rng,
                                bool sample_actions = true) {
    const int n = target.num_qubits;
    validate_mcts(cfg, n);
    if (ctx.space.num_qubits != n)
        throw std::invalid_argument("action space does not match the target width");
    const int max_len = cfg.resolved_max_len(n);
    const std::uint64_t shot_base =
        cfg.reward_shots > 0 ? Rng::derive(cfg.seed, 0x72657761ULL) : 0; // stream tag "rewa"

    EpisodeResult out(n);
    std::vector<StateVector> states = ctx.panel.inputs; // empty circuit: outputs = inputs
    std::vector<int> encoded(static_cast<std::size_t>(max_len), 0);

    for (;;) {
        const int len = static_cast<int>(out.circuit.gates.size());
        const int r = reward_from_outputs(states, ctx.panel, cfg.b_threshold, len >= max_len,
                                          cfg.reward_shots,
                                          Rng::derive(shot_base, detail::fnv1a(encoded)));
        if (r != 0) {
            out.z = r;
            break;
        }
        std::vector<double> pi = mcts_policy(out.circuit, net, cfg, ctx);
        const int action =
            sample_actions ? detail::sample_action(pi, move_rng) : detail::argmax_action(pi);
        out.examples.push_back({encoded, std::move(pi), 0.0});
        const Gate& g = ctx.space.gates[static_cast<std::size_t>(action)];
        out.circuit.append(g);
        for (StateVector& s : states) apply_gate_inplace(s, g);
        encoded[static_cast<std::size_t>(len)] = 1 + action;
    }
    for (TrainingExample& ex : out.examples) ex.z = static_cast<double>(out.z);
    return out;
}

/// Convenience form: fresh context (panel from cfg.seed, no network memo)
/// and a move stream derived from the run seed.
template <class NetT>
EpisodeResult self_play_episode(const Target& target, const NetT& net, const MctsConfig& cfg) {
    const SearchContext ctx = SearchContext::make(target, cfg);
    Rng move_rng(Rng::derive(cfg.seed, 0x6d6f7665ULL)); // stream tag "move"
    return self_play_episode(target, net, cfg, ctx, move_rng, true);
}

} // namespace qdist
