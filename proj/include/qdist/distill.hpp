#pragma once
// The distillation driver: self-play episodes feed a bounded FIFO replay
// buffer, the network trains between batches of episodes, and the shortest
// circuit clearing the similarity bar is tracked and finally re-evaluated
// on fresh random inputs.

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdist/action_space.hpp"
#include "qdist/mcts.hpp"
#include "qdist/metrics.hpp"
#include "qdist/nn/dual_net.hpp"
#include "qdist/rng.hpp"
#include "qdist/selfplay.hpp"

namespace qdist {

struct DistillConfig {
    MctsConfig mcts;
    TrainConfig train;
    int episodes = 2000;          // self-play budget
    int train_interval = 10;      // episodes between training phases
    int steps_per_training = 16;  // gradient steps per phase
    int replay_capacity = 10000;  // bounded FIFO of training examples
    int channels = 256;           // network width when the driver builds the net
    bool stop_on_success = false; // stop at the first success instead of spending the budget
    int eval_inputs = 20;         // random inputs in the final exact report
};

inline void validate_distill(const DistillConfig& cfg, int num_qubits) {
    validate_mcts(cfg.mcts, num_qubits);
    if (cfg.episodes < 0) throw std::invalid_argument("episode budget cannot be negative");
    if (cfg.train_interval < 1) throw std::invalid_argument("training interval must be positive");
    if (cfg.steps_per_training < 0)
        throw std::invalid_argument("gradient steps per phase cannot be negative");
    if (cfg.replay_capacity < 1) throw std::invalid_argument("replay buffer needs capacity");
    if (cfg.channels < 1) throw std::invalid_argument("network width must be positive");
    if (cfg.eval_inputs < 1) throw std::invalid_argument("final report needs input states");
    if (cfg.train.batch_size < 2)
        throw std::invalid_argument("batch normalization needs batches of at least 2");
}

struct TrainLossRow {
    int step = 0; // 1-based gradient-step index within the run
    double loss = 0.0;
};

struct DistillResult {
    std::optional<Circuit> best;      // shortest circuit that reached reward +1
    EvalReport report;                // exact-mode evaluation of `best`
    int episodes_run = 0;
    int successes = 0;                // episodes ending with z = +1
    std::vector<TrainLossRow> losses; // one row per gradient step
    std::string message;              // "ok", or "no circuit found" when best is empty
};

/// Run the distillation loop against `target` using an existing network
/// (so a caller can warm-start from a checkpoint). `NetT` needs `predict`
/// plus `train_step(batch, train_config, dropout_rng)`.
///
/// Episodes sample their moves from pi. The replay buffer keeps the newest
/// `replay_capacity` examples; every `train_interval` episodes the network
/// takes `steps_per_training` gradient steps on batches drawn uniformly
/// with replacement (skipped until the buffer holds at least two examples,
/// the batch-norm minimum), after which the network memo is invalidated.
/// Successes are ranked by length; the earliest of equal length wins.
/// A non-null `replay_io` seeds the buffer and receives its final content,
/// which is how runs persist and resume their replay across processes.
template <class NetT>
DistillResult distill_with(const Target& target, const DistillConfig& cfg, NetT& net,
                           std::deque<TrainingExample>* replay_io = nullptr) {
    validate_distill(cfg, target.num_qubits);

    EvalCache cache;
    const SearchContext ctx = SearchContext::make(target, cfg.mcts, &cache);
    Rng move_rng(Rng::derive(cfg.mcts.seed, 0x6d6f7665ULL));     // stream tag "move"
    Rng train_rng(Rng::derive(cfg.mcts.seed, 0x747261696eULL)); // stream tag "train"
    Rng dropout_rng(Rng::derive(cfg.mcts.seed, 0x64726f70ULL)); // stream tag "drop"

    std::deque<TrainingExample> local_replay;
    std::deque<TrainingExample>& replay = replay_io ? *replay_io : local_replay;
    while (static_cast<int>(replay.size()) > cfg.replay_capacity) replay.pop_front();
    DistillResult out;
    out.message = "no circuit found";

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        EpisodeResult er = self_play_episode(target, net, cfg.mcts, ctx, move_rng, true);
        out.episodes_run = episode + 1;
        for (TrainingExample& ex : er.examples) {
            replay.push_back(std::move(ex));
            if (static_cast<int>(replay.size()) > cfg.replay_capacity) replay.pop_front();
        }
        if (er.z == 1) {
            ++out.successes;
            if (!out.best || er.circuit.gates.size() < out.best->gates.size())
                out.best = er.circuit;
            if (cfg.stop_on_success) break;
        }
        const bool phase_due = (episode + 1) % cfg.train_interval == 0;
        if (phase_due && replay.size() >= 2 && cfg.steps_per_training > 0) {
            std::vector<TrainingExample> batch;
            for (int step = 0; step < cfg.steps_per_training; ++step) {
                batch.clear();
                for (int b = 0; b < cfg.train.batch_size; ++b)
                    batch.push_back(replay[static_cast<std::size_t>(
                        train_rng.below(static_cast<std::uint64_t>(replay.size())))]);
                const double loss = net.train_step(batch, cfg.train, dropout_rng);
                out.losses.push_back({static_cast<int>(out.losses.size()) + 1, loss});
            }
            cache.clear(); // priors and values are stale once the weights move
        }
    }

    if (out.best) {
        out.report = b_ave(*out.best, target, cfg.eval_inputs,
                           Rng::derive(cfg.mcts.seed, 0x6576616cULL)); // stream tag "eval"
        out.message = "ok";
    }
    return out;
}

/// Standard entry point: builds the dual network for the target's action
/// space (width `cfg.channels`, encoding window `max_len`) and runs the loop.
inline DistillResult distill(const Target& target, const DistillConfig& cfg) {
    validate_distill(cfg, target.num_qubits);
    const ActionSpace space = action_space(target.num_qubits);
    const NetConfig net_cfg =
        NetConfig::standard(static_cast<int>(space.gates.size()),
                            cfg.mcts.resolved_max_len(target.num_qubits), cfg.channels);
    DualNet net(net_cfg, Rng::derive(cfg.mcts.seed, 0x6e6574ULL)); // stream tag "net"
    return distill_with(target, cfg, net);
}

} // namespace qdist
