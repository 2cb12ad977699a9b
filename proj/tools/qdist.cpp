// qdist: quantum-circuit distillation and reference-experiment toolkit.
//
// Subcommands:
//   distill <config>   search for a short equivalent of an inverse-transform
//                      target, training the policy/value network on the way
//   eval               score a circuit file against a reference transform
//   gen-iqft           emit conventional/generalized inverse-transform circuits
//   qpe                phase-estimation output distributions
//   shor               the 57 = 3 x 19 order-finding demonstration
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <CLI11.hpp>

#include <cstdint>
#include <deque>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qdist/action_space.hpp"
#include "qdist/builders.hpp"
#include "qdist/circuit.hpp"
#include "qdist/distill.hpp"
#include "qdist/io.hpp"
#include "qdist/mcts.hpp"
#include "qdist/metrics.hpp"
#include "qdist/nn/checkpoint.hpp"
#include "qdist/nn/dual_net.hpp"
#include "qdist/noise.hpp"
#include "qdist/rng.hpp"
#include "qdist/statevector.hpp"
#include "qdist/unitary.hpp"

namespace {

using namespace qdist;

/// Thrown for violated command preconditions; mapped to exit code 1.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Write to `path`, or to stdout when no path is given.
void emit(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        write_text_file(path, content);
}

/// "iqft-n" -> the exact n-qubit inverse-transform target.
Target parse_target(const std::string& name) {
    const std::string prefix = "iqft-";
    if (name.rfind(prefix, 0) != 0)
        throw UsageError("target must have the form iqft-n, got '" + name + "'");
    int n = 0;
    const char* first = name.data() + prefix.size();
    const char* last = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc{} || ptr != last || n < 1 || n > 12)
        throw UsageError("target qubit count must be an integer in [1, 12], got '" + name + "'");
    return Target::iqft(n);
}

std::string bits_of(std::uint64_t value, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int b = 0; b < width; ++b)
        if ((value >> b) & 1) s[static_cast<std::size_t>(width - 1 - b)] = '1';
    return s;
}

/// Canonical "key=value\n" text for hashing: fixed key order, exact values.
std::string canon_line(const std::string& key, const std::string& value) {
    return key + "=" + value + "\n";
}

// ------------------------------------------------------------------ distill

int cmd_distill(const std::string& config_path, const std::optional<std::uint64_t>& seed_flag) {
    static const std::set<std::string> allowed{
        "target",         "seed",           "c_puct",
        "sims_per_move",  "b_threshold",    "max_len",
        "test_inputs",    "reward_shots",   "episodes",
        "train_interval", "steps_per_training", "replay_capacity",
        "channels",       "stop_on_success", "eval_inputs",
        "learning_rate",  "batch_size",     "out_dir",
        "resume_checkpoint", "resume_replay"};
    const Config file = load_config(config_path, allowed);

    const std::string target_name = file.get("target", "");
    if (target_name.empty()) throw UsageError(config_path + ": config must set 'target'");
    const Target target = parse_target(target_name);

    DistillConfig cfg;
    cfg.mcts.seed = seed_flag ? *seed_flag : file.get_u64("seed", 0);
    cfg.mcts.c_puct = file.get_double("c_puct", cfg.mcts.c_puct);
    cfg.mcts.sims_per_move = file.get_int("sims_per_move", cfg.mcts.sims_per_move);
    cfg.mcts.b_threshold = file.get_double("b_threshold", cfg.mcts.b_threshold);
    cfg.mcts.max_len = file.get_int("max_len", cfg.mcts.max_len);
    cfg.mcts.test_inputs = file.get_int("test_inputs", cfg.mcts.test_inputs);
    cfg.mcts.reward_shots = file.get_int("reward_shots", cfg.mcts.reward_shots);
    cfg.episodes = file.get_int("episodes", cfg.episodes);
    cfg.train_interval = file.get_int("train_interval", cfg.train_interval);
    cfg.steps_per_training = file.get_int("steps_per_training", cfg.steps_per_training);
    cfg.replay_capacity = file.get_int("replay_capacity", cfg.replay_capacity);
    cfg.channels = file.get_int("channels", cfg.channels);
    cfg.stop_on_success = file.get_bool("stop_on_success", cfg.stop_on_success);
    cfg.eval_inputs = file.get_int("eval_inputs", cfg.eval_inputs);
    cfg.train.learning_rate = file.get_double("learning_rate", cfg.train.learning_rate);
    cfg.train.batch_size = file.get_int("batch_size", cfg.train.batch_size);
    validate_distill(cfg, target.num_qubits);

    const std::string out_dir = file.get("out_dir", ".");
    std::filesystem::create_directories(out_dir);
    const auto out_path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    std::string canon = canon_line("command", "distill");
    canon += canon_line("target", target.name);
    canon += canon_line("seed", std::to_string(cfg.mcts.seed));
    canon += canon_line("c_puct", exact_double(cfg.mcts.c_puct));
    canon += canon_line("sims_per_move", std::to_string(cfg.mcts.sims_per_move));
    canon += canon_line("b_threshold", exact_double(cfg.mcts.b_threshold));
    canon += canon_line("max_len", std::to_string(cfg.mcts.resolved_max_len(target.num_qubits)));
    canon += canon_line("test_inputs", std::to_string(cfg.mcts.test_inputs));
    canon += canon_line("reward_shots", std::to_string(cfg.mcts.reward_shots));
    canon += canon_line("episodes", std::to_string(cfg.episodes));
    canon += canon_line("train_interval", std::to_string(cfg.train_interval));
    canon += canon_line("steps_per_training", std::to_string(cfg.steps_per_training));
    canon += canon_line("replay_capacity", std::to_string(cfg.replay_capacity));
    canon += canon_line("channels", std::to_string(cfg.channels));
    canon += canon_line("stop_on_success", cfg.stop_on_success ? "true" : "false");
    canon += canon_line("eval_inputs", std::to_string(cfg.eval_inputs));
    canon += canon_line("learning_rate", exact_double(cfg.train.learning_rate));
    canon += canon_line("batch_size", std::to_string(cfg.train.batch_size));
    const std::uint64_t config_hash = fnv1a_text(canon);

    const ActionSpace space = action_space(target.num_qubits);
    const int max_len = cfg.mcts.resolved_max_len(target.num_qubits);

    DualNet net = [&]() {
        if (file.has("resume_checkpoint")) {
            DualNet loaded = checkpoint_load(file.get("resume_checkpoint", ""));
            if (loaded.config().actions != space.size() ||
                loaded.config().encoded_len != max_len)
                throw std::runtime_error(
                    "resume checkpoint does not match this run's action space or length cap");
            return loaded;
        }
        return DualNet(NetConfig::standard(space.size(), max_len, cfg.channels),
                       Rng::derive(cfg.mcts.seed, 0x6e6574ULL));
    }();

    std::deque<TrainingExample> replay;
    if (file.has("resume_replay")) {
        const ExamplePack pack = load_example_pack(file.get("resume_replay", ""));
        if (pack.actions != space.size() || pack.encoded_len != max_len)
            throw std::runtime_error("resume replay pack does not match this run's shapes");
        replay.assign(pack.examples.begin(), pack.examples.end());
    }

    const DistillResult result = distill_with(target, cfg, net, &replay);

    write_text_file(out_path("loss.csv"), loss_csv(result.losses, config_hash));
    checkpoint_save(net, out_path("checkpoint.bin"));
    ExamplePack pack;
    pack.actions = space.size();
    pack.encoded_len = max_len;
    pack.examples.assign(replay.begin(), replay.end());
    save_example_pack(out_path("replay.pack"), pack);

    std::cout << "distill " << target.name << " seed=" << cfg.mcts.seed << ": "
              << result.message << "\n";
    std::cout << "episodes=" << result.episodes_run << " successes=" << result.successes
              << " gradient_steps=" << result.losses.size() << "\n";
    if (result.best) {
        save_circuit(out_path("best_circuit.json"), *result.best);
        write_text_file(out_path("eval.csv"), eval_report_csv(result.report, config_hash));
        std::cout << "best circuit: " << result.best->gates.size() << " gate(s), b_ave="
                  << exact_double(result.report.b_ave) << " over " << cfg.eval_inputs
                  << " exact inputs\n";
        std::cout << "artifacts: best_circuit.json eval.csv loss.csv checkpoint.bin "
                     "replay.pack in "
                  << out_dir << "\n";
    } else {
        std::cout << "artifacts: loss.csv checkpoint.bin replay.pack in " << out_dir << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------- eval

int cmd_eval(const std::string& circuit_path, const std::string& reference,
             const std::string& mode, std::uint64_t shots, double p1, double p2, double r,
             int inputs, std::uint64_t seed, bool fidelity, const std::string& out) {
    const Target target = parse_target(reference);
    const Circuit circuit = load_circuit(circuit_path);
    if (circuit.num_qubits != target.num_qubits)
        throw std::runtime_error("circuit has " + std::to_string(circuit.num_qubits) +
                                 " qubits but reference '" + target.name + "' needs " +
                                 std::to_string(target.num_qubits));

    EvalMode eval_mode;
    if (mode == "exact")
        eval_mode = EvalMode::exact;
    else if (mode == "shots")
        eval_mode = EvalMode::shots;
    else
        throw UsageError("mode must be 'exact' or 'shots', got '" + mode + "'");
    if (eval_mode == EvalMode::shots && shots == 0)
        throw UsageError("shots mode needs --shots > 0");
    if (fidelity && eval_mode != EvalMode::exact)
        throw UsageError("--fidelity is defined for exact mode only");
    if (inputs < 1) throw UsageError("--inputs must be positive");
    const NoiseModel noise{p1, p2, r};
    try {
        validate_noise(noise);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::string canon = canon_line("command", "eval");
    canon += canon_line("circuit", serialize_circuit(circuit));
    canon += canon_line("reference", target.name);
    canon += canon_line("mode", mode);
    canon += canon_line("shots", std::to_string(eval_mode == EvalMode::shots ? shots : 0));
    canon += canon_line("p1", exact_double(p1));
    canon += canon_line("p2", exact_double(p2));
    canon += canon_line("r", exact_double(r));
    canon += canon_line("inputs", std::to_string(inputs));
    canon += canon_line("seed", std::to_string(seed));
    canon += canon_line("fidelity", fidelity ? "true" : "false");

    EvalReport report = b_ave(circuit, target, inputs, eval_mode, noise, shots, seed);
    if (fidelity) report.fidelity = gate_fidelity(unitary_of(circuit), target.matrix);

    const std::string csv = eval_report_csv(report, fnv1a_text(canon));
    emit(out, csv);
    if (!out.empty())
        std::cout << "b_ave=" << exact_double(report.b_ave) << " (" << report.shots_label
                  << ", " << inputs << " inputs) -> " << out << "\n";
    return 0;
}

// ----------------------------------------------------------------- gen-iqft

int cmd_gen_iqft(int n, const std::string& variant, std::string out,
                 const std::string& counts_csv) {
    if (n < 1 || n > 10) throw UsageError("n out of range [1, 10]");
    if (variant != "conventional" && variant != "generalized")
        throw UsageError("variant must be 'conventional' or 'generalized'");

    const Circuit circuit = variant == "conventional" ? conventional_iqft(n)
                                                      : generalized_iqft(n);
    if (out.empty()) out = "iqft_" + variant + "_" + std::to_string(n) + ".json";
    save_circuit(out, circuit);
    std::cout << "iqft " << variant << " n=" << n << ": "
              << gate_count(circuit, CountConvention::abstract_gates) << " gates ("
              << gate_count(circuit, CountConvention::decomposed) << " decomposed) -> " << out
              << "\n";

    if (!counts_csv.empty()) {
        std::string canon = canon_line("command", "gen-iqft-counts");
        canon += canon_line("range", "2..9");
        std::string csv = "# config " + hash_hex(fnv1a_text(canon)) + "\n";
        csv += "n,conventional_abstract,conventional_decomposed,generalized_abstract,"
               "generalized_decomposed\n";
        for (int k = 2; k <= 9; ++k) {
            const Circuit conv = conventional_iqft(k);
            const Circuit gen = generalized_iqft(k);
            csv += std::to_string(k) + "," +
                   std::to_string(gate_count(conv, CountConvention::abstract_gates)) + "," +
                   std::to_string(gate_count(conv, CountConvention::decomposed)) + "," +
                   std::to_string(gate_count(gen, CountConvention::abstract_gates)) + "," +
                   std::to_string(gate_count(gen, CountConvention::decomposed)) + "\n";
        }
        write_text_file(counts_csv, csv);
        std::cout << "counts for n=2..9 -> " << counts_csv << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------- qpe

int cmd_qpe(int n, double theta, const std::string& variant, const std::string& out) {
    if (n < 1 || n > 12) throw UsageError("n out of range [1, 12]");
    if (!(theta >= 0.0 && theta < 1.0)) throw UsageError("theta must lie in [0, 1)");
    if (variant != "conventional" && variant != "generalized")
        throw UsageError("variant must be 'conventional' or 'generalized'");

    const Circuit iqft = variant == "conventional" ? conventional_iqft(n)
                                                   : generalized_iqft(n);
    const Circuit circuit = qpe_circuit(n, theta, iqft);
    const ProbDist dist = measure_dist(run_circuit(circuit));

    std::string canon = canon_line("command", "qpe");
    canon += canon_line("n", std::to_string(n));
    canon += canon_line("theta", exact_double(theta));
    canon += canon_line("variant", variant);

    const bool with_oracle = variant == "generalized";
    ProbDist oracle;
    double max_abs_diff = 0.0;
    if (with_oracle) {
        oracle = qpe_generalized_oracle(n, theta);
        for (std::size_t i = 0; i < dist.p.size(); ++i)
            max_abs_diff = std::max(max_abs_diff, std::abs(dist.p[i] - oracle.p[i]));
    }

    std::string csv = "# config " + hash_hex(fnv1a_text(canon)) + "\n";
    csv += with_oracle ? "outcome,bits,probability,oracle\n" : "outcome,bits,probability\n";
    std::uint64_t top = 0;
    for (std::uint64_t i = 0; i < dist.p.size(); ++i) {
        csv += std::to_string(i) + "," + bits_of(i, n) + "," + exact_double(dist.p[i]);
        if (with_oracle) csv += "," + exact_double(oracle.p[i]);
        csv += "\n";
        if (dist.p[i] > dist.p[top]) top = i;
    }
    if (with_oracle) csv += "# max_abs_diff " + exact_double(max_abs_diff) + "\n";
    emit(out, csv);

    std::cout << "qpe " << variant << " n=" << n << " theta=" << exact_double(theta)
              << ": argmax outcome " << top << " (bits " << bits_of(top, n)
              << ") p=" << exact_double(dist.p[top]) << "\n";
    if (with_oracle) std::cout << "max_abs_diff=" << exact_double(max_abs_diff) << "\n";
    return 0;
}

// --------------------------------------------------------------------- shor

int cmd_shor(const std::string& variant, const std::string& circuit_path, double p1, double p2,
             double r, std::uint64_t shots, std::uint64_t seed, const std::string& out) {
    Circuit iqft(4);
    std::string label = variant;
    if (!circuit_path.empty()) {
        iqft = load_circuit(circuit_path);
        if (iqft.num_qubits != 4)
            throw std::runtime_error("shor expects a 4-qubit transform block, got " +
                                     std::to_string(iqft.num_qubits) + " qubits");
        label = "circuit-file";
    } else if (variant == "conventional") {
        iqft = conventional_iqft(4);
    } else if (variant == "generalized") {
        iqft = generalized_iqft(4);
    } else {
        throw UsageError("variant must be 'conventional' or 'generalized' (or use --circuit)");
    }

    const NoiseModel noise{p1, p2, r};
    try {
        validate_noise(noise);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!noise.is_zero() && shots == 0)
        throw UsageError("noisy runs need --shots > 0 (trajectory sampling)");

    const Circuit full = shor57_circuit(iqft);
    // The ideal reference: exact conventional-transform marginal {0: 1/2, 8: 1/2}.
    const ProbDist ideal =
        shor57_counting_marginal(run_circuit(shor57_circuit(conventional_iqft(4))));

    ProbDist counting;
    std::string mode_label = "exact";
    if (shots > 0) {
        const ProbDist full_dist = run_noisy(full, StateVector::zero_state(10), noise, shots,
                                             Rng::derive(seed, 0x73686f74ULL));
        counting.num_qubits = 4;
        counting.p.assign(16, 0.0);
        for (std::size_t i = 0; i < full_dist.p.size(); ++i)
            counting.p[i & 0xF] += full_dist.p[i];
        mode_label = std::to_string(shots);
    } else {
        counting = shor57_counting_marginal(run_circuit(full));
    }
    const double b_vs_ideal = bhattacharyya(counting, ideal);

    std::string canon = canon_line("command", "shor");
    canon += canon_line("variant", label);
    canon += canon_line("iqft", serialize_circuit(iqft));
    canon += canon_line("p1", exact_double(p1));
    canon += canon_line("p2", exact_double(p2));
    canon += canon_line("r", exact_double(r));
    canon += canon_line("shots", std::to_string(shots));
    canon += canon_line("seed", std::to_string(seed));

    std::string csv = "# config " + hash_hex(fnv1a_text(canon)) + "\n";
    csv += "outcome,bits,probability\n";
    for (int i = 0; i < 16; ++i)
        csv += std::to_string(i) + "," + bits_of(static_cast<std::uint64_t>(i), 4) + "," +
               exact_double(counting.p[static_cast<std::size_t>(i)]) + "\n";
    csv += "# b_vs_ideal " + exact_double(b_vs_ideal) + "\n";
    emit(out, csv);

    std::cout << "shor-57 " << label << " (" << mode_label << "): b_vs_ideal="
              << exact_double(b_vs_ideal) << "\n";
    bool factored = false;
    for (int i = 0; i < 16; ++i) {
        if (counting.p[static_cast<std::size_t>(i)] <= 1e-9) continue;
        const ShorReading reading = shor57_postprocess(i);
        std::cout << "outcome " << i << " (" << bits_of(static_cast<std::uint64_t>(i), 4)
                  << ") p=" << exact_double(counting.p[static_cast<std::size_t>(i)]) << ": ";
        if (reading.outcome == 0) {
            std::cout << "trivial phase, retry\n";
            continue;
        }
        std::cout << "phase " << reading.phase_numerator << "/" << reading.phase_denominator;
        if (reading.order) {
            std::cout << ", order " << *reading.order;
            if (reading.factors) {
                std::cout << ", factors " << reading.factors->first << " x "
                          << reading.factors->second;
                factored = true;
            } else {
                std::cout << ", no factor split";
            }
        } else {
            std::cout << ", order not recovered";
        }
        std::cout << "\n";
    }
    std::cout << (factored ? "recovered factors: 3 x 19\n" : "no factors recovered\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-circuit distillation toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand name

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "global seed (overrides config/default seeds)");

    // distill
    std::string distill_config;
    auto* distill_cmd = app.add_subcommand("distill", "search for a compressed target circuit");
    distill_cmd->add_option("config", distill_config, "key=value run configuration")->required();

    // eval
    std::string eval_circuit, eval_reference, eval_mode = "exact", eval_out;
    std::uint64_t eval_shots = 8192, eval_seed = 0;
    double eval_p1 = 0.0, eval_p2 = 0.0, eval_r = 0.0;
    int eval_inputs = 20;
    bool eval_fidelity = false;
    auto* eval_cmd = app.add_subcommand("eval", "score a circuit against a reference");
    eval_cmd->add_option("--circuit", eval_circuit, "circuit JSON file")->required();
    eval_cmd->add_option("--reference", eval_reference, "reference transform (iqft-n)")
        ->required();
    eval_cmd->add_option("--mode", eval_mode, "exact | shots");
    eval_cmd->add_option("--shots", eval_shots, "shots per input in shots mode");
    eval_cmd->add_option("--p1", eval_p1, "single-qubit depolarizing probability");
    eval_cmd->add_option("--p2", eval_p2, "two-qubit depolarizing probability");
    eval_cmd->add_option("--r", eval_r, "readout flip probability");
    eval_cmd->add_option("--inputs", eval_inputs, "number of random input states");
    eval_cmd->add_flag("--fidelity", eval_fidelity, "also report gate fidelity (exact mode)");
    eval_cmd->add_option("--out", eval_out, "CSV output path (default: stdout)");

    // gen-iqft
    int gen_n = 0;
    std::string gen_variant = "conventional", gen_out, gen_counts;
    auto* gen_cmd = app.add_subcommand("gen-iqft", "emit an inverse-transform circuit");
    gen_cmd->add_option("--n", gen_n, "qubit count in [1, 10]")->required();
    gen_cmd->add_option("--variant", gen_variant, "conventional | generalized");
    gen_cmd->add_option("--out", gen_out, "circuit JSON path (default: iqft_<variant>_<n>.json)");
    gen_cmd->add_option("--counts-csv", gen_counts, "also write the n=2..9 gate-count table");

    // qpe
    int qpe_n = 0;
    double qpe_theta = 0.0;
    std::string qpe_variant = "conventional", qpe_out;
    auto* qpe_cmd = app.add_subcommand("qpe", "phase-estimation output distribution");
    qpe_cmd->add_option("--n", qpe_n, "counting qubits in [1, 12]")->required();
    qpe_cmd->add_option("--theta", qpe_theta, "phase in [0, 1)")->required();
    qpe_cmd->add_option("--variant", qpe_variant, "conventional | generalized");
    qpe_cmd->add_option("--out", qpe_out, "CSV output path (default: stdout)");

    // shor
    std::string shor_variant = "conventional", shor_circuit, shor_out;
    double shor_p1 = 0.0, shor_p2 = 0.0, shor_r = 0.0;
    std::uint64_t shor_shots = 0, shor_seed = 0;
    auto* shor_cmd = app.add_subcommand("shor", "factor 57 via 4-bit order finding");
    shor_cmd->add_option("--variant", shor_variant, "conventional | generalized");
    shor_cmd->add_option("--circuit", shor_circuit, "4-qubit transform block from a file");
    shor_cmd->add_option("--p1", shor_p1, "single-qubit depolarizing probability");
    shor_cmd->add_option("--p2", shor_p2, "two-qubit depolarizing probability");
    shor_cmd->add_option("--r", shor_r, "readout flip probability");
    shor_cmd->add_option("--shots", shor_shots, "trajectory shots (0 = exact, noiseless)");
    shor_cmd->add_option("--out", shor_out, "CSV output path (default: stdout)");

    try {
        app.parse(argc, argv);
        if (distill_cmd->parsed()) return cmd_distill(distill_config, seed_flag);
        if (eval_cmd->parsed())
            return cmd_eval(eval_circuit, eval_reference, eval_mode, eval_shots, eval_p1,
                            eval_p2, eval_r, eval_inputs,
                            seed_flag ? *seed_flag : eval_seed, eval_fidelity, eval_out);
        if (gen_cmd->parsed()) return cmd_gen_iqft(gen_n, gen_variant, gen_out, gen_counts);
        if (qpe_cmd->parsed()) return cmd_qpe(qpe_n, qpe_theta, qpe_variant, qpe_out);
        if (shor_cmd->parsed())
            return cmd_shor(shor_variant, shor_circuit, shor_p1, shor_p2, shor_r, shor_shots,
                            seed_flag ? *seed_flag : shor_seed, shor_out);
        std::cerr << "error: no subcommand given\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
