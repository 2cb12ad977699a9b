#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "qdist/action_space.hpp"
#include "qdist/builders.hpp"
#include "qdist/nn/checkpoint.hpp"
#include "qdist/nn/dual_net.hpp"
#include "qdist/rng.hpp"

using namespace qdist;

namespace {

std::vector<int> random_state(const NetConfig& cfg, Rng& rng) {
    std::vector<int> s(static_cast<std::size_t>(cfg.encoded_len));
    for (auto& x : s) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.vocab())));
    return s;
}

std::vector<double> random_policy(int actions, Rng& rng) {
    std::vector<double> pi(static_cast<std::size_t>(actions));
    double total = 0.0;
    for (auto& x : pi) {
        x = rng.uniform() + 1e-3;
        total += x;
    }
    for (auto& x : pi) x /= total;
    return pi;
}

std::vector<TrainingExample> random_batch(const NetConfig& cfg, int size, Rng& rng) {
    std::vector<TrainingExample> batch;
    for (int i = 0; i < size; ++i) {
        TrainingExample e;
        e.state = random_state(cfg, rng);
        e.pi = random_policy(cfg.actions, rng);
        e.z = rng.below(2) == 0 ? 1.0 : -1.0;
        batch.push_back(std::move(e));
    }
    return batch;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("encode_state") {
    const auto space = action_space(2);
    SECTION("empty circuit encodes to zeros") {
        const auto v = encode_state(Circuit(2), space, 8);
        REQUIRE(v == std::vector<int>(8, 0));
    }
    SECTION("first action-space gate encodes to 1 in slot 0") {
        Circuit c(2);
        c.append(space.at(0));
        const auto v = encode_state(c, space, 4);
        REQUIRE(v == std::vector<int>{1, 0, 0, 0});
    }
    SECTION("length overflow and foreign gates are rejected") {
        Circuit c(2);
        c.append(space.at(3)).append(space.at(5));
        REQUIRE_THROWS_AS(encode_state(c, space, 1), std::invalid_argument);
        Circuit foreign(2);
        foreign.append(Gate::swap(0, 1));
        REQUIRE_THROWS_AS(encode_state(foreign, space, 4), std::invalid_argument);
    }
    SECTION("encoding is injective over action-space circuits") {
        Rng rng(55);
        std::set<std::vector<int>> seen;
        std::set<std::vector<int>> gate_seqs;
        for (int trial = 0; trial < 300; ++trial) {
            const int len = static_cast<int>(rng.below(7));
            Circuit c(2);
            std::vector<int> actions;
            for (int i = 0; i < len; ++i) {
                const int a = static_cast<int>(rng.below(14));
                actions.push_back(a);
                c.append(space.at(a));
            }
            const bool fresh_seq = gate_seqs.insert(actions).second;
            const bool fresh_enc = seen.insert(encode_state(c, space, 8)).second;
            REQUIRE(fresh_seq == fresh_enc);
        }
    }
}

TEST_CASE("network output contracts on a fresh net") {
    const NetConfig cfg = NetConfig::standard(6, 4, 8);
    DualNet net(cfg, 2024);
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = net.predict(random_state(cfg, rng));
        REQUIRE(p.log_policy.size() == 6);
        double total = 0.0;
        for (double lq : p.log_policy) total += std::exp(lq);
        REQUIRE(std::abs(total - 1.0) < 1e-5);
        REQUIRE(p.value >= -1.0);
        REQUIRE(p.value <= 1.0);
    }
    SECTION("inference is deterministic") {
        const auto s = random_state(cfg, rng);
        const auto a = net.predict(s);
        const auto b = net.predict(s);
        REQUIRE(a.log_policy == b.log_policy);
        REQUIRE(a.value == b.value);
    }
    SECTION("same seed builds identical nets") {
        DualNet other(cfg, 2024);
        for (std::size_t i = 0; i < net.blocks().size(); ++i)
            REQUIRE(net.blocks()[i].w == other.blocks()[i].w);
    }
}

TEST_CASE("loss value matches its definition") {
    const NetConfig cfg = NetConfig::standard(6, 4, 2);
    DualNet net(cfg, 7);
    Rng rng(70);
    const auto batch = random_batch(cfg, 3, rng);
    const double loss = net.loss_only(batch);
    REQUIRE(std::isfinite(loss));
    // cross-entropy term is bounded below by the policy entropy; with the
    // squared value term the whole loss must exceed the mean entropy floor
    double floor = 0.0;
    for (const auto& e : batch) {
        double h = 0.0;
        for (double p : e.pi)
            if (p > 0.0) h -= p * std::log(p);
        floor += h;
    }
    floor /= static_cast<double>(batch.size());
    REQUIRE(loss >= floor - 1e-9);
}

TEST_CASE("analytic gradients match central finite differences") {
    const NetConfig cfg = NetConfig::standard(6, 4, 2);  // miniature: 2 channels, G=6, N=4
    DualNet net(cfg, 31);
    Rng rng(13);
    const auto batch = random_batch(cfg, 3, rng);
    net.gradients(batch);

    const double h = 1e-5;
    double worst = 0.0;
    std::string worst_at;
    for (auto& blk : net.blocks()) {
        if (!blk.trainable) continue;
        for (std::size_t i = 0; i < blk.w.size(); ++i) {
            const double saved = blk.w[i];
            blk.w[i] = saved + h;
            const double up = net.loss_only(batch);
            blk.w[i] = saved - h;
            const double down = net.loss_only(batch);
            blk.w[i] = saved;
            const double fd = (up - down) / (2.0 * h);
            const double analytic = blk.g[i];
            const double rel =
                std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-6});
            if (rel > worst) {
                worst = rel;
                worst_at = blk.name + "[" + std::to_string(i) + "]";
            }
        }
    }
    INFO("worst relative error " << worst << " at " << worst_at);
    REQUIRE(worst < 1e-4);
}

TEST_CASE("training mechanics") {
    const NetConfig cfg = NetConfig::standard(6, 4, 8);
    Rng rng(99);
    const auto batch = random_batch(cfg, 4, rng);
    SECTION("zero learning rate leaves parameters unchanged") {
        DualNet net(cfg, 5);
        const auto before = net.blocks();
        TrainConfig tc;
        tc.learning_rate = 0.0;
        Rng drop(1);
        net.train_step(batch, tc, drop);
        for (std::size_t i = 0; i < before.size(); ++i)
            if (before[i].trainable)
                REQUIRE(net.blocks()[i].w == before[i].w);
    }
    SECTION("identical seeds give identical parameter trajectories") {
        DualNet a(cfg, 5), b(cfg, 5);
        TrainConfig tc;
        Rng da(77), db(77);
        for (int step = 0; step < 5; ++step) {
            const double la = a.train_step(batch, tc, da);
            const double lb = b.train_step(batch, tc, db);
            REQUIRE(la == lb);
        }
        for (std::size_t i = 0; i < a.blocks().size(); ++i)
            REQUIRE(a.blocks()[i].w == b.blocks()[i].w);
    }
    SECTION("empty batch is rejected") {
        DualNet net(cfg, 5);
        TrainConfig tc;
        Rng drop(1);
        REQUIRE_THROWS_AS(net.train_step({}, tc, drop), std::invalid_argument);
    }
}

TEST_CASE("single-batch memorization reaches the entropy floor") {
    const NetConfig cfg = NetConfig::standard(6, 4, 8);
    DualNet net(cfg, 40);
    Rng rng(41);
    // four distinct states with delta policy targets: entropy floor 0
    std::vector<TrainingExample> batch;
    for (int i = 0; i < 4; ++i) {
        TrainingExample e;
        e.state = {1 + i, (2 * i) % 7, 0, i % 2};
        e.pi.assign(6, 0.0);
        e.pi[static_cast<std::size_t>((i * 2) % 6)] = 1.0;
        e.z = (i % 2 == 0) ? 1.0 : -1.0;
        batch.push_back(std::move(e));
    }
    TrainConfig tc;
    tc.learning_rate = 0.005;
    Rng drop(4242);
    std::vector<double> checkpoints;
    int reached_at = -1;
    for (int step = 1; step <= 2000; ++step) {
        net.train_step(batch, tc, drop);
        if (step % 25 == 0) {
            const double clean = net.loss_only(batch);
            checkpoints.push_back(clean);
            if (clean < 1e-2) {
                reached_at = step;
                break;
            }
        }
    }
    INFO("reached " << reached_at << " last losses "
                    << (checkpoints.empty() ? -1.0 : checkpoints.back()));
    REQUIRE(reached_at > 0);
    REQUIRE(reached_at <= 2000);
    SECTION("loss trend is downward after warmup") {
        REQUIRE(checkpoints.size() >= 2);
        REQUIRE(checkpoints.back() < checkpoints.front());
    }
}

TEST_CASE("overfit on one example drives argmax and value") {
    const NetConfig cfg = NetConfig::standard(6, 4, 8);
    DualNet net(cfg, 17);
    TrainingExample e;
    e.state = {3, 0, 0, 0};
    e.pi.assign(6, 0.0);
    e.pi[2] = 1.0;
    e.z = 1.0;
    TrainConfig tc;
    tc.learning_rate = 0.005;
    Rng drop(8);
    // the trunk batch-norm layers see one value per feature on a
    // batch-of-one, which is ill-defined in training mode
    REQUIRE_THROWS_AS(net.train_step({e}, tc, drop), std::invalid_argument);
    // standard recipe: duplicate the single example into a legal batch
    const std::vector<TrainingExample> batch{e, e};
    for (int step = 0; step < 500; ++step) net.train_step(batch, tc, drop);
    const auto p = net.predict(e.state);
    int argmax = 0;
    for (int a = 1; a < 6; ++a)
        if (p.log_policy[static_cast<std::size_t>(a)] > p.log_policy[static_cast<std::size_t>(argmax)])
            argmax = a;
    REQUIRE(argmax == 2);
    REQUIRE(p.value > 0.9);
}

TEST_CASE("checkpoint round-trip") {
    const NetConfig cfg = NetConfig::standard(6, 4, 4);
    DualNet net(cfg, 123);
    // train a little so running stats and step counter are nontrivial
    Rng rng(3);
    const auto batch = random_batch(cfg, 4, rng);
    TrainConfig tc;
    Rng drop(5);
    for (int i = 0; i < 8; ++i) net.train_step(batch, tc, drop);

    const auto path = temp_file("qdist_ckpt_test.bin");
    checkpoint_save(net, path.string());
    const DualNet loaded = checkpoint_load(path.string());
    REQUIRE(loaded.config().actions == cfg.actions);
    REQUIRE(loaded.steps_taken() == net.steps_taken());
    SECTION("predictions are bit-identical on 100 random states") {
        Rng srng(9001);
        for (int trial = 0; trial < 100; ++trial) {
            const auto s = random_state(cfg, srng);
            const auto a = net.predict(s);
            const auto b = loaded.predict(s);
            REQUIRE(a.log_policy == b.log_policy);
            REQUIRE(a.value == b.value);
        }
    }
    SECTION("truncated blob is rejected") {
        const auto broken = temp_file("qdist_ckpt_trunc.bin");
        std::ifstream in(path, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(broken, std::ios::binary);
        out.write(all.data(), static_cast<std::streamsize>(all.size() - 64));
        out.close();
        REQUIRE_THROWS_AS(checkpoint_load(broken.string()), std::runtime_error);
        std::filesystem::remove(broken);
    }
    SECTION("header/architecture mismatch is rejected") {
        const auto tampered = temp_file("qdist_ckpt_tamper.bin");
        std::ifstream in(path, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const std::string needle = "\"actions\":6";
        const auto at = all.find(needle);
        REQUIRE(at != std::string::npos);
        all.replace(at, needle.size(), "\"actions\":7");
        std::ofstream out(tampered, std::ios::binary);
        out.write(all.data(), static_cast<std::streamsize>(all.size()));
        out.close();
        REQUIRE_THROWS_AS(checkpoint_load(tampered.string()), std::runtime_error);
        std::filesystem::remove(tampered);
    }
    std::filesystem::remove(path);
}
