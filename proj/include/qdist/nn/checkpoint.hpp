#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdist/nn/dual_net.hpp"

namespace qdist {

/// Network checkpoint: a one-line JSON header (magic, shape hyperparameters,
/// optimizer step, and the full block table) followed by a little-endian
/// 32-bit-float blob of every block's values in table order. Parameters are
/// kept f32-representable in memory, so save -> load reproduces predictions
/// bit for bit.
inline void checkpoint_save(const DualNet& net, const std::string& path) {
    const NetConfig& cfg = net.config();
    nlohmann::json header;
    header["format"] = "qdist-dualnet-v1";
    header["actions"] = cfg.actions;
    header["encoded_len"] = cfg.encoded_len;
    header["seq_len"] = cfg.seq_len;
    header["channels"] = cfg.channels;
    header["conv_layers"] = cfg.conv_layers;
    header["bn_eps"] = cfg.bn_eps;
    header["bn_momentum"] = cfg.bn_momentum;
    header["leaky_slope"] = cfg.leaky_slope;
    header["dropout"] = cfg.dropout;
    header["step"] = net.steps_taken();
    header["padded"] = cfg.seq_len != cfg.encoded_len;  // audit: N != L deviation
    nlohmann::json table = nlohmann::json::array();
    for (const auto& b : net.blocks()) {
        table.push_back({{"name", b.name},
                         {"shape", b.shape},
                         {"trainable", b.trainable},
                         {"size", b.size()}});
    }
    header["blocks"] = table;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out << header.dump() << '\n';
    std::vector<unsigned char> bytes;
    for (const auto& b : net.blocks())
        for (double x : b.w) {
            const float f = static_cast<float>(x);
            std::uint32_t bits;
            std::memcpy(&bits, &f, sizeof bits);
            bytes.push_back(static_cast<unsigned char>(bits & 0xFF));
            bytes.push_back(static_cast<unsigned char>((bits >> 8) & 0xFF));
            bytes.push_back(static_cast<unsigned char>((bits >> 16) & 0xFF));
            bytes.push_back(static_cast<unsigned char>((bits >> 24) & 0xFF));
        }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing checkpoint blob: " + path);
}

/// Rebuild a network from a checkpoint. The header fully determines the
/// architecture; any shape disagreement between header and blob aborts the
/// load with no partial state.
inline DualNet checkpoint_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string header_line;
    if (!std::getline(in, header_line))
        throw std::runtime_error("checkpoint missing header: " + path);
    nlohmann::json header = nlohmann::json::parse(header_line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "qdist-dualnet-v1")
        throw std::runtime_error("unrecognized checkpoint format: " + path);

    NetConfig cfg;
    cfg.actions = header.at("actions").get<int>();
    cfg.encoded_len = header.at("encoded_len").get<int>();
    cfg.seq_len = header.at("seq_len").get<int>();
    cfg.channels = header.at("channels").get<int>();
    cfg.conv_layers = header.at("conv_layers").get<int>();
    cfg.bn_eps = header.at("bn_eps").get<double>();
    cfg.bn_momentum = header.at("bn_momentum").get<double>();
    cfg.leaky_slope = header.at("leaky_slope").get<double>();
    cfg.dropout = header.at("dropout").get<double>();

    DualNet net(cfg, /*seed=*/0);
    const auto& table = header.at("blocks");
    if (table.size() != net.blocks().size())
        throw std::runtime_error("checkpoint block table does not match the architecture");
    std::size_t total_values = 0;
    for (std::size_t i = 0; i < net.blocks().size(); ++i) {
        auto& b = net.blocks()[i];
        const auto& row = table[i];
        if (row.at("name").get<std::string>() != b.name ||
            row.at("shape").get<std::vector<int>>() != b.shape ||
            row.at("size").get<std::size_t>() != b.size())
            throw std::runtime_error("checkpoint shape mismatch at block '" + b.name + "'");
        total_values += b.size();
    }
    std::vector<unsigned char> bytes(total_values * 4);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw std::runtime_error("checkpoint blob truncated: " + path);

    std::size_t cursor = 0;
    for (auto& b : net.blocks())
        for (auto& x : b.w) {
            const std::uint32_t bits = static_cast<std::uint32_t>(bytes[cursor]) |
                                       (static_cast<std::uint32_t>(bytes[cursor + 1]) << 8) |
                                       (static_cast<std::uint32_t>(bytes[cursor + 2]) << 16) |
                                       (static_cast<std::uint32_t>(bytes[cursor + 3]) << 24);
            float f;
            std::memcpy(&f, &bits, sizeof f);
            x = static_cast<double>(f);
            cursor += 4;
        }
    net.set_steps_taken(header.value("step", std::int64_t{0}));
    return net;
}

} // namespace qdist
