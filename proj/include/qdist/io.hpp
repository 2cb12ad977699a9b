#pragma once
// File formats: circuit JSON ({n, gates: [{kind, qubits, angle?}]}),
// evaluation and training-loss CSV with config-hash headers, the key=value
// run configuration format with located diagnostics, and the binary
// training-example pack used to persist replay buffers.

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdist/circuit.hpp"
#include "qdist/gate.hpp"
#include "qdist/distill.hpp"
#include "qdist/metrics.hpp"
#include "qdist/nn/dual_net.hpp"

namespace qdist {

// ---------------------------------------------------------------- plumbing

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write on file: " + path);
}

/// Shortest decimal text that parses back to exactly the same double.
inline std::string exact_double(double x) { return nlohmann::json(x).dump(); }

/// FNV-1a over text; used to stamp output files with their configuration.
inline std::uint64_t fnv1a_text(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// ------------------------------------------------------------ circuit JSON

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    if (name == "h") return GateKind::Hadamard;
    if (name == "x") return GateKind::Not;
    if (name == "p") return GateKind::PhaseShift;
    if (name == "cx") return GateKind::CNot;
    if (name == "swap") return GateKind::Swap;
    if (name == "cp") return GateKind::ControlledPhase;
    return std::nullopt;
}

/// Circuit -> JSON text: {"gates": [{"kind", "qubits", "angle"?}...], "n"}.
/// Angles are emitted with shortest-round-trip precision, so
/// parse_circuit(serialize_circuit(c)) == c holds exactly.
inline std::string serialize_circuit(const Circuit& circuit) {
    nlohmann::json root;
    root["n"] = circuit.num_qubits;
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : circuit.gates) {
        nlohmann::json jg;
        jg["kind"] = gate_name(g.kind);
        nlohmann::json qubits = nlohmann::json::array();
        for (int i = 0; i < g.arity(); ++i) qubits.push_back(g.qubits[static_cast<std::size_t>(i)]);
        jg["qubits"] = qubits;
        if (has_angle(g.kind)) jg["angle"] = g.angle;
        gates.push_back(jg);
    }
    root["gates"] = gates;
    return root.dump(2) + "\n";
}

inline Circuit parse_circuit(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("circuit JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::runtime_error("circuit JSON: top level must be an object");
    for (const auto& [key, _] : root.items())
        if (key != "n" && key != "gates")
            throw std::runtime_error("circuit JSON: unknown key '" + key + "'");
    if (!root.contains("n") || !root["n"].is_number_integer())
        throw std::runtime_error("circuit JSON: missing integer field 'n'");
    if (!root.contains("gates") || !root["gates"].is_array())
        throw std::runtime_error("circuit JSON: missing array field 'gates'");

    Circuit circuit(root["n"].get<int>());
    for (const auto& jg : root["gates"]) {
        if (!jg.is_object()) throw std::runtime_error("circuit JSON: gate entries must be objects");
        for (const auto& [key, _] : jg.items())
            if (key != "kind" && key != "qubits" && key != "angle")
                throw std::runtime_error("circuit JSON: unknown gate key '" + key + "'");
        if (!jg.contains("kind") || !jg["kind"].is_string())
            throw std::runtime_error("circuit JSON: gate needs a string 'kind'");
        const auto kind = gate_kind_from_name(jg["kind"].get<std::string>());
        if (!kind)
            throw std::runtime_error("circuit JSON: unknown gate kind '" +
                                     jg["kind"].get<std::string>() + "'");
        if (!jg.contains("qubits") || !jg["qubits"].is_array())
            throw std::runtime_error("circuit JSON: gate needs a 'qubits' array");
        const auto& jq = jg["qubits"];
        const int needed = is_two_qubit(*kind) ? 2 : 1;
        if (static_cast<int>(jq.size()) != needed)
            throw std::runtime_error(std::string("circuit JSON: gate '") + gate_name(*kind) +
                                     "' needs " + std::to_string(needed) + " qubit(s)");
        Gate g;
        g.kind = *kind;
        g.qubits = {-1, -1};
        for (std::size_t i = 0; i < jq.size(); ++i) {
            if (!jq[i].is_number_integer())
                throw std::runtime_error("circuit JSON: qubit indices must be integers");
            g.qubits[i] = jq[i].get<int>();
        }
        if (has_angle(*kind)) {
            if (!jg.contains("angle") || !jg["angle"].is_number())
                throw std::runtime_error(std::string("circuit JSON: gate '") + gate_name(*kind) +
                                         "' needs a numeric 'angle'");
            g.angle = jg["angle"].get<double>();
        } else if (jg.contains("angle")) {
            throw std::runtime_error(std::string("circuit JSON: gate '") + gate_name(*kind) +
                                     "' takes no 'angle'");
        }
        try {
            circuit.append(g); // runs full gate validation against n
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("circuit JSON: ") + e.what());
        }
    }
    return circuit;
}

inline void save_circuit(const std::string& path, const Circuit& circuit) {
    write_text_file(path, serialize_circuit(circuit));
}

inline Circuit load_circuit(const std::string& path) {
    try {
        return parse_circuit(read_text_file(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

// -------------------------------------------------------------- CSV output

/// Evaluation report as CSV: a config-hash comment, a column header, one
/// row per input (its seed and B), and summary rows for B_ave, the optional
/// gate fidelity, and the shot label.
inline std::string eval_report_csv(const EvalReport& report, std::uint64_t config_hash) {
    std::string out = "# config " + hash_hex(config_hash) + "\n";
    out += "row,key,value\n";
    for (const EvalRow& row : report.rows)
        out += "input," + std::to_string(row.input_seed) + "," + exact_double(row.b) + "\n";
    out += "summary,b_ave," + exact_double(report.b_ave) + "\n";
    if (report.fidelity) out += "summary,fidelity," + exact_double(*report.fidelity) + "\n";
    out += "summary,shots," + report.shots_label + "\n";
    return out;
}

/// Training losses as CSV: config-hash comment, header, one row per step.
inline std::string loss_csv(const std::vector<TrainLossRow>& rows, std::uint64_t config_hash) {
    std::string out = "# config " + hash_hex(config_hash) + "\n";
    out += "step,loss\n";
    for (const TrainLossRow& row : rows)
        out += std::to_string(row.step) + "," + exact_double(row.loss) + "\n";
    return out;
}

// ------------------------------------------------------- key=value configs

/// A parsed key=value configuration file. Parsing rejects unknown keys,
/// duplicates, and malformed lines, each with its file:line location;
/// typed getters reject unparseable values naming the key.
struct Config {
    std::string path;
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback) const {
        const auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }

    int get_int(const std::string& key, int fallback) const {
        const auto it = values.find(key);
        if (it == values.end()) return fallback;
        int out = 0;
        const char* first = it->second.data();
        const char* last = first + it->second.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc{} || ptr != last) fail(key, "an integer");
        return out;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        const auto it = values.find(key);
        if (it == values.end()) return fallback;
        std::uint64_t out = 0;
        const char* first = it->second.data();
        const char* last = first + it->second.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc{} || ptr != last) fail(key, "an unsigned integer");
        return out;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values.find(key);
        if (it == values.end()) return fallback;
        const std::string& s = it->second;
        char* end = nullptr;
        const double out = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || s.empty()) fail(key, "a number");
        return out;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const auto it = values.find(key);
        if (it == values.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        fail(key, "a boolean (true/false/1/0)");
        return false; // unreachable
    }

private:
    [[noreturn]] void fail(const std::string& key, const std::string& expected) const {
        throw std::runtime_error(path + ": key '" + key + "': expected " + expected +
                                 ", got '" + values.at(key) + "'");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace detail

/// Parse `key = value` lines. Blank lines and lines starting with '#' are
/// skipped; a trailing `# comment` is stripped from values. Every key must
/// be in `allowed`; violations name the file and line.
inline Config parse_config(const std::string& text, const std::string& path,
                           const std::set<std::string>& allowed) {
    Config cfg;
    cfg.path = path;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto where = [&]() { return path + ":" + std::to_string(lineno); };
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(where() + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(stripped).substr(0, eq));
        const std::string value = detail::trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) throw std::runtime_error(where() + ": empty key");
        if (value.empty()) throw std::runtime_error(where() + ": empty value for key '" + key + "'");
        if (allowed.find(key) == allowed.end())
            throw std::runtime_error(where() + ": unknown key '" + key + "'");
        if (cfg.values.count(key))
            throw std::runtime_error(where() + ": duplicate key '" + key + "'");
        cfg.values.emplace(key, value);
    }
    return cfg;
}

inline Config load_config(const std::string& path, const std::set<std::string>& allowed) {
    return parse_config(read_text_file(path), path, allowed);
}

// ------------------------------------------------------ example pack (binary)

namespace detail {

inline void pack_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline void pack_f64(std::string& out, double x) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

inline std::uint32_t unpack_u32(const std::string& in, std::size_t& at) {
    if (at + 4 > in.size()) throw std::runtime_error("example pack: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)]))
             << (8 * i);
    at += 4;
    return v;
}

inline double unpack_f64(const std::string& in, std::size_t& at) {
    if (at + 8 > in.size()) throw std::runtime_error("example pack: truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)]))
                << (8 * i);
    at += 8;
    double x = 0.0;
    std::memcpy(&x, &bits, sizeof(x));
    return x;
}

} // namespace detail

/// Replay-buffer persistence. One JSON header line describing the shape,
/// then per example: encoded state (u32 little-endian each), pi (f64
/// little-endian each), and z (f64). Round-trips bit-exactly.
struct ExamplePack {
    int actions = 0;
    int encoded_len = 0;
    std::vector<TrainingExample> examples;
};

inline std::string serialize_example_pack(const ExamplePack& pack) {
    nlohmann::json header;
    header["format"] = "qdist-pack-v1";
    header["actions"] = pack.actions;
    header["encoded_len"] = pack.encoded_len;
    header["count"] = pack.examples.size();
    std::string out = header.dump() + "\n";
    for (const TrainingExample& ex : pack.examples) {
        if (static_cast<int>(ex.state.size()) != pack.encoded_len ||
            static_cast<int>(ex.pi.size()) != pack.actions)
            throw std::invalid_argument("example pack: example shape does not match header");
        for (int s : ex.state) detail::pack_u32(out, static_cast<std::uint32_t>(s));
        for (double p : ex.pi) detail::pack_f64(out, p);
        detail::pack_f64(out, ex.z);
    }
    return out;
}

inline ExamplePack parse_example_pack(const std::string& text) {
    const std::size_t nl = text.find('\n');
    if (nl == std::string::npos) throw std::runtime_error("example pack: missing header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text.substr(0, nl));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("example pack: bad header: ") + e.what());
    }
    if (header.value("format", "") != std::string("qdist-pack-v1"))
        throw std::runtime_error("example pack: unrecognized format");
    ExamplePack pack;
    pack.actions = header.at("actions").get<int>();
    pack.encoded_len = header.at("encoded_len").get<int>();
    const std::size_t count = header.at("count").get<std::size_t>();
    if (pack.actions < 1 || pack.encoded_len < 1)
        throw std::runtime_error("example pack: bad shape in header");
    std::size_t at = nl + 1;
    pack.examples.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        TrainingExample ex;
        ex.state.resize(static_cast<std::size_t>(pack.encoded_len));
        for (int& s : ex.state) s = static_cast<int>(detail::unpack_u32(text, at));
        ex.pi.resize(static_cast<std::size_t>(pack.actions));
        for (double& p : ex.pi) p = detail::unpack_f64(text, at);
        ex.z = detail::unpack_f64(text, at);
        pack.examples.push_back(std::move(ex));
    }
    if (at != text.size()) throw std::runtime_error("example pack: trailing bytes");
    return pack;
}

inline void save_example_pack(const std::string& path, const ExamplePack& pack) {
    write_text_file(path, serialize_example_pack(pack));
}

inline ExamplePack load_example_pack(const std::string& path) {
    try {
        return parse_example_pack(read_text_file(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

} // namespace qdist
