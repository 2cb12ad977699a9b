// File-format tests: exact circuit JSON round-trips, CSV shape and value
// fidelity, located key=value config diagnostics, and bit-exact example-pack
// persistence.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "qdist/action_space.hpp"
#include "qdist/builders.hpp"
#include "qdist/io.hpp"
#include "qdist/metrics.hpp"
#include "qdist/rng.hpp"

using namespace qdist;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("io: exact_double round-trips arbitrary doubles through text") {
    std::vector<double> values{0.0,    -0.0,   0.1,       1.0 / 3.0, 3.141592653589793,
                               1e-300, 6.02e23, -2.5e-17, 0.5,       1.0};
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) values.push_back((rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(i % 60) - 30.0));
    for (double x : values) {
        const std::string text = exact_double(x);
        const double back = std::strtod(text.c_str(), nullptr);
        CHECK(std::memcmp(&back, &x, sizeof(double)) == 0);
    }
}

TEST_CASE("io: circuit JSON round-trips every gate kind exactly") {
    std::vector<Circuit> cases;
    cases.push_back(conventional_iqft(4));
    cases.push_back(generalized_iqft(3));
    cases.push_back(Circuit(1));
    {
        Circuit c(3);
        c.append(Gate::hadamard(2));
        c.append(Gate::not_gate(0));
        c.append(Gate::phase_shift(1, 0.1 + 0.2)); // non-representable decimal
        c.append(Gate::cnot(2, 0));
        c.append(Gate::swap(0, 2));
        c.append(Gate::controlled_phase(1, 2, -3.141592653589793 / 8.0));
        cases.push_back(c);
    }
    for (int i = 0; i < 20; ++i) cases.push_back(random_input_circuit(3, 12, 500 + static_cast<std::uint64_t>(i)));

    for (const Circuit& c : cases) {
        const std::string text = serialize_circuit(c);
        const Circuit back = parse_circuit(text);
        CHECK(back == c);
        // Serialization is itself deterministic.
        CHECK(serialize_circuit(back) == text);
    }
}

TEST_CASE("io: circuit JSON rejects malformed input with specific messages") {
    CHECK_THROWS_WITH(parse_circuit("["), Catch::Matchers::StartsWith("circuit JSON:"));
    CHECK_THROWS_WITH(parse_circuit("[1,2]"),
                      Catch::Matchers::ContainsSubstring("top level"));
    CHECK_THROWS_WITH(parse_circuit(R"({"gates": []})"),
                      Catch::Matchers::ContainsSubstring("missing integer field 'n'"));
    CHECK_THROWS_WITH(parse_circuit(R"({"n": 2})"),
                      Catch::Matchers::ContainsSubstring("missing array field 'gates'"));
    CHECK_THROWS_WITH(parse_circuit(R"({"n": 2, "gates": [], "extra": 1})"),
                      Catch::Matchers::ContainsSubstring("unknown key 'extra'"));
    CHECK_THROWS_WITH(
        parse_circuit(R"({"n": 2, "gates": [{"kind": "rz", "qubits": [0]}]})"),
        Catch::Matchers::ContainsSubstring("unknown gate kind 'rz'"));
    CHECK_THROWS_WITH(
        parse_circuit(R"({"n": 2, "gates": [{"kind": "h", "qubits": [0, 1]}]})"),
        Catch::Matchers::ContainsSubstring("needs 1 qubit"));
    CHECK_THROWS_WITH(
        parse_circuit(R"({"n": 2, "gates": [{"kind": "swap", "qubits": [0, 1], "angle": 1.0}]})"),
        Catch::Matchers::ContainsSubstring("takes no 'angle'"));
    CHECK_THROWS_WITH(
        parse_circuit(R"({"n": 2, "gates": [{"kind": "p", "qubits": [0]}]})"),
        Catch::Matchers::ContainsSubstring("needs a numeric 'angle'"));
    CHECK_THROWS_WITH(
        parse_circuit(R"({"n": 2, "gates": [{"kind": "h", "qubits": [5]}]})"),
        Catch::Matchers::StartsWith("circuit JSON:")); // out-of-range via gate validation
    CHECK_THROWS_WITH(
        parse_circuit(R"({"n": 2, "gates": [{"kind": "h", "qubits": [0], "note": "hi"}]})"),
        Catch::Matchers::ContainsSubstring("unknown gate key 'note'"));
}

TEST_CASE("io: circuit files save and load; missing paths are named") {
    const auto path = temp_file("qdist_io_circuit.json");
    const Circuit c = conventional_iqft(3);
    save_circuit(path.string(), c);
    CHECK(load_circuit(path.string()) == c);
    std::filesystem::remove(path);
    CHECK_THROWS_WITH(load_circuit(path.string()),
                      Catch::Matchers::ContainsSubstring(path.string()));
}

TEST_CASE("io: evaluation report CSV carries hash, rows, and summaries") {
    EvalReport report = b_ave(conventional_iqft(2), Target::iqft(2), 4, 11);
    report.fidelity = 0.875;
    const std::string csv = eval_report_csv(report, 0xDEADBEEFCAFEF00DULL);

    std::vector<std::string> lines;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 2 + 4 + 3); // hash, header, 4 inputs, b_ave/fidelity/shots
    CHECK(lines[0] == "# config deadbeefcafef00d");
    CHECK(lines[1] == "row,key,value");
    for (int i = 0; i < 4; ++i) {
        const std::string& row = lines[static_cast<std::size_t>(2 + i)];
        REQUIRE(row.rfind("input,", 0) == 0);
        const auto c1 = row.find(',');
        const auto c2 = row.find(',', c1 + 1);
        const std::uint64_t seed = std::stoull(row.substr(c1 + 1, c2 - c1 - 1));
        const double b = std::strtod(row.c_str() + c2 + 1, nullptr);
        CHECK(seed == report.rows[static_cast<std::size_t>(i)].input_seed);
        CHECK(b == report.rows[static_cast<std::size_t>(i)].b); // exact text round-trip
    }
    CHECK(lines[6] == "summary,b_ave," + exact_double(report.b_ave));
    CHECK(lines[7] == "summary,fidelity," + exact_double(0.875));
    CHECK(lines[8] == "summary,shots,exact");
}

TEST_CASE("io: loss CSV shape") {
    const std::vector<TrainLossRow> rows{{1, 2.5}, {2, 1.25}, {3, 0.7}};
    const std::string csv = loss_csv(rows, 1);
    CHECK(csv == "# config 0000000000000001\nstep,loss\n1,2.5\n2,1.25\n3,0.7\n");
}

TEST_CASE("io: key=value config parsing with located diagnostics") {
    const std::set<std::string> allowed{"target", "seed", "episodes", "b_threshold",
                                        "stop_on_success"};
    SECTION("well-formed file with comments") {
        const std::string text =
            "# run configuration\n"
            "\n"
            "target = iqft-2\n"
            "seed=12345   # inline comment\n"
            "b_threshold = 0.9\n"
            "stop_on_success = true\n";
        const Config cfg = parse_config(text, "run.cfg", allowed);
        CHECK(cfg.get("target", "") == "iqft-2");
        CHECK(cfg.get_u64("seed", 0) == 12345);
        CHECK(cfg.get_double("b_threshold", 0.0) == 0.9);
        CHECK(cfg.get_bool("stop_on_success", false));
        CHECK(cfg.get_int("episodes", 77) == 77); // absent key falls back
        CHECK(!cfg.has("episodes"));
    }
    SECTION("unknown key is rejected with file and line") {
        CHECK_THROWS_WITH(parse_config("target = iqft-1\nepisode = 5\n", "run.cfg", allowed),
                          Catch::Matchers::ContainsSubstring("run.cfg:2: unknown key 'episode'"));
    }
    SECTION("duplicate key, missing '=', empty value") {
        CHECK_THROWS_WITH(parse_config("seed = 1\nseed = 2\n", "x.cfg", allowed),
                          Catch::Matchers::ContainsSubstring("x.cfg:2: duplicate key 'seed'"));
        CHECK_THROWS_WITH(parse_config("just words\n", "x.cfg", allowed),
                          Catch::Matchers::ContainsSubstring("x.cfg:1: expected 'key = value'"));
        CHECK_THROWS_WITH(parse_config("seed =\n", "x.cfg", allowed),
                          Catch::Matchers::ContainsSubstring("x.cfg:1: empty value"));
    }
    SECTION("typed getter failures name the key") {
        const Config cfg = parse_config("seed = banana\n", "y.cfg", allowed);
        CHECK_THROWS_WITH(cfg.get_u64("seed", 0),
                          Catch::Matchers::ContainsSubstring("key 'seed'"));
        const Config cfg2 = parse_config("b_threshold = 0.9x\n", "y.cfg", allowed);
        CHECK_THROWS_WITH(cfg2.get_double("b_threshold", 0.0),
                          Catch::Matchers::ContainsSubstring("expected a number"));
        const Config cfg3 = parse_config("stop_on_success = maybe\n", "y.cfg", allowed);
        CHECK_THROWS_WITH(cfg3.get_bool("stop_on_success", false),
                          Catch::Matchers::ContainsSubstring("boolean"));
    }
}

TEST_CASE("io: example pack round-trips bit-exactly") {
    const ActionSpace space = action_space(2);
    ExamplePack pack;
    pack.actions = space.size();
    pack.encoded_len = 8;
    Rng rng(4);
    for (int k = 0; k < 17; ++k) {
        TrainingExample ex;
        for (int i = 0; i < pack.encoded_len; ++i)
            ex.state.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(pack.actions) + 1)));
        double sum = 0.0;
        for (int a = 0; a < pack.actions; ++a) {
            ex.pi.push_back(rng.uniform());
            sum += ex.pi.back();
        }
        for (double& p : ex.pi) p /= sum;
        ex.z = (k % 2 == 0) ? 1.0 : -1.0;
        pack.examples.push_back(std::move(ex));
    }

    const std::string blob = serialize_example_pack(pack);
    const ExamplePack back = parse_example_pack(blob);
    CHECK(back.actions == pack.actions);
    CHECK(back.encoded_len == pack.encoded_len);
    REQUIRE(back.examples.size() == pack.examples.size());
    for (std::size_t k = 0; k < pack.examples.size(); ++k) {
        CHECK(back.examples[k].state == pack.examples[k].state);
        CHECK(back.examples[k].pi == pack.examples[k].pi); // bitwise doubles
        CHECK(back.examples[k].z == pack.examples[k].z);
    }

    SECTION("file round-trip") {
        const auto path = temp_file("qdist_io_pack.bin");
        save_example_pack(path.string(), pack);
        const ExamplePack loaded = load_example_pack(path.string());
        CHECK(loaded.examples.size() == pack.examples.size());
        std::filesystem::remove(path);
    }
    SECTION("corruption is detected") {
        CHECK_THROWS_WITH(parse_example_pack(blob.substr(0, blob.size() - 3)),
                          Catch::Matchers::ContainsSubstring("truncated"));
        CHECK_THROWS_WITH(parse_example_pack(blob + "xx"),
                          Catch::Matchers::ContainsSubstring("trailing"));
        std::string bad = blob;
        bad.replace(bad.find("qdist-pack-v1"), 13, "qdist-pack-v9");
        CHECK_THROWS_WITH(parse_example_pack(bad),
                          Catch::Matchers::ContainsSubstring("unrecognized format"));
        CHECK_THROWS_WITH(parse_example_pack("no newline"),
                          Catch::Matchers::ContainsSubstring("missing header"));
    }
    SECTION("shape mismatch refuses to serialize") {
        ExamplePack wrong = pack;
        wrong.examples[0].pi.pop_back();
        CHECK_THROWS_AS(serialize_example_pack(wrong), std::invalid_argument);
    }
}
