#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glv/bench.hpp"
#include "glv/errors.hpp"
#include "glv/merkle.hpp"
#include "glv/poseidon.hpp"
#include "glv/whatif.hpp"

#ifndef GLV_DEFAULT_CONSTANTS
#define GLV_DEFAULT_CONSTANTS "data/poseidon_constants.json"
#endif

namespace {

using nlohmann::json;

std::vector<glv::Element> read_leaves(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw glv::ParseError("cannot open leaf file: " + path);
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0) {
        throw glv::ParseError("leaf file size must be a multiple of 8 bytes");
    }
    std::vector<glv::Element> elements;
    elements.reserve(bytes.size() / 8);
    for (std::size_t i = 0; i < bytes.size(); i += 8) {
        uint64_t v = glv::load_le_u64(bytes.data() + i);
        if (v >= glv::kPrime) {
            throw glv::ParseError("leaf file contains a non-canonical element at byte offset " +
                                  std::to_string(i));
        }
        elements.push_back(glv::Element(v));
    }
    return elements;
}

glv::merkle::BuildOptions build_options(const std::string& backend, unsigned threads) {
    glv::merkle::BuildOptions opts;
    opts.threads = threads;
    if (backend == "scalar") {
        // scalar path
    } else if (backend == "W2") {
        opts.lane_width = 2;
    } else if (backend == "W4") {
        opts.lane_width = 4;
    } else if (backend == "W8") {
        opts.lane_width = 8;
    } else {
        throw glv::DomainError("backend must be scalar, W2, W4, or W8");
    }
    return opts;
}

void print_root(const glv::poseidon::Digest& root) {
    std::cout << "root_elements";
    for (glv::Element e : root) {
        std::cout << " " << e.value();
    }
    std::cout << "\n";
    std::cout << "root_hex " << glv::merkle::digest_hex(root) << "\n";
}

json proof_to_json(const glv::merkle::Proof& proof) {
    json path = json::array();
    for (const auto& node : proof.path) {
        json sibling = json::array();
        for (glv::Element e : node.sibling) {
            sibling.push_back(std::to_string(e.value()));
        }
        path.push_back(json{{"sibling", sibling}, {"sibling_is_left", node.sibling_is_left}});
    }
    return json{{"leaf_index", proof.leaf_index}, {"path", path}};
}

glv::merkle::Proof proof_from_json(const json& j) {
    glv::merkle::Proof proof;
    proof.leaf_index = j.at("leaf_index").get<std::size_t>();
    for (const auto& jn : j.at("path")) {
        glv::merkle::ProofNode node;
        const auto& sibling = jn.at("sibling");
        if (!sibling.is_array() || sibling.size() != 4) {
            throw glv::ParseError("proof: sibling must have 4 elements");
        }
        for (std::size_t i = 0; i < 4; ++i) {
            uint64_t v = std::stoull(sibling[i].get<std::string>());
            if (v >= glv::kPrime) {
                throw glv::ParseError("proof: non-canonical sibling element");
            }
            node.sibling[i] = glv::Element(v);
        }
        node.sibling_is_left = jn.at("sibling_is_left").get<bool>();
        proof.path.push_back(node);
    }
    return proof;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Goldilocks field, Poseidon hashing, Merkle trees, and scaling what-ifs"};
    app.require_subcommand(1);

    std::string constants_path = GLV_DEFAULT_CONSTANTS;
    app.add_option("--constants", constants_path, "Poseidon constants JSON file")
        ->capture_default_str();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Time one benchmark case");
    glv::bench::Config cfg;
    bench_cmd->add_option("--target", cfg.target, "Function or workload to time")->required();
    bench_cmd->add_option("--backend", cfg.backend, "scalar | W2 | W4 | W8 | counting[:Wn]")
        ->capture_default_str();
    bench_cmd->add_option("--threads", cfg.threads)->capture_default_str();
    bench_cmd->add_option("--tree-log2-leaves", cfg.tree_log2_leaves)->capture_default_str();
    bench_cmd->add_option("--repetitions", cfg.repetitions)->capture_default_str();
    bench_cmd->add_option("--warmup", cfg.warmup)->capture_default_str();
    bench_cmd->add_option("--output", cfg.output, "json | csv")->capture_default_str();
    bench_cmd->add_option("--seed", cfg.seed)->capture_default_str();
    std::string out_path;
    bench_cmd->add_option("--out", out_path, "write the report here instead of stdout");

    // merkle-root
    auto* root_cmd = app.add_subcommand("merkle-root", "Build a tree and print its root");
    std::string leaves_path;
    std::string backend = "scalar";
    unsigned threads = 1;
    root_cmd->add_option("--leaves", leaves_path, "raw little-endian u64 words, 8 per leaf")
        ->required();
    root_cmd->add_option("--backend", backend)->capture_default_str();
    root_cmd->add_option("--threads", threads)->capture_default_str();

    // prove
    auto* prove_cmd = app.add_subcommand("prove", "Emit an authentication path as JSON");
    std::size_t leaf_index = 0;
    std::string proof_out;
    prove_cmd->add_option("--leaves", leaves_path)->required();
    prove_cmd->add_option("--index", leaf_index)->required();
    prove_cmd->add_option("--out", proof_out, "proof JSON path (default stdout)");
    prove_cmd->add_option("--backend", backend)->capture_default_str();
    prove_cmd->add_option("--threads", threads)->capture_default_str();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Check a proof against a root");
    std::string root_hex;
    std::string leaf_path;
    std::string proof_path;
    verify_cmd->add_option("--root", root_hex, "64 hex chars")->required();
    verify_cmd->add_option("--leaf", leaf_path, "raw 64-byte leaf file")->required();
    verify_cmd->add_option("--proof", proof_path, "proof JSON file")->required();

    // whatif
    auto* whatif_cmd = app.add_subcommand("whatif", "Frequency/width/power/cost scaling model");
    double baseline = 1.0;
    double m = 1.0;
    std::vector<int> widths;
    double ratio_override = 0.0;
    glv::whatif::PowerCostModel model;
    std::string whatif_format = "json";
    whatif_cmd->add_option("--baseline", baseline, "normalized baseline execution time")
        ->capture_default_str();
    whatif_cmd->add_option("-m,--freq-multiplier", m)->capture_default_str();
    whatif_cmd->add_option("--width", widths, "register widths (default: 128 256 512)");
    whatif_cmd->add_option("--ratio", ratio_override,
                           "override the instruction ratio (e.g. from the counting backend)");
    whatif_cmd->add_option("--d,--dynamic-fraction", model.dynamic_fraction)
        ->capture_default_str();
    whatif_cmd->add_option("--mu,--dynamic-multiplier", model.dynamic_multiplier)
        ->capture_default_str();
    whatif_cmd->add_option("--s,--cpu-share", model.cpu_share)->capture_default_str();
    whatif_cmd->add_option("--gamma,--energy-cost-share", model.energy_cost_share)
        ->capture_default_str();
    whatif_cmd->add_option("--format", whatif_format, "json | csv")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench_cmd->parsed()) {
            glv::poseidon::Constants constants = glv::poseidon::load_constants(constants_path);
            glv::bench::Report report = glv::bench::run_bench(cfg, constants);
            if (out_path.empty()) {
                glv::bench::write_report(report, cfg.output, std::cout);
            } else {
                std::ofstream out(out_path);
                glv::bench::write_report(report, cfg.output, out);
            }
            if (!report.records.empty() && report.records.front().counters) {
                std::cout << "counters "
                          << glv::bench::counters_to_json(*report.records.front().counters)
                          << "\n";
            }
        } else if (root_cmd->parsed() || prove_cmd->parsed()) {
            glv::poseidon::Constants constants = glv::poseidon::load_constants(constants_path);
            std::vector<glv::Element> leaves = read_leaves(leaves_path);
            glv::merkle::Tree tree =
                glv::merkle::Tree::build(leaves, constants, build_options(backend, threads));
            if (root_cmd->parsed()) {
                print_root(tree.root());
            } else {
                glv::merkle::Proof proof = tree.prove(leaf_index);
                json j = proof_to_json(proof);
                j["root"] = glv::merkle::digest_hex(tree.root());
                j["constants_id"] = tree.constants_id();
                if (proof_out.empty()) {
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::ofstream out(proof_out);
                    out << j.dump(2) << "\n";
                }
            }
        } else if (verify_cmd->parsed()) {
            glv::poseidon::Constants constants = glv::poseidon::load_constants(constants_path);
            auto root = glv::merkle::digest_from_hex(root_hex);
            if (!root) {
                throw glv::ParseError("invalid root hex string");
            }
            std::vector<glv::Element> leaf = read_leaves(leaf_path);
            std::ifstream pin(proof_path);
            if (!pin) {
                throw glv::ParseError("cannot open proof file: " + proof_path);
            }
            json pj;
            pin >> pj;
            glv::merkle::Proof proof = proof_from_json(pj);
            bool ok = glv::merkle::verify(*root, leaf, proof, constants);
            std::cout << (ok ? "valid" : "invalid") << "\n";
            return ok ? 0 : 1;
        } else if (whatif_cmd->parsed()) {
            if (widths.empty()) {
                widths = {128, 256, 512};
            }
            std::vector<glv::whatif::Scenario> scenarios;
            for (int w : widths) {
                glv::whatif::Scenario s;
                s.freq_multiplier = m;
                s.register_width_bits = w;
                if (ratio_override > 0) {
                    s.instruction_ratio = ratio_override;
                }
                scenarios.push_back(s);
            }
            auto rows = glv::whatif::scenario_report(baseline, scenarios);
            double cpu = glv::whatif::cpu_power_uplift(model);
            double dc = glv::whatif::datacenter_power_uplift(model);
            double cost = glv::whatif::cost_increment(model);
            if (whatif_format == "json") {
                json jrows = json::array();
                for (const auto& r : rows) {
                    jrows.push_back(json{
                        {"freq_multiplier", r.scenario.freq_multiplier},
                        {"register_width_bits", r.scenario.register_width_bits},
                        {"instruction_ratio",
                         r.scenario.instruction_ratio
                             ? *r.scenario.instruction_ratio
                             : glv::whatif::register_width_ratio(r.scenario.register_width_bits)},
                        {"normalized_time", r.normalized_time},
                        {"improvement_pct", r.improvement_pct}});
                }
                json j{{"baseline", baseline},
                       {"scenarios", jrows},
                       {"power",
                        json{{"cpu_power_uplift", cpu},
                             {"datacenter_power_uplift", dc},
                             {"cost_increment_pct",
                              glv::whatif::round_percent(cost * 100.0)}}}};
                std::cout << j.dump(2) << "\n";
            } else if (whatif_format == "csv") {
                std::cout << "freq_multiplier,register_width_bits,instruction_ratio,"
                             "normalized_time,improvement_pct\n";
                for (const auto& r : rows) {
                    double rho = r.scenario.instruction_ratio
                                     ? *r.scenario.instruction_ratio
                                     : glv::whatif::register_width_ratio(
                                           r.scenario.register_width_bits);
                    std::cout << r.scenario.freq_multiplier << ','
                              << r.scenario.register_width_bits << ',' << rho << ','
                              << r.normalized_time << ',' << r.improvement_pct << "\n";
                }
            } else {
                throw glv::DomainError("whatif: format must be json or csv");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    }
    return 0;
}
