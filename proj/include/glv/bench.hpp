#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "glv/poseidon.hpp"
#include "glv/vecbackend.hpp"

namespace glv::bench {

// Targets: the ten basic field functions (add, sub, reduce_128_64,
// square_128, mult_128, mult_72, spmv_4x12, spmv_4x12_8, mmult_4x12,
// mmult_4x12_8), plus "poseidon" and "merkle".
//
// Backends: "scalar", "W2", "W4", "W8", and "counting[:W2|W4|W8]" (plain
// "counting" means counting:W2). The 4x12 kernels and mult_72 are
// scalar-only.
struct Config {
    std::string target;
    std::string backend = "scalar";
    unsigned threads = 1;
    unsigned tree_log2_leaves = 10;
    unsigned repetitions = 5;
    unsigned warmup = 2;
    std::string output = "json"; // json | csv
    uint64_t seed = 0;
};

struct CaseRecord {
    Config config;
    double median_seconds = 0;
    double min_seconds = 0;
    double max_seconds = 0;
    double throughput = 0; // hashes/s for poseidon/merkle, ops/s otherwise
    // Fingerprint of the functional output; identical across repetitions.
    std::string functional_digest;
    std::optional<vec::OpCounters> counters;
};

struct Environment {
    std::string cpu_model;
    unsigned hardware_threads = 0;
    double reported_mhz = 0; // best effort, 0 if unknown
};

struct Report {
    Environment environment;
    std::vector<CaseRecord> records;
};

// Throws DomainError on invalid configs (repetitions < 3,
// tree_log2_leaves > 24, unknown target/backend, unsupported combination).
void validate(const Config& config);

Environment capture_environment();

Report run_bench(const Config& config, const poseidon::Constants& constants);

// format is "json" or "csv". JSON re-emission of parsed output is
// byte-identical; CSV columns are fixed (see kCsvHeader).
void write_report(const Report& report, const std::string& format, std::ostream& out);

inline constexpr const char* kCsvHeader =
    "target,backend,threads,tree_log2_leaves,repetitions,warmup,seed,"
    "median_seconds,min_seconds,max_seconds,throughput,functional_digest";

// {op_class: count} object used by the CLI counter dump.
std::string counters_to_json(const vec::OpCounters& counters);

} // namespace glv::bench
