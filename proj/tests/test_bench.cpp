#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "glv/bench.hpp"
#include "glv/errors.hpp"

using namespace glv;
using bench::Config;

namespace {

const poseidon::Constants& reference_constants() {
    static poseidon::Constants c =
        poseidon::load_constants(std::string(GLV_DATA_DIR) + "/poseidon_constants.json");
    return c;
}

Config small_config(const std::string& target, const std::string& backend) {
    Config cfg;
    cfg.target = target;
    cfg.backend = backend;
    cfg.repetitions = 3;
    cfg.warmup = 0;
    cfg.tree_log2_leaves = 4;
    return cfg;
}

} // namespace

TEST_CASE("validate: accepts every documented target/backend pair") {
    for (const char* target : {"add", "sub", "reduce_128_64", "square_128", "mult_128",
                               "poseidon", "merkle"}) {
        for (const char* backend : {"scalar", "W2", "W4", "W8", "counting", "counting:W4",
                                    "counting:W8"}) {
            Config cfg = small_config(target, backend);
            CHECK_NOTHROW(bench::validate(cfg));
        }
    }
    for (const char* target :
         {"mult_72", "spmv_4x12", "spmv_4x12_8", "mmult_4x12", "mmult_4x12_8"}) {
        CHECK_NOTHROW(bench::validate(small_config(target, "scalar")));
    }
}

TEST_CASE("validate: rejects bad configs") {
    CHECK_THROWS_AS(bench::validate(small_config("frobnicate", "scalar")), DomainError);
    CHECK_THROWS_AS(bench::validate(small_config("add", "W16")), DomainError);
    CHECK_THROWS_AS(bench::validate(small_config("mult_72", "W4")), DomainError);
    CHECK_THROWS_AS(bench::validate(small_config("spmv_4x12", "W2")), DomainError);

    Config cfg = small_config("add", "scalar");
    cfg.repetitions = 2;
    CHECK_THROWS_AS(bench::validate(cfg), DomainError);
    cfg = small_config("merkle", "scalar");
    cfg.tree_log2_leaves = 25;
    CHECK_THROWS_AS(bench::validate(cfg), DomainError);
    cfg = small_config("add", "scalar");
    cfg.output = "xml";
    CHECK_THROWS_AS(bench::validate(cfg), DomainError);
}

TEST_CASE("run_bench: timing invariants and stable functional digest") {
    for (const char* target : {"add", "mult_128", "poseidon", "merkle"}) {
        Config cfg = small_config(target, "scalar");
        bench::Report report = bench::run_bench(cfg, reference_constants());
        REQUIRE(report.records.size() == 1);
        const auto& rec = report.records[0];
        CHECK(rec.min_seconds <= rec.median_seconds);
        CHECK(rec.median_seconds <= rec.max_seconds);
        CHECK(rec.min_seconds > 0);
        CHECK(rec.throughput > 0);
        CHECK(!rec.functional_digest.empty());

        // Same seed, same work: the functional fingerprint must not move.
        bench::Report again = bench::run_bench(cfg, reference_constants());
        CHECK(again.records[0].functional_digest == rec.functional_digest);
    }
}

TEST_CASE("run_bench: vector backends agree with scalar on the fingerprint") {
    Config scalar = small_config("merkle", "scalar");
    std::string expected =
        bench::run_bench(scalar, reference_constants()).records[0].functional_digest;
    for (const char* backend : {"W2", "W4", "W8"}) {
        Config cfg = small_config("merkle", backend);
        CHECK(bench::run_bench(cfg, reference_constants()).records[0].functional_digest ==
              expected);
    }
}

TEST_CASE("run_bench: counting merkle builds shrink with lane width") {
    uint64_t last = UINT64_MAX;
    for (const char* backend : {"counting:W2", "counting:W4", "counting:W8"}) {
        Config cfg = small_config("merkle", backend);
        bench::Report report = bench::run_bench(cfg, reference_constants());
        REQUIRE(report.records[0].counters.has_value());
        uint64_t total = report.records[0].counters->total();
        CHECK(total > 0);
        CHECK(total < last);
        last = total;
    }
}

TEST_CASE("write_report: JSON re-emission is byte-identical") {
    Config cfg = small_config("add", "counting");
    bench::Report report = bench::run_bench(cfg, reference_constants());

    std::ostringstream first;
    bench::write_report(report, "json", first);
    nlohmann::json parsed = nlohmann::json::parse(first.str());
    CHECK(parsed["records"][0]["target"] == "add");
    CHECK(parsed["records"][0].contains("counters"));

    std::ostringstream second;
    bench::write_report(report, "json", second);
    CHECK(first.str() == second.str());
}

TEST_CASE("write_report: CSV shape") {
    bench::Report empty;
    std::ostringstream header_only;
    bench::write_report(empty, "csv", header_only);
    CHECK(header_only.str() == std::string(bench::kCsvHeader) + "\n");

    Config cfg = small_config("sub", "W4");
    bench::Report report = bench::run_bench(cfg, reference_constants());
    std::ostringstream out;
    bench::write_report(report, "csv", out);
    std::istringstream lines(out.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == bench::kCsvHeader);
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind("sub,W4,", 0) == 0);
    CHECK(!std::getline(lines, line));
}

TEST_CASE("counters_to_json: every op class appears") {
    vec::OpCounters counters;
    counters.vadd = 3;
    counters.vmul_lo = 7;
    nlohmann::json j = nlohmann::json::parse(bench::counters_to_json(counters));
    CHECK(j["vadd"] == 3);
    CHECK(j["vmul_lo"] == 7);
    CHECK(j["vpermute"] == 0);
    CHECK(j.size() == 11);
}
