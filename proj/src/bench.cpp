#include "glv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "glv/errors.hpp"
#include "glv/merkle.hpp"
#include "glv/rng.hpp"

namespace glv::bench {

namespace {

using nlohmann::json;

const std::vector<std::string> kFieldTargets = {
    "add",       "sub",         "reduce_128_64", "square_128",  "mult_128",
    "mult_72",   "spmv_4x12",   "spmv_4x12_8",   "mmult_4x12",  "mmult_4x12_8"};

const std::vector<std::string> kScalarOnlyTargets = {
    "mult_72", "spmv_4x12", "spmv_4x12_8", "mmult_4x12", "mmult_4x12_8"};

struct BackendSpec {
    bool scalar = true;
    std::size_t width = 0;
    bool counting = false;
};

BackendSpec parse_backend(const std::string& name) {
    if (name == "scalar") return {true, 0, false};
    if (name == "W2") return {false, 2, false};
    if (name == "W4") return {false, 4, false};
    if (name == "W8") return {false, 8, false};
    if (name == "counting" || name == "counting:W2") return {false, 2, true};
    if (name == "counting:W4") return {false, 4, true};
    if (name == "counting:W8") return {false, 8, true};
    throw DomainError("bench: unknown backend '" + name + "'");
}

bool is_known_target(const std::string& t) {
    if (t == "poseidon" || t == "merkle") return true;
    return std::find(kFieldTargets.begin(), kFieldTargets.end(), t) != kFieldTargets.end();
}

std::string fold_to_hex(uint64_t fold) {
    std::ostringstream os;
    os << std::hex << fold;
    return os.str();
}

// A prepared benchmark case: run() executes one repetition and returns a
// fingerprint of the functional output.
struct Kernel {
    std::function<uint64_t()> run;
    double ops_per_run = 0;
    std::function<std::optional<vec::OpCounters>()> collect_counters;
};

constexpr std::size_t kFieldOpsPerRun = 1 << 14;
constexpr std::size_t kPoseidonPermutesPerRun = 256;

std::vector<Element> random_elements(SplitMix64& rng, std::size_t n) {
    std::vector<Element> v(n);
    for (auto& e : v) {
        e = rng.next_element();
    }
    return v;
}

poseidon::Rows4x12 random_rows(SplitMix64& rng, bool eight_bit, bool sparse) {
    poseidon::Rows4x12 rows;
    for (auto& row : rows) {
        for (auto& e : row) {
            if (sparse && (rng.next() & 1)) {
                e = Element(0);
            } else if (eight_bit) {
                e = Element(rng.next() & 0xFF);
            } else {
                e = rng.next_element();
            }
        }
    }
    return rows;
}

Kernel make_scalar_field_kernel(const Config& config) {
    SplitMix64 rng(config.seed);
    auto a = std::make_shared<std::vector<Element>>(random_elements(rng, kFieldOpsPerRun));
    auto b = std::make_shared<std::vector<Element>>(random_elements(rng, kFieldOpsPerRun));

    Kernel k;
    k.ops_per_run = kFieldOpsPerRun;
    k.collect_counters = [] { return std::nullopt; };
    const std::string& t = config.target;

    if (t == "add" || t == "sub" || t == "square_128" || t == "mult_128") {
        k.run = [a, b, t] {
            uint64_t fold = 0;
            for (std::size_t i = 0; i < kFieldOpsPerRun; ++i) {
                Element r;
                if (t == "add") r = add((*a)[i], (*b)[i]);
                else if (t == "sub") r = sub((*a)[i], (*b)[i]);
                else if (t == "square_128") r = square((*a)[i]);
                else r = mul((*a)[i], (*b)[i]);
                fold ^= r.value();
            }
            return fold;
        };
    } else if (t == "reduce_128_64") {
        SplitMix64 raw(config.seed ^ 0x1234567);
        auto wide = std::make_shared<std::vector<WideProduct>>();
        wide->reserve(kFieldOpsPerRun);
        for (std::size_t i = 0; i < kFieldOpsPerRun; ++i) {
            wide->push_back(WideProduct{raw.next(), raw.next()});
        }
        k.run = [wide] {
            uint64_t fold = 0;
            for (const WideProduct& w : *wide) {
                fold ^= reduce_128(w).value();
            }
            return fold;
        };
    } else if (t == "mult_72") {
        SplitMix64 raw(config.seed ^ 0x89ABCDEF);
        auto small = std::make_shared<std::vector<uint8_t>>(kFieldOpsPerRun);
        for (auto& s : *small) {
            s = static_cast<uint8_t>(raw.next());
        }
        k.run = [a, small] {
            uint64_t fold = 0;
            for (std::size_t i = 0; i < kFieldOpsPerRun; ++i) {
                fold ^= mult_72((*a)[i], (*small)[i]).value();
            }
            return fold;
        };
    } else {
        bool eight_bit = t == "spmv_4x12_8" || t == "mmult_4x12_8";
        bool sparse = t == "spmv_4x12" || t == "spmv_4x12_8";
        auto rows = std::make_shared<poseidon::Rows4x12>(random_rows(rng, eight_bit, sparse));
        std::size_t nstates = kFieldOpsPerRun / poseidon::kStateWidth;
        auto states = std::make_shared<std::vector<poseidon::State>>(nstates);
        for (auto& s : *states) {
            for (auto& e : s) {
                e = rng.next_element();
            }
        }
        k.ops_per_run = static_cast<double>(nstates);
        k.run = [states, rows, sparse, eight_bit] {
            uint64_t fold = 0;
            for (const auto& s : *states) {
                std::array<Element, 4> r;
                if (sparse && eight_bit) r = poseidon::spmv_4x12_8(s, *rows);
                else if (sparse) r = poseidon::spmv_4x12(s, *rows);
                else if (eight_bit) r = poseidon::mmult_4x12_8(s, *rows);
                else r = poseidon::mmult_4x12(s, *rows);
                for (Element e : r) {
                    fold ^= e.value();
                }
            }
            return fold;
        };
    }
    return k;
}

Kernel make_vector_field_kernel(const Config& config, const BackendSpec& spec) {
    SplitMix64 rng(config.seed);
    auto backend = std::make_shared<vec::Backend>(spec.width, spec.counting);
    std::size_t w = spec.width;
    std::size_t nbatches = kFieldOpsPerRun / w;

    auto load_batches = [&](std::size_t count) {
        auto out = std::make_shared<std::vector<vec::Batch>>();
        out->reserve(count);
        std::vector<uint64_t> words(w);
        for (std::size_t i = 0; i < count; ++i) {
            for (auto& x : words) {
                x = rng.next_element().value();
            }
            out->push_back(backend->load(words));
        }
        return out;
    };

    auto a = load_batches(nbatches);
    auto b = load_batches(nbatches);

    Kernel k;
    k.ops_per_run = kFieldOpsPerRun;
    k.collect_counters = [backend, spec]() -> std::optional<vec::OpCounters> {
        if (spec.counting) return backend->counters();
        return std::nullopt;
    };

    const std::string& t = config.target;
    std::size_t width = w;
    if (t == "add" || t == "sub") {
        k.run = [a, b, backend, t, width] {
            uint64_t fold = 0;
            for (std::size_t i = 0; i < a->size(); ++i) {
                vec::Batch r = t == "add" ? backend->vadd((*a)[i], (*b)[i])
                                          : backend->vsub((*a)[i], (*b)[i]);
                for (std::size_t l = 0; l < width; ++l) {
                    fold ^= r[l];
                }
            }
            return fold;
        };
    } else if (t == "reduce_128_64") {
        SplitMix64 raw(config.seed ^ 0x1234567);
        auto hi = std::make_shared<std::vector<vec::Batch>>();
        auto lo = std::make_shared<std::vector<vec::Batch>>();
        std::vector<uint64_t> words(w);
        for (std::size_t i = 0; i < nbatches; ++i) {
            for (auto& x : words) x = raw.next();
            hi->push_back(backend->load(words));
            for (auto& x : words) x = raw.next();
            lo->push_back(backend->load(words));
        }
        k.run = [hi, lo, backend, width] {
            uint64_t fold = 0;
            for (std::size_t i = 0; i < hi->size(); ++i) {
                vec::Batch r = backend->vreduce_128((*hi)[i], (*lo)[i]);
                for (std::size_t l = 0; l < width; ++l) {
                    fold ^= r[l];
                }
            }
            return fold;
        };
    } else if (t == "square_128" || t == "mult_128") {
        bool square_op = t == "square_128";
        k.run = [a, b, backend, square_op, width] {
            uint64_t fold = 0;
            for (std::size_t i = 0; i < a->size(); ++i) {
                vec::Batch hi, lo;
                const vec::Batch& rhs = square_op ? (*a)[i] : (*b)[i];
                backend->vmul_wide((*a)[i], rhs, vec::MulMode::direct, hi, lo);
                vec::Batch r = backend->vreduce_128(hi, lo);
                for (std::size_t l = 0; l < width; ++l) {
                    fold ^= r[l];
                }
            }
            return fold;
        };
    } else {
        throw DomainError("bench: target '" + t + "' supports the scalar backend only");
    }
    return k;
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

} // namespace

void validate(const Config& config) {
    if (!is_known_target(config.target)) {
        throw DomainError("bench: unknown target '" + config.target + "'");
    }
    BackendSpec spec = parse_backend(config.backend);
    if (!spec.scalar &&
        std::find(kScalarOnlyTargets.begin(), kScalarOnlyTargets.end(), config.target) !=
            kScalarOnlyTargets.end()) {
        throw DomainError("bench: target '" + config.target + "' supports the scalar backend only");
    }
    if (config.repetitions < 3) {
        throw DomainError("bench: repetitions must be >= 3");
    }
    if (config.tree_log2_leaves > 24) {
        throw DomainError("bench: tree_log2_leaves > 24 exceeds the memory guard");
    }
    if (config.threads < 1) {
        throw DomainError("bench: threads must be >= 1");
    }
    if (config.output != "json" && config.output != "csv") {
        throw DomainError("bench: output must be json or csv");
    }
}

Environment capture_environment() {
    Environment env;
    env.hardware_threads = std::thread::hardware_concurrency();
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = line.substr(0, colon);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ') value.erase(0, 1);
        if (env.cpu_model.empty() && key == "model name") {
            env.cpu_model = value;
        } else if (env.reported_mhz == 0 && key == "cpu MHz") {
            env.reported_mhz = std::strtod(value.c_str(), nullptr);
        }
    }
    return env;
}

Report run_bench(const Config& config, const poseidon::Constants& constants) {
    validate(config);
    BackendSpec spec = parse_backend(config.backend);

    Kernel kernel;
    if (config.target == "merkle") {
        SplitMix64 rng(config.seed);
        std::size_t n = std::size_t{1} << config.tree_log2_leaves;
        auto leaves =
            std::make_shared<std::vector<Element>>(random_elements(rng, n * merkle::kLeafWidth));
        auto counters = std::make_shared<std::optional<vec::OpCounters>>();
        Config cfg = config;
        kernel.ops_per_run = static_cast<double>(2 * n - 1);
        kernel.run = [leaves, &constants, cfg, spec, counters] {
            merkle::BuildOptions opts;
            opts.threads = cfg.threads;
            if (!spec.scalar) {
                opts.lane_width = spec.width;
            }
            vec::OpCounters c;
            if (spec.counting) {
                opts.counting = true;
                opts.counters_out = &c;
            }
            merkle::Tree tree = merkle::Tree::build(*leaves, constants, opts);
            if (spec.counting) {
                *counters = c;
            }
            uint64_t fold = 0;
            for (Element e : tree.root()) {
                fold ^= e.value();
            }
            return fold;
        };
        kernel.collect_counters = [counters] { return *counters; };
    } else if (config.target == "poseidon") {
        SplitMix64 rng(config.seed);
        auto states = std::make_shared<std::vector<poseidon::State>>(kPoseidonPermutesPerRun);
        for (auto& s : *states) {
            for (auto& e : s) {
                e = rng.next_element();
            }
        }
        kernel.ops_per_run = kPoseidonPermutesPerRun;
        if (spec.scalar) {
            kernel.collect_counters = [] { return std::nullopt; };
            kernel.run = [states, &constants] {
                uint64_t fold = 0;
                for (const auto& s : *states) {
                    poseidon::State out = poseidon::permute(s, constants);
                    for (Element e : out) {
                        fold ^= e.value();
                    }
                }
                return fold;
            };
        } else {
            auto backend = std::make_shared<vec::Backend>(spec.width, spec.counting);
            kernel.collect_counters = [backend, spec]() -> std::optional<vec::OpCounters> {
                if (spec.counting) return backend->counters();
                return std::nullopt;
            };
            kernel.run = [states, &constants, backend] {
                uint64_t fold = 0;
                for (const auto& s : *states) {
                    poseidon::State out = poseidon::permute(*backend, s, constants);
                    for (Element e : out) {
                        fold ^= e.value();
                    }
                }
                return fold;
            };
        }
    } else if (spec.scalar) {
        kernel = make_scalar_field_kernel(config);
    } else {
        kernel = make_vector_field_kernel(config, spec);
    }

    for (unsigned i = 0; i < config.warmup; ++i) {
        kernel.run();
    }

    std::vector<double> times;
    uint64_t fold = 0;
    bool first = true;
    for (unsigned i = 0; i < config.repetitions; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        uint64_t f = kernel.run();
        auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
        if (first) {
            fold = f;
            first = false;
        } else if (f != fold) {
            throw std::logic_error("bench: functional output changed between repetitions");
        }
    }

    CaseRecord rec;
    rec.config = config;
    rec.median_seconds = median(times);
    rec.min_seconds = *std::min_element(times.begin(), times.end());
    rec.max_seconds = *std::max_element(times.begin(), times.end());
    rec.throughput = rec.median_seconds > 0 ? kernel.ops_per_run / rec.median_seconds : 0;
    rec.functional_digest = fold_to_hex(fold);
    rec.counters = kernel.collect_counters ? kernel.collect_counters() : std::nullopt;

    Report report;
    report.environment = capture_environment();
    report.records.push_back(std::move(rec));
    return report;
}

namespace {

json counters_json_obj(const vec::OpCounters& c) {
    return json{{"vadd", c.vadd},         {"vsub", c.vsub},       {"vmul_lo", c.vmul_lo},
                {"vmul_hi", c.vmul_hi},   {"vshift", c.vshift},   {"vand", c.vand},
                {"vcompare", c.vcompare}, {"vselect", c.vselect}, {"vload", c.vload},
                {"vstore", c.vstore},     {"vpermute", c.vpermute}};
}

json record_json(const CaseRecord& r) {
    json j{{"target", r.config.target},
           {"backend", r.config.backend},
           {"threads", r.config.threads},
           {"tree_log2_leaves", r.config.tree_log2_leaves},
           {"repetitions", r.config.repetitions},
           {"warmup", r.config.warmup},
           {"seed", r.config.seed},
           {"median_seconds", r.median_seconds},
           {"min_seconds", r.min_seconds},
           {"max_seconds", r.max_seconds},
           {"throughput", r.throughput},
           {"functional_digest", r.functional_digest}};
    if (r.counters) {
        j["counters"] = counters_json_obj(*r.counters);
    }
    return j;
}

} // namespace

void write_report(const Report& report, const std::string& format, std::ostream& out) {
    if (format == "json") {
        json j{{"environment",
                json{{"cpu_model", report.environment.cpu_model},
                     {"hardware_threads", report.environment.hardware_threads},
                     {"reported_mhz", report.environment.reported_mhz}}},
               {"records", json::array()}};
        for (const CaseRecord& r : report.records) {
            j["records"].push_back(record_json(r));
        }
        out << j.dump(2) << "\n";
    } else if (format == "csv") {
        out << kCsvHeader << "\n";
        for (const CaseRecord& r : report.records) {
            out << r.config.target << ',' << r.config.backend << ',' << r.config.threads << ','
                << r.config.tree_log2_leaves << ',' << r.config.repetitions << ','
                << r.config.warmup << ',' << r.config.seed << ',' << r.median_seconds << ','
                << r.min_seconds << ',' << r.max_seconds << ',' << r.throughput << ','
                << r.functional_digest << "\n";
        }
    } else {
        throw DomainError("write_report: format must be json or csv");
    }
}

std::string counters_to_json(const vec::OpCounters& counters) {
    return counters_json_obj(counters).dump();
}

} // namespace glv::bench
