#include "glv/poseidon.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "glv/errors.hpp"

namespace glv::poseidon {

namespace {

Element parse_element(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("constants: element is not a decimal string: '" + s + "'");
    }
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno == ERANGE || end != s.c_str() + s.size()) {
        throw ParseError("constants: element out of 64-bit range: '" + s + "'");
    }
    if (v >= kPrime) {
        throw ParseError("constants: non-canonical element: '" + s + "'");
    }
    return Element(v);
}

template <std::size_t N>
std::array<Element, N> parse_row(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != N) {
        throw ParseError(std::string("constants: ") + what + ": expected " +
                         std::to_string(N) + " entries");
    }
    std::array<Element, N> row;
    for (std::size_t i = 0; i < N; ++i) {
        row[i] = parse_element(j[i].get<std::string>());
    }
    return row;
}

} // namespace

Constants load_constants(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("constants: cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("constants: invalid JSON: ") + e.what());
    }

    try {
        if (j.at("half_full_rounds").get<std::size_t>() != kHalfFullRounds ||
            j.at("partial_rounds").get<std::size_t>() != kPartialRounds) {
            throw ParseError("constants: unsupported round parameters");
        }

        Constants c;
        const auto& jc = j.at("C");
        if (!jc.is_array() || jc.size() != kConstantBlocks) {
            throw ParseError("constants: C must have " + std::to_string(kConstantBlocks) +
                             " blocks");
        }
        for (std::size_t b = 0; b < kConstantBlocks; ++b) {
            c.C[b] = parse_row<kStateWidth>(jc[b], "C block");
        }

        const auto& jm = j.at("M");
        if (!jm.is_array() || jm.size() != kStateWidth) {
            throw ParseError("constants: M must have 12 rows");
        }
        for (std::size_t r = 0; r < kStateWidth; ++r) {
            c.M[r] = parse_row<kStateWidth>(jm[r], "M row");
        }

        const auto& js = j.at("S");
        if (!js.is_array() || js.size() != kPartialRounds) {
            throw ParseError("constants: S must have " + std::to_string(kPartialRounds) +
                             " blocks");
        }
        for (std::size_t b = 0; b < kPartialRounds; ++b) {
            c.S[b].v0 = parse_row<kStateWidth>(js[b].at("v0"), "S v0");
            c.S[b].v1 = parse_row<kStateWidth>(js[b].at("v1"), "S v1");
        }

        c.id = path.filename().string();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("constants: schema error: ") + e.what());
    }
}

State sbox_full(const State& state) {
    State out;
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        out[i] = pow7(state[i]);
    }
    return out;
}

State add_round_constants(const State& state, const std::array<Element, kStateWidth>& block) {
    State out;
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        out[i] = add(state[i], block[i]);
    }
    return out;
}

State mds(const State& state,
          const std::array<std::array<Element, kStateWidth>, kStateWidth>& m) {
    State out;
    for (std::size_t j = 0; j < kStateWidth; ++j) {
        Element acc(0);
        for (std::size_t i = 0; i < kStateWidth; ++i) {
            acc = add(acc, mul(state[i], m[i][j]));
        }
        out[j] = acc;
    }
    return out;
}

State mds_partial(const State& state, const SparseBlock& block) {
    Element tmp(0);
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        tmp = add(tmp, mul(state[i], block.v0[i]));
    }
    Element old0 = state[0];
    State out;
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        out[i] = add(state[i], mul(old0, block.v1[i]));
    }
    out[0] = tmp;
    return out;
}

namespace {

Element dot_row(const State& state, const std::array<Element, kStateWidth>& row,
                bool skip_zero, bool eight_bit) {
    Element acc(0);
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        if (skip_zero && row[i].value() == 0) {
            continue;
        }
        Element term = eight_bit ? mult_72(state[i], static_cast<uint8_t>(row[i].value()))
                                 : mul(state[i], row[i]);
        acc = add(acc, term);
    }
    return acc;
}

void require_8bit(const Rows4x12& rows) {
    for (const auto& row : rows) {
        for (Element e : row) {
            if (e.value() >= 256) {
                throw DomainError("4x12_8 kernel: matrix entry >= 256");
            }
        }
    }
}

std::array<Element, 4> dot4(const State& state, const Rows4x12& rows, bool skip_zero,
                            bool eight_bit) {
    std::array<Element, 4> out;
    for (std::size_t r = 0; r < 4; ++r) {
        out[r] = dot_row(state, rows[r], skip_zero, eight_bit);
    }
    return out;
}

} // namespace

std::array<Element, 4> spmv_4x12(const State& state, const Rows4x12& rows) {
    return dot4(state, rows, /*skip_zero=*/true, /*eight_bit=*/false);
}

std::array<Element, 4> mmult_4x12(const State& state, const Rows4x12& rows) {
    return dot4(state, rows, /*skip_zero=*/false, /*eight_bit=*/false);
}

std::array<Element, 4> spmv_4x12_8(const State& state, const Rows4x12& rows) {
    require_8bit(rows);
    return dot4(state, rows, /*skip_zero=*/true, /*eight_bit=*/true);
}

std::array<Element, 4> mmult_4x12_8(const State& state, const Rows4x12& rows) {
    require_8bit(rows);
    return dot4(state, rows, /*skip_zero=*/false, /*eight_bit=*/true);
}

State permute(const State& state, const Constants& constants) {
    State s = add_round_constants(state, constants.C[0]);
    for (std::size_t r = 0; r < kHalfFullRounds; ++r) {
        s = sbox_full(s);
        s = mds(s, constants.M);
        s = add_round_constants(s, constants.C[1 + r]);
    }
    for (std::size_t r = 0; r < kPartialRounds; ++r) {
        s[0] = pow7(s[0]);
        s = mds_partial(s, constants.S[r]);
    }
    for (std::size_t r = 0; r < kHalfFullRounds; ++r) {
        s = sbox_full(s);
        s = mds(s, constants.M);
        s = add_round_constants(s, constants.C[1 + kHalfFullRounds + r]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Vectorized path. The state lives in ceil(12/W) batches with zero-padded
// tail lanes; every step keeps the padding at zero, so the arithmetic is
// exactly the scalar arithmetic lane for lane.

namespace {

using VState = std::vector<vec::Batch>;

std::size_t chunk_count(std::size_t width) {
    return (kStateWidth + width - 1) / width;
}

VState load_vstate(vec::Backend& b, const State& state) {
    std::array<uint64_t, kStateWidth> words;
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        words[i] = state[i].value();
    }
    std::size_t w = b.width();
    VState v;
    for (std::size_t c = 0; c < chunk_count(w); ++c) {
        std::size_t n = std::min(w, kStateWidth - c * w);
        v.push_back(b.load(std::span<const uint64_t>(words.data() + c * w, n)));
    }
    return v;
}

State store_vstate(vec::Backend& b, const VState& v) {
    std::array<uint64_t, kStateWidth> words{};
    std::size_t w = b.width();
    for (std::size_t c = 0; c < v.size(); ++c) {
        std::size_t n = std::min(w, kStateWidth - c * w);
        b.store(v[c], std::span<uint64_t>(words.data() + c * w, n));
    }
    State s;
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        s[i] = Element(words[i]);
    }
    return s;
}

VState load_row_chunks(vec::Backend& b, const std::array<Element, kStateWidth>& row) {
    std::array<uint64_t, kStateWidth> words;
    for (std::size_t i = 0; i < kStateWidth; ++i) {
        words[i] = row[i].value();
    }
    std::size_t w = b.width();
    VState v;
    for (std::size_t c = 0; c < chunk_count(w); ++c) {
        std::size_t n = std::min(w, kStateWidth - c * w);
        v.push_back(b.load(std::span<const uint64_t>(words.data() + c * w, n)));
    }
    return v;
}

vec::Batch vmul_field(vec::Backend& b, const vec::Batch& x, const vec::Batch& y) {
    vec::Batch hi, lo;
    b.vmul_wide(x, y, vec::MulMode::direct, hi, lo);
    return b.vreduce_128(hi, lo);
}

void sbox_vstate(vec::Backend& b, VState& v) {
    for (auto& x : v) {
        vec::Batch x2 = vmul_field(b, x, x);
        vec::Batch x3 = vmul_field(b, x2, x);
        vec::Batch x4 = vmul_field(b, x2, x2);
        x = vmul_field(b, x4, x3);
    }
}

void add_constants_vstate(vec::Backend& b, VState& v,
                          const std::array<Element, kStateWidth>& block) {
    VState cb = load_row_chunks(b, block);
    for (std::size_t c = 0; c < v.size(); ++c) {
        v[c] = b.vadd(v[c], cb[c]);
    }
}

// Column-block decomposition: for each W-column sub-matrix, multiply the state
// chunks lane-wise against the matching column chunk and accumulate, then
// transpose the W per-column partial-sum batches so one vadd chain sums the
// lanes of each column.
VState mds_vstate(vec::Backend& b, const VState& v,
                  const std::array<std::array<Element, kStateWidth>, kStateWidth>& m) {
    std::size_t w = b.width();
    std::size_t nc = chunk_count(w);
    VState out;
    out.reserve(nc);
    for (std::size_t oc = 0; oc < nc; ++oc) {
        std::vector<vec::Batch> per_column(w, vec::Batch(w));
        for (std::size_t j = 0; j < w; ++j) {
            std::size_t col = oc * w + j;
            vec::Batch acc(w);
            for (std::size_t rc = 0; rc < nc; ++rc) {
                std::array<uint64_t, 8> words{};
                std::size_t n = std::min(w, kStateWidth - rc * w);
                for (std::size_t k = 0; k < n; ++k) {
                    words[k] = col < kStateWidth ? m[rc * w + k][col].value() : 0;
                }
                vec::Batch mcol = b.load(std::span<const uint64_t>(words.data(), n));
                acc = b.vadd(acc, vmul_field(b, v[rc], mcol));
            }
            per_column[j] = acc;
        }
        b.transpose_block(per_column);
        vec::Batch sum(w);
        for (std::size_t k = 0; k < w; ++k) {
            sum = b.vadd(sum, per_column[k]);
        }
        out.push_back(sum);
    }
    return out;
}

void mds_partial_vstate(vec::Backend& b, VState& v, const SparseBlock& block) {
    std::size_t w = b.width();
    std::size_t nc = chunk_count(w);

    // tmp = dot(state, v0): lane-wise products, then a scalar lane sum.
    VState v0c = load_row_chunks(b, block.v0);
    vec::Batch acc(w);
    for (std::size_t c = 0; c < nc; ++c) {
        acc = b.vadd(acc, vmul_field(b, v[c], v0c[c]));
    }
    std::array<uint64_t, 8> acc_words{};
    b.store(acc, std::span<uint64_t>(acc_words.data(), w));
    Element tmp(0);
    for (std::size_t k = 0; k < w; ++k) {
        tmp = add(tmp, Element(acc_words[k]));
    }

    // state += old_state[0] * v1, element-wise; then overwrite element 0.
    std::array<uint64_t, 8> head{};
    b.store(v[0], std::span<uint64_t>(head.data(), w));
    std::array<uint64_t, 8> bc_words{};
    bc_words.fill(head[0]);
    vec::Batch old0 = b.load(std::span<const uint64_t>(bc_words.data(), w));

    VState v1c = load_row_chunks(b, block.v1);
    for (std::size_t c = 0; c < nc; ++c) {
        v[c] = b.vadd(v[c], vmul_field(b, old0, v1c[c]));
    }

    b.store(v[0], std::span<uint64_t>(head.data(), w));
    head[0] = tmp.value();
    v[0] = b.load(std::span<const uint64_t>(head.data(), w));
}

void pow7_lane0(vec::Backend& b, VState& v) {
    std::size_t w = b.width();
    std::array<uint64_t, 8> head{};
    b.store(v[0], std::span<uint64_t>(head.data(), w));
    head[0] = pow7(Element(head[0])).value();
    v[0] = b.load(std::span<const uint64_t>(head.data(), w));
}

} // namespace

State permute(vec::Backend& backend, const State& state, const Constants& constants) {
    VState v = load_vstate(backend, state);
    add_constants_vstate(backend, v, constants.C[0]);
    for (std::size_t r = 0; r < kHalfFullRounds; ++r) {
        sbox_vstate(backend, v);
        v = mds_vstate(backend, v, constants.M);
        add_constants_vstate(backend, v, constants.C[1 + r]);
    }
    for (std::size_t r = 0; r < kPartialRounds; ++r) {
        pow7_lane0(backend, v);
        mds_partial_vstate(backend, v, constants.S[r]);
    }
    for (std::size_t r = 0; r < kHalfFullRounds; ++r) {
        sbox_vstate(backend, v);
        v = mds_vstate(backend, v, constants.M);
        add_constants_vstate(backend, v, constants.C[1 + kHalfFullRounds + r]);
    }
    return store_vstate(backend, v);
}

namespace {

State sponge_state(std::span<const Element> input8, const Digest& capacity_in) {
    if (input8.size() != kRate) {
        throw DomainError("hash_block: input must have exactly 8 elements");
    }
    State s;
    for (std::size_t i = 0; i < kRate; ++i) {
        s[i] = input8[i];
    }
    for (std::size_t i = 0; i < kCapacity; ++i) {
        s[kRate + i] = capacity_in[i];
    }
    return s;
}

Digest digest_of(const State& s) {
    return Digest{s[0], s[1], s[2], s[3]};
}

} // namespace

Digest hash_block(std::span<const Element> input8, const Digest& capacity_in,
                  const Constants& constants) {
    return digest_of(permute(sponge_state(input8, capacity_in), constants));
}

Digest hash_block(vec::Backend& backend, std::span<const Element> input8,
                  const Digest& capacity_in, const Constants& constants) {
    return digest_of(permute(backend, sponge_state(input8, capacity_in), constants));
}

Digest linear_hash(std::span<const Element> input, const Constants& constants) {
    std::size_t chunks = input.empty() ? 1 : (input.size() + kRate - 1) / kRate;
    Digest capacity{};
    State out{};
    for (std::size_t c = 0; c < chunks; ++c) {
        std::array<Element, kRate> block{};
        for (std::size_t i = 0; i < kRate; ++i) {
            std::size_t idx = c * kRate + i;
            block[i] = idx < input.size() ? input[idx] : Element(0);
        }
        out = permute(sponge_state(block, capacity), constants);
        capacity = Digest{out[kRate], out[kRate + 1], out[kRate + 2], out[kRate + 3]};
    }
    return digest_of(out);
}

} // namespace glv::poseidon
