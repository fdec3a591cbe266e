#include "glv/merkle.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

#include "glv/errors.hpp"

namespace glv::merkle {

namespace {

void accumulate(vec::OpCounters& into, const vec::OpCounters& from) {
    into.vadd += from.vadd;
    into.vsub += from.vsub;
    into.vmul_lo += from.vmul_lo;
    into.vmul_hi += from.vmul_hi;
    into.vshift += from.vshift;
    into.vand += from.vand;
    into.vcompare += from.vcompare;
    into.vselect += from.vselect;
    into.vload += from.vload;
    into.vstore += from.vstore;
    into.vpermute += from.vpermute;
}

// Runs fn(begin, end, backend*) over [0, count) split into contiguous chunks,
// one per thread; levels with fewer nodes than threads use fewer threads.
// Each worker gets its own backend instance; counters merge at the end.
template <typename Fn>
void parallel_chunks(std::size_t count, const BuildOptions& options, const Fn& fn,
                     vec::OpCounters* totals, std::mutex* totals_mutex) {
    unsigned threads = std::max(1u, options.threads);
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

    auto worker = [&](std::size_t begin, std::size_t end) {
        std::optional<vec::Backend> backend;
        if (options.lane_width) {
            backend.emplace(*options.lane_width, options.counting);
        }
        fn(begin, end, backend ? &*backend : nullptr);
        if (backend && options.counting && totals) {
            std::lock_guard lock(*totals_mutex);
            accumulate(*totals, backend->counters());
        }
    };

    if (threads <= 1) {
        worker(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t begin = static_cast<std::size_t>(t) * chunk;
        std::size_t end = std::min(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace

poseidon::Digest merge(const poseidon::Digest& left, const poseidon::Digest& right,
                       const poseidon::Constants& constants) {
    std::array<Element, kLeafWidth> block = {left[0],  left[1],  left[2],  left[3],
                                             right[0], right[1], right[2], right[3]};
    return poseidon::hash_block(block, poseidon::Digest{}, constants);
}

Tree Tree::build(std::span<const Element> leaves, const poseidon::Constants& constants,
                 const BuildOptions& options) {
    if (leaves.size() % kLeafWidth != 0) {
        throw DomainError("merkle: leaf data must be a multiple of 8 elements");
    }
    std::size_t n = leaves.size() / kLeafWidth;
    if (n == 0 || (n & (n - 1)) != 0) {
        throw DomainError("merkle: leaf count must be a power of two, >= 1");
    }

    Tree tree;
    tree.leaf_count_ = n;
    tree.constants_id_ = constants.id;
    tree.nodes_.resize(2 * n - 1);

    vec::OpCounters totals;
    std::mutex totals_mutex;

    auto hash_one = [&](std::span<const Element> block, vec::Backend* backend) {
        return backend ? poseidon::hash_block(*backend, block, poseidon::Digest{}, constants)
                       : poseidon::hash_block(block, poseidon::Digest{}, constants);
    };

    // Leaf level.
    parallel_chunks(
        n, options,
        [&](std::size_t begin, std::size_t end, vec::Backend* backend) {
            for (std::size_t i = begin; i < end; ++i) {
                tree.nodes_[i] = hash_one(leaves.subspan(i * kLeafWidth, kLeafWidth), backend);
            }
        },
        &totals, &totals_mutex);

    // Upper levels, with a barrier (thread join) between levels.
    std::size_t level_offset = 0;
    for (std::size_t level_size = n; level_size > 1; level_size /= 2) {
        std::size_t next_offset = level_offset + level_size;
        parallel_chunks(
            level_size / 2, options,
            [&](std::size_t begin, std::size_t end, vec::Backend* backend) {
                for (std::size_t i = begin; i < end; ++i) {
                    const poseidon::Digest& l = tree.nodes_[level_offset + 2 * i];
                    const poseidon::Digest& r = tree.nodes_[level_offset + 2 * i + 1];
                    std::array<Element, kLeafWidth> block = {l[0], l[1], l[2], l[3],
                                                             r[0], r[1], r[2], r[3]};
                    tree.nodes_[next_offset + i] = hash_one(block, backend);
                }
            },
            &totals, &totals_mutex);
        level_offset = next_offset;
    }

    if (options.counting && options.counters_out) {
        *options.counters_out = totals;
    }
    return tree;
}

Proof Tree::prove(std::size_t leaf_index) const {
    if (leaf_index >= leaf_count_) {
        throw DomainError("merkle: leaf index out of range");
    }
    Proof proof;
    proof.leaf_index = leaf_index;
    std::size_t idx = leaf_index;
    std::size_t level_offset = 0;
    for (std::size_t level_size = leaf_count_; level_size > 1; level_size /= 2) {
        std::size_t sibling = idx ^ 1;
        proof.path.push_back(ProofNode{nodes_[level_offset + sibling], (idx & 1) != 0});
        level_offset += level_size;
        idx /= 2;
    }
    return proof;
}

bool verify(const poseidon::Digest& root, std::span<const Element> leaf, const Proof& proof,
            const poseidon::Constants& constants) {
    if (leaf.size() != kLeafWidth) {
        throw DomainError("merkle: leaf must have exactly 8 elements");
    }
    poseidon::Digest current = poseidon::hash_block(leaf, poseidon::Digest{}, constants);
    for (const ProofNode& node : proof.path) {
        current = node.sibling_is_left ? merge(node.sibling, current, constants)
                                       : merge(current, node.sibling, constants);
    }
    return current == root;
}

std::string digest_hex(const poseidon::Digest& d) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (const Element& e : d) {
        uint8_t bytes[8];
        store_le(e, bytes);
        for (uint8_t b : bytes) {
            out.push_back(hex[b >> 4]);
            out.push_back(hex[b & 0xF]);
        }
    }
    return out;
}

std::optional<poseidon::Digest> digest_from_hex(const std::string& hex) {
    if (hex.size() != 64) {
        return std::nullopt;
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    poseidon::Digest d;
    for (std::size_t i = 0; i < 4; ++i) {
        uint8_t bytes[8];
        for (std::size_t j = 0; j < 8; ++j) {
            int hi = nibble(hex[i * 16 + 2 * j]);
            int lo = nibble(hex[i * 16 + 2 * j + 1]);
            if (hi < 0 || lo < 0) return std::nullopt;
            bytes[j] = static_cast<uint8_t>((hi << 4) | lo);
        }
        uint64_t v = load_le_u64(bytes);
        if (v >= kPrime) return std::nullopt;
        d[i] = Element(v);
    }
    return d;
}

} // namespace glv::merkle
