#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glv/poseidon.hpp"

namespace glv::merkle {

inline constexpr std::size_t kLeafWidth = 8; // elements per leaf (64 bytes)

struct ProofNode {
    poseidon::Digest sibling;
    bool sibling_is_left = false;
};

struct Proof {
    std::size_t leaf_index = 0;
    std::vector<ProofNode> path; // length = tree depth
};

struct BuildOptions {
    unsigned threads = 1;
    // Lane width of the backend used for hashing; nullopt = scalar path.
    std::optional<std::size_t> lane_width;
    bool counting = false;
    // Populated after a counting build (merged across worker threads).
    vec::OpCounters* counters_out = nullptr;
};

// A built tree: 2n-1 digests stored level by level, leaves first, root last.
class Tree {
  public:
    // leaves.size() must be n * 8 with n a power of two. The result is
    // independent of thread count and backend.
    static Tree build(std::span<const Element> leaves, const poseidon::Constants& constants,
                      const BuildOptions& options = {});

    std::size_t leaf_count() const { return leaf_count_; }
    const std::string& constants_id() const { return constants_id_; }
    const std::vector<poseidon::Digest>& nodes() const { return nodes_; }

    const poseidon::Digest& root() const { return nodes_.back(); }

    Proof prove(std::size_t leaf_index) const;

  private:
    Tree() = default;

    std::size_t leaf_count_ = 0;
    std::vector<poseidon::Digest> nodes_;
    std::string constants_id_;
};

// Recomputes the authentication path from the leaf and compares to root.
bool verify(const poseidon::Digest& root, std::span<const Element> leaf, const Proof& proof,
            const poseidon::Constants& constants);

// Internal-node merge: hash of left || right with zero capacity. Exposed for
// oracle-style re-computation in callers.
poseidon::Digest merge(const poseidon::Digest& left, const poseidon::Digest& right,
                       const poseidon::Constants& constants);

// Digest rendering used by the CLI: 64 hex chars, little-endian element
// bytes concatenated in order.
std::string digest_hex(const poseidon::Digest& d);
std::optional<poseidon::Digest> digest_from_hex(const std::string& hex);

} // namespace glv::merkle
