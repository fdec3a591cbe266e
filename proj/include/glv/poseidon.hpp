#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "glv/field.hpp"
#include "glv/vecbackend.hpp"

namespace glv::poseidon {

inline constexpr std::size_t kStateWidth = 12;   // rate 8 + capacity 4
inline constexpr std::size_t kRate = 8;
inline constexpr std::size_t kCapacity = 4;
inline constexpr std::size_t kHalfFullRounds = 4;
inline constexpr std::size_t kPartialRounds = 22;
// One round-constant block before the first full round, one after each of
// the 2*kHalfFullRounds full rounds.
inline constexpr std::size_t kConstantBlocks = 1 + 2 * kHalfFullRounds;

using State = std::array<Element, kStateWidth>;
using Digest = std::array<Element, kCapacity>;

struct SparseBlock {
    std::array<Element, kStateWidth> v0; // replaces state[0] via a dot product
    std::array<Element, kStateWidth> v1; // scales old state[0] into every element
};

struct Constants {
    std::array<std::array<Element, kStateWidth>, kConstantBlocks> C;
    std::array<std::array<Element, kStateWidth>, kStateWidth> M;
    std::array<SparseBlock, kPartialRounds> S;
    std::string id; // identifier of the source file, recorded by Merkle trees
};

// Parses and validates a JSON constants file:
//   {"half_full_rounds":4, "partial_rounds":22,
//    "C":[[12 decimal strings] x 9], "M":[[12] x 12],
//    "S":[{"v0":[12],"v1":[12]} x 22]}
// Rejects wrong dimensions and non-canonical entries.
Constants load_constants(const std::filesystem::path& path);

// Element-wise x^7.
State sbox_full(const State& state);

State add_round_constants(const State& state, const std::array<Element, kStateWidth>& block);

// state-vector times M (result[j] = sum_i state[i] * M[i][j]).
State mds(const State& state, const std::array<std::array<Element, kStateWidth>, kStateWidth>& m);

// Sparse partial-round mix: result[0] = dot(state, v0); for i >= 1,
// result[i] = state[i] + old_state[0] * v1[i]. v1[0] is folded into the
// full-state add before element 0 is overwritten, and therefore inert.
State mds_partial(const State& state, const SparseBlock& block);

// 4x12 matrix-vector kernels. The spmv variants skip zero entries; the _8
// variants require all matrix entries < 256 and multiply through mult_72.
using Rows4x12 = std::array<std::array<Element, kStateWidth>, 4>;
std::array<Element, 4> spmv_4x12(const State& state, const Rows4x12& rows);
std::array<Element, 4> mmult_4x12(const State& state, const Rows4x12& rows);
std::array<Element, 4> spmv_4x12_8(const State& state, const Rows4x12& rows);
std::array<Element, 4> mmult_4x12_8(const State& state, const Rows4x12& rows);

// The full permutation: initial constant add, kHalfFullRounds full rounds,
// kPartialRounds partial rounds, kHalfFullRounds full rounds.
State permute(const State& state, const Constants& constants);

// Same permutation routed through a lane backend (any W in {2,4,8});
// bit-identical to the scalar path.
State permute(vec::Backend& backend, const State& state, const Constants& constants);

// One sponge block: state = input || capacity_in, permuted; digest = first
// four output elements.
Digest hash_block(std::span<const Element> input8, const Digest& capacity_in,
                  const Constants& constants);
Digest hash_block(vec::Backend& backend, std::span<const Element> input8,
                  const Digest& capacity_in, const Constants& constants);

// Variable-length absorption: zero-pad to a multiple of 8, absorb chunk by
// chunk, with each permutation's last four elements feeding the next chunk's
// capacity. Empty input hashes one all-zero block.
Digest linear_hash(std::span<const Element> input, const Constants& constants);

} // namespace glv::poseidon
