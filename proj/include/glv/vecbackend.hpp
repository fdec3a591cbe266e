#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "glv/field.hpp"

namespace glv::vec {

// Supported lane widths, modeling 128/256/512-bit registers of 64-bit lanes.
inline constexpr std::array<std::size_t, 3> kWidths = {2, 4, 8};

// One abstract vector register: W lanes of 64-bit words.
class Batch {
  public:
    Batch() : width_(0) { lanes_.fill(0); }

    explicit Batch(std::size_t width);
    Batch(std::initializer_list<uint64_t> lanes);

    std::size_t width() const { return width_; }
    uint64_t operator[](std::size_t i) const { return lanes_[i]; }
    uint64_t& operator[](std::size_t i) { return lanes_[i]; }

    friend bool operator==(const Batch& a, const Batch& b) {
        if (a.width_ != b.width_) return false;
        for (std::size_t i = 0; i < a.width_; ++i) {
            if (a.lanes_[i] != b.lanes_[i]) return false;
        }
        return true;
    }

  private:
    std::array<uint64_t, 8> lanes_;
    std::size_t width_;
};

// Abstract-instruction tallies, one class per counter. Counts depend only on
// the sequence of calls, never on lane values.
struct OpCounters {
    uint64_t vadd = 0;
    uint64_t vsub = 0;
    uint64_t vmul_lo = 0;
    uint64_t vmul_hi = 0;
    uint64_t vshift = 0;
    uint64_t vand = 0;
    uint64_t vcompare = 0;
    uint64_t vselect = 0;
    uint64_t vload = 0;
    uint64_t vstore = 0;
    uint64_t vpermute = 0;

    uint64_t total() const {
        return vadd + vsub + vmul_lo + vmul_hi + vshift + vand + vcompare + vselect +
               vload + vstore + vpermute;
    }
};

enum class MulMode {
    direct,  // widening high/low multiply pair
    split32, // four low-half multiplies on 32-bit operand halves
};

// A fixed-width lane backend. The scalar-loop implementation here is
// normative: every lane of every result equals the scalar field op applied
// to that lane. When counting, each call tallies the abstract instruction
// stream it stands for, one instruction per vector of W lanes:
//   vadd / vsub      -> 1 of its own class
//   vmul_wide direct -> 1 vmul_lo + 1 vmul_hi
//   vmul_wide split32-> 4 vmul_lo + 6 vshift + 3 vand + 4 vadd + 1 vselect
//   vreduce_128      -> 1 vand + 1 vshift + 1 vmul_lo + 2 vadd + 3 vsub + 3 vcompare
//   transpose_block  -> W vpermute
//   load/store       -> 1 vload / 1 vstore
// Counters are per-instance; use one backend per thread and merge after.
class Backend {
  public:
    explicit Backend(std::size_t width, bool counting = false);

    std::size_t width() const { return width_; }
    bool counting() const { return counting_; }

    Batch vadd(const Batch& a, const Batch& b);
    Batch vsub(const Batch& a, const Batch& b);
    void vmul_wide(const Batch& a, const Batch& b, MulMode mode, Batch& hi, Batch& lo);
    Batch vreduce_128(const Batch& hi, const Batch& lo);

    // In-place transpose of a square block of W batches of width W.
    void transpose_block(std::span<Batch> rows);

    // Counted memory movement; lanes beyond `n` are zero-filled on load.
    Batch load(std::span<const uint64_t> words);
    void store(const Batch& b, std::span<uint64_t> words);

    const OpCounters& counters() const { return counters_; }
    void reset_counters() { counters_ = OpCounters{}; }

  private:
    void check_width(const Batch& b) const;

    std::size_t width_;
    bool counting_;
    OpCounters counters_;
};

} // namespace glv::vec
