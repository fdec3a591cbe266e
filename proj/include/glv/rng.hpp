#pragma once

#include <cstdint>

#include "glv/field.hpp"

namespace glv {

// SplitMix64 (Steele, Lea, Flood; public domain reference sequence). Fixed
// here so reruns with the same seed produce the same inputs in any
// implementation of the same generator.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Rejection-sampled canonical element.
    Element next_element() {
        for (;;) {
            uint64_t v = next();
            if (v < kPrime) {
                return Element(v);
            }
        }
    }

  private:
    uint64_t state_;
};

} // namespace glv
