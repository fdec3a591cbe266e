#include "glv/vecbackend.hpp"

#include <algorithm>

#include "glv/errors.hpp"

namespace glv::vec {

Batch::Batch(std::size_t width) : width_(width) {
    if (std::find(kWidths.begin(), kWidths.end(), width) == kWidths.end()) {
        throw DomainError("Batch: width must be 2, 4, or 8");
    }
    lanes_.fill(0);
}

Batch::Batch(std::initializer_list<uint64_t> lanes) : width_(lanes.size()) {
    if (std::find(kWidths.begin(), kWidths.end(), width_) == kWidths.end()) {
        throw DomainError("Batch: width must be 2, 4, or 8");
    }
    lanes_.fill(0);
    std::copy(lanes.begin(), lanes.end(), lanes_.begin());
}

Backend::Backend(std::size_t width, bool counting) : width_(width), counting_(counting) {
    if (std::find(kWidths.begin(), kWidths.end(), width) == kWidths.end()) {
        throw DomainError("Backend: width must be 2, 4, or 8");
    }
}

void Backend::check_width(const Batch& b) const {
    if (b.width() != width_) {
        throw WidthMismatchError("vector op: batch width does not match backend width");
    }
}

Batch Backend::vadd(const Batch& a, const Batch& b) {
    check_width(a);
    check_width(b);
    if (counting_) {
        counters_.vadd += 1;
    }
    Batch out(width_);
    for (std::size_t i = 0; i < width_; ++i) {
        out[i] = add(Element(a[i]), Element(b[i])).value();
    }
    return out;
}

Batch Backend::vsub(const Batch& a, const Batch& b) {
    check_width(a);
    check_width(b);
    if (counting_) {
        counters_.vsub += 1;
    }
    Batch out(width_);
    for (std::size_t i = 0; i < width_; ++i) {
        out[i] = sub(Element(a[i]), Element(b[i])).value();
    }
    return out;
}

void Backend::vmul_wide(const Batch& a, const Batch& b, MulMode mode, Batch& hi, Batch& lo) {
    check_width(a);
    check_width(b);
    if (counting_) {
        if (mode == MulMode::direct) {
            counters_.vmul_lo += 1;
            counters_.vmul_hi += 1;
        } else {
            counters_.vmul_lo += 4;
            counters_.vshift += 6;
            counters_.vand += 3;
            counters_.vadd += 4;
            counters_.vselect += 1;
        }
    }
    hi = Batch(width_);
    lo = Batch(width_);
    for (std::size_t i = 0; i < width_; ++i) {
        WideProduct p = mode == MulMode::direct
                            ? mul_wide_direct(Element(a[i]), Element(b[i]))
                            : mul_wide_split(Element(a[i]), Element(b[i]));
        hi[i] = p.hi;
        lo[i] = p.lo;
    }
}

Batch Backend::vreduce_128(const Batch& hi, const Batch& lo) {
    check_width(hi);
    check_width(lo);
    if (counting_) {
        counters_.vand += 1;
        counters_.vshift += 1;
        counters_.vmul_lo += 1;
        counters_.vadd += 2;
        counters_.vsub += 3;
        counters_.vcompare += 3;
    }
    Batch out(width_);
    for (std::size_t i = 0; i < width_; ++i) {
        out[i] = reduce_128(WideProduct{hi[i], lo[i]}).value();
    }
    return out;
}

void Backend::transpose_block(std::span<Batch> rows) {
    if (rows.size() != width_) {
        throw WidthMismatchError("transpose_block: expected a square block of W batches");
    }
    for (const Batch& r : rows) {
        check_width(r);
    }
    if (counting_) {
        counters_.vpermute += width_;
    }
    for (std::size_t i = 0; i < width_; ++i) {
        for (std::size_t j = i + 1; j < width_; ++j) {
            std::swap(rows[i][j], rows[j][i]);
        }
    }
}

Batch Backend::load(std::span<const uint64_t> words) {
    if (words.size() > width_) {
        throw WidthMismatchError("load: more words than lanes");
    }
    if (counting_) {
        counters_.vload += 1;
    }
    Batch out(width_);
    for (std::size_t i = 0; i < words.size(); ++i) {
        out[i] = words[i];
    }
    return out;
}

void Backend::store(const Batch& b, std::span<uint64_t> words) {
    check_width(b);
    if (words.size() > width_) {
        throw WidthMismatchError("store: more words than lanes");
    }
    if (counting_) {
        counters_.vstore += 1;
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
        words[i] = b[i];
    }
}

} // namespace glv::vec
