#pragma once

// Finite subsets of {0,1}^n as characteristic bitmaps. The bitmap of a set
// is the 2^n-bit string whose position i (MSB first) is 1 iff the string
// with numeric value i belongs to the set; a program describes the set by
// outputting exactly that bitmap unconditionally.

#include <bit>
#include <cstdint>
#include <vector>

#include "aslab/bits.hpp"
#include "aslab/errors.hpp"

namespace aslab {

class SetBitmap {
public:
    SetBitmap() = default;
    SetBitmap(unsigned n, std::uint64_t mask) : n_(n), mask_(mask) {
        if (n > 6) throw InfeasibleError("set universe exponent exceeds 6 (bitmap > 64 bits)");
        if (n < 6) mask_ &= (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
    }

    static SetBitmap empty_set(unsigned n) { return SetBitmap(n, 0); }

    static SetBitmap full_universe(unsigned n) {
        SetBitmap s(n, 0);
        s.mask_ = n == 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
        return s;
    }

    static SetBitmap singleton(const BitString& x) {
        SetBitmap s(static_cast<unsigned>(x.size()), 0);
        s.insert(x);
        return s;
    }

    unsigned universe_exponent() const { return n_; }
    std::uint64_t universe_size() const { return std::uint64_t{1} << n_; }
    std::uint64_t mask() const { return mask_; }

    bool contains_value(std::uint64_t value) const { return (mask_ >> value) & 1u; }
    bool contains(const BitString& x) const {
        return x.size() == n_ && contains_value(x.value());
    }

    void insert_value(std::uint64_t value) { mask_ |= std::uint64_t{1} << value; }
    void insert(const BitString& x) {
        if (x.size() != n_) throw InvariantViolation("set member has wrong length");
        insert_value(x.value());
    }

    unsigned count() const { return static_cast<unsigned>(std::popcount(mask_)); }
    bool empty() const { return mask_ == 0; }

    SetBitmap united(const SetBitmap& other) const { return SetBitmap(n_, mask_ | other.mask_); }
    SetBitmap intersected(const SetBitmap& other) const { return SetBitmap(n_, mask_ & other.mask_); }

    /// Members in ascending (= lexicographic) order.
    std::vector<BitString> members() const {
        std::vector<BitString> out;
        for (std::uint64_t v = 0; v < universe_size(); ++v)
            if (contains_value(v)) out.push_back(BitString::from_value(v, n_));
        return out;
    }

    /// The 2^n-bit characteristic bitmap, position i = membership of value i.
    BitString to_bits() const {
        BitString s;
        s.reserve(universe_size());
        for (std::uint64_t v = 0; v < universe_size(); ++v)
            s.push_back(contains_value(v) ? 1 : 0);
        return s;
    }

    static SetBitmap from_bits(const BitString& bitmap) {
        std::uint64_t size = bitmap.size();
        if (size == 0 || (size & (size - 1)) != 0 || size > 64)
            throw InvariantViolation("bitmap length is not a power of two within 64");
        unsigned n = static_cast<unsigned>(std::countr_zero(size));
        SetBitmap s(n, 0);
        for (std::uint64_t v = 0; v < size; ++v)
            if (bitmap[static_cast<std::size_t>(v)]) s.insert_value(v);
        return s;
    }

    bool operator==(const SetBitmap&) const = default;
    auto operator<=>(const SetBitmap& other) const {
        if (n_ != other.n_) return n_ <=> other.n_;
        return mask_ <=> other.mask_;
    }

    std::string str() const { return to_bits().str(); }

private:
    unsigned n_ = 0;
    std::uint64_t mask_ = 0;
};

/// Ceiling log2 of the cardinality: |A| = 2^l maps to l, 0 maps to 0.
inline unsigned ceil_log2_count(unsigned count) {
    if (count <= 1) return 0;
    return static_cast<unsigned>(std::bit_width(count - 1u));
}

}  // namespace aslab
