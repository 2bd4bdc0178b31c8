#pragma once

// Bit sequences with MSB-first significance and length-lexicographic order.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aslab {

/// A finite sequence of bits. Bit 0 is the most significant position, so
/// comparing two equal-length strings bitwise equals comparing them as
/// binary numerals. Ordering is length-lexicographic: shorter strings come
/// first, equal lengths compare by numeric value.
class BitString {
public:
    BitString() = default;

    /// Parses a literal such as "0101". Throws on characters outside {0,1}.
    explicit BitString(std::string_view literal) {
        for (char ch : literal) {
            if (ch == '0') push_back(0);
            else if (ch == '1') push_back(1);
            else throw std::invalid_argument("BitString literal must contain only 0/1");
        }
    }

    /// Builds from one byte per bit (values 0/1), as produced by the machine
    /// output buffer.
    static BitString from_bytes(const std::uint8_t* bits, std::size_t count) {
        BitString s;
        s.reserve(count);
        for (std::size_t i = 0; i < count; ++i) s.push_back(bits[i]);
        return s;
    }

    /// The `width` least significant bits of `value`, emitted MSB first.
    static BitString from_value(std::uint64_t value, unsigned width) {
        if (width < 64 && width > 0) value &= (std::uint64_t{1} << width) - 1;
        BitString s;
        s.reserve(width);
        for (unsigned i = 0; i < width; ++i)
            s.push_back(static_cast<int>((value >> (width - 1 - i)) & 1u));
        return s;
    }

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    int operator[](std::size_t i) const {
        assert(i < len_);
        return static_cast<int>((words_[i >> 6] >> (63 - (i & 63))) & 1u);
    }

    void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }

    void push_back(int bit) {
        const std::size_t word = len_ >> 6;
        if (word == words_.size()) words_.push_back(0);
        if (bit) words_[word] |= std::uint64_t{1} << (63 - (len_ & 63));
        ++len_;
    }

    void append(const BitString& other) {
        for (std::size_t i = 0; i < other.len_; ++i) push_back(other[i]);
    }

    /// Numeric value of the whole string (requires size() <= 64).
    std::uint64_t value() const {
        assert(len_ <= 64);
        if (len_ == 0) return 0;
        return words_[0] >> (64 - len_);
    }

    BitString prefix(std::size_t count) const {
        assert(count <= len_);
        BitString s;
        s.reserve(count);
        for (std::size_t i = 0; i < count; ++i) s.push_back((*this)[i]);
        return s;
    }

    BitString substr(std::size_t pos, std::size_t count) const {
        assert(pos + count <= len_);
        BitString s;
        s.reserve(count);
        for (std::size_t i = 0; i < count; ++i) s.push_back((*this)[pos + i]);
        return s;
    }

    std::string str() const {
        std::string out;
        out.reserve(len_);
        for (std::size_t i = 0; i < len_; ++i) out.push_back((*this)[i] ? '1' : '0');
        return out;
    }

    /// Big-endian packed bytes, zero padded in the final byte.
    std::vector<std::uint8_t> packed_bytes() const {
        std::vector<std::uint8_t> out((len_ + 7) / 8, 0);
        for (std::size_t i = 0; i < len_; ++i)
            if ((*this)[i]) out[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
        return out;
    }

    static BitString from_packed_bytes(const std::vector<std::uint8_t>& bytes, std::size_t bit_count) {
        if (bytes.size() < (bit_count + 7) / 8)
            throw std::invalid_argument("packed byte buffer shorter than bit count");
        BitString s;
        s.reserve(bit_count);
        for (std::size_t i = 0; i < bit_count; ++i)
            s.push_back((bytes[i >> 3] >> (7 - (i & 7))) & 1);
        return s;
    }

    bool operator==(const BitString& other) const {
        return len_ == other.len_ && words_ == other.words_;
    }

    /// Length-lexicographic order: shorter first, then numeric ascending.
    std::strong_ordering operator<=>(const BitString& other) const {
        if (len_ != other.len_) return len_ <=> other.len_;
        return words_ <=> other.words_;
    }

    std::size_t hash() const {
        std::uint64_t h = 14695981039346656037ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        mix(len_);
        for (std::uint64_t w : words_) mix(w);
        return static_cast<std::size_t>(h);
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
};

struct BitStringHash {
    std::size_t operator()(const BitString& s) const { return s.hash(); }
};

/// The empty string, written Lambda throughout reports.
inline const BitString& lambda() {
    static const BitString empty;
    return empty;
}

}  // namespace aslab
