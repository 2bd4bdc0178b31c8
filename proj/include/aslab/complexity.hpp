#pragma once

// Exact machine-relative complexities: the bits-or-overflow value type and
// the exhaustive minimal-description table for one condition.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aslab/bits.hpp"
#include "aslab/errors.hpp"
#include "aslab/machine.hpp"

namespace aslab {

/// Minimal description length in bits, or overflow (no program within the
/// enumeration ceiling). Overflow compares greater than every finite value;
/// downstream formulas must branch on it, never read it as a number.
class Complexity {
public:
    constexpr Complexity() : raw_(kOverflow) {}
    constexpr explicit Complexity(int bits) : raw_(static_cast<std::int16_t>(bits)) {
        if (bits < 0) throw std::invalid_argument("complexity in bits cannot be negative");
    }

    static constexpr Complexity overflow() { return Complexity{}; }

    constexpr bool is_overflow() const { return raw_ == kOverflow; }

    int bits() const {
        if (is_overflow()) throw InvariantViolation("complexity overflow used as a number");
        return raw_;
    }

    std::optional<int> finite() const {
        if (is_overflow()) return std::nullopt;
        return raw_;
    }

    std::string str() const { return is_overflow() ? "overflow" : std::to_string(raw_); }

    constexpr bool operator==(const Complexity&) const = default;

    constexpr bool operator<(const Complexity& other) const {
        return rank() < other.rank();
    }
    constexpr bool operator<=(const Complexity& other) const { return rank() <= other.rank(); }
    constexpr bool operator>(const Complexity& other) const { return other < *this; }
    constexpr bool operator>=(const Complexity& other) const { return other <= *this; }

    constexpr bool operator<=(int v) const { return !is_overflow() && raw_ <= v; }
    constexpr bool operator<(int v) const { return !is_overflow() && raw_ < v; }
    constexpr bool operator>=(int v) const { return is_overflow() || raw_ >= v; }
    constexpr bool operator>(int v) const { return is_overflow() || raw_ > v; }

private:
    constexpr int rank() const { return is_overflow() ? std::numeric_limits<int>::max() : raw_; }
    static constexpr std::int16_t kOverflow = -1;
    std::int16_t raw_;
};

struct TableEntry {
    BitString output;
    std::uint8_t complexity = 0;   // witness length in bits
    Program witness;               // least (length, value) program producing output
    std::uint16_t witness_steps = 0;
};

/// Exact minimal description lengths for every output reachable under one
/// condition. Entries are sorted by output (length-lexicographic); an
/// absent output means complexity above the enumeration ceiling.
class ComplexityTable {
public:
    ComplexityTable() = default;
    ComplexityTable(MachineConfig cfg, BitString condition, std::vector<TableEntry> sorted_entries)
        : cfg_(std::move(cfg)), condition_(std::move(condition)), entries_(std::move(sorted_entries)) {
        index_.reserve(entries_.size());
        for (std::uint32_t i = 0; i < entries_.size(); ++i)
            index_.emplace(entries_[i].output, i);
        omega_.assign(cfg_.max_program_bits + 1, 0);
        for (const auto& e : entries_) ++omega_[e.complexity];
        for (std::size_t i = 1; i < omega_.size(); ++i) omega_[i] += omega_[i - 1];
    }

    const MachineConfig& config() const { return cfg_; }
    const BitString& condition() const { return condition_; }
    const std::vector<TableEntry>& entries() const { return entries_; }

    Complexity complexity_of(const BitString& output) const {
        auto it = index_.find(output);
        if (it == index_.end()) return Complexity::overflow();
        return Complexity(entries_[it->second].complexity);
    }

    const TableEntry* find(const BitString& output) const {
        auto it = index_.find(output);
        return it == index_.end() ? nullptr : &entries_[it->second];
    }

    std::optional<std::uint32_t> entry_index(const BitString& output) const {
        auto it = index_.find(output);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Count of outputs with complexity at most `bits` (from the complexity
    /// histogram; the appearance stream provides the independent count).
    std::uint64_t omega(unsigned bits) const {
        if (omega_.empty()) return 0;
        if (bits >= omega_.size()) bits = static_cast<unsigned>(omega_.size()) - 1;
        return omega_[bits];
    }

    /// Re-runs every recorded witness and checks it reproduces its output.
    void audit_witnesses() const {
        for (const auto& e : entries_) {
            RunResult r = run(cfg_, e.witness, condition_);
            if (!r.halted() || !(r.output == e.output) || r.steps != e.witness_steps)
                throw InvariantViolation("witness audit failed for output " + e.output.str());
        }
    }

private:
    MachineConfig cfg_;
    BitString condition_;
    std::vector<TableEntry> entries_;
    std::unordered_map<BitString, std::uint32_t, BitStringHash> index_;
    std::vector<std::uint64_t> omega_;
};

}  // namespace aslab
