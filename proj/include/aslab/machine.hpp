#pragma once

// TVM-1: the fixed description mode. A program is a bit string read as a
// sequence of 3-bit opcodes (1-2 trailing bits are ignored, so every bit
// string is a program). Execution is deterministic and resource bounded:
// at most `step_budget` executed opcodes and at most `output_cap` output
// bits; exceeding either budget is divergence, not an error.
//
// Opcodes:
//   000 OUT0   append 0 to the output
//   001 OUT1   append 1 to the output
//   010 READ   append y[h] and advance h; no-op when h >= |y|
//   011 SKIP   advance h; no-op when h >= |y|
//   100 CEND   skip the next opcode iff h >= |y|
//   101 CBIT   skip the next opcode iff h < |y| and y[h] = 1 (h unchanged)
//   110 JBACK  next opcode index = max(i - 3, 0), i = own index
//   111 DUP    output <- output.output, one step

#include <cstdint>
#include <cstring>
#include <string>
#include <stdexcept>
#include <vector>

#include "aslab/bits.hpp"

namespace aslab {

enum class EnumOrder : std::uint8_t { Dovetail = 0, LengthLex = 1 };

inline const char* to_string(EnumOrder order) {
    return order == EnumOrder::Dovetail ? "dovetail" : "length-lex";
}

/// Absolute ceiling on enumerated program length; full enumeration of
/// 2^25 programs stays within minutes on one core.
inline constexpr unsigned kMaxProgramBitsCap = 24;

struct MachineConfig {
    std::string version_id = "TVM-1";
    std::uint32_t step_budget = 256;   // executed opcodes allowed (T)
    std::uint32_t output_cap = 64;     // output bits allowed (N_max)
    std::uint32_t max_program_bits = 18;  // enumeration ceiling (L_max)
    EnumOrder enum_order = EnumOrder::Dovetail;

    void validate() const {
        if (step_budget == 0 || output_cap == 0 || max_program_bits == 0)
            throw std::invalid_argument("machine budgets must be strictly positive");
        if (max_program_bits > kMaxProgramBitsCap)
            throw std::invalid_argument("max_program_bits exceeds the hard cap of 24");
    }

    /// Field serialization used for the digest and for cache headers:
    /// format version byte, version_id (u8 length + bytes), step budget,
    /// output cap, program-length cap (u32 LE each), enum-order byte.
    std::vector<std::uint8_t> serialized_fields() const {
        std::vector<std::uint8_t> out;
        out.push_back(kFormatVersion);
        out.push_back(static_cast<std::uint8_t>(version_id.size()));
        out.insert(out.end(), version_id.begin(), version_id.end());
        auto put_u32 = [&out](std::uint32_t v) {
            for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        };
        put_u32(step_budget);
        put_u32(output_cap);
        put_u32(max_program_bits);
        out.push_back(static_cast<std::uint8_t>(enum_order));
        return out;
    }

    std::uint64_t digest() const {
        std::uint64_t h = 14695981039346656037ull;
        for (std::uint8_t b : serialized_fields()) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }

    static constexpr std::uint8_t kFormatVersion = 1;
};

/// A program: `length` bits with MSB-first significance packed into `value`.
/// Ordering is length-lexicographic, the order every enumeration uses.
struct Program {
    std::uint32_t value = 0;
    std::uint8_t length = 0;

    static Program from_bits(const BitString& bits) {
        if (bits.size() > kMaxProgramBitsCap)
            throw std::invalid_argument("program longer than the hard cap");
        return Program{static_cast<std::uint32_t>(bits.value()),
                       static_cast<std::uint8_t>(bits.size())};
    }

    BitString bits() const { return BitString::from_value(value, length); }

    int opcode_count() const { return length / 3; }

    /// The 3-bit opcode at index `i` (0-based).
    unsigned opcode(int i) const {
        return (value >> (length - 3 * i - 3)) & 7u;
    }

    bool operator==(const Program&) const = default;
    auto operator<=>(const Program& other) const {
        if (length != other.length) return length <=> other.length;
        return value <=> other.value;
    }
};

/// Index of a program in the global length-lexicographic enumeration:
/// all 2^L programs of length L precede those of length L+1.
inline std::uint64_t program_index(Program p) {
    return (std::uint64_t{1} << p.length) - 1 + p.value;
}

inline Program program_at_index(std::uint64_t index) {
    unsigned length = 0;
    while ((std::uint64_t{2} << length) - 1 <= index) ++length;
    return Program{static_cast<std::uint32_t>(index - ((std::uint64_t{1} << length) - 1)),
                   static_cast<std::uint8_t>(length)};
}

/// Count of programs of length <= max_bits.
inline std::uint64_t program_count(unsigned max_bits) {
    return (std::uint64_t{2} << max_bits) - 1;
}

struct RunResult {
    enum class Status : std::uint8_t { Halted, StepBudget, OutputCap };
    Status status = Status::Halted;
    BitString output;
    std::uint32_t steps = 0;

    bool halted() const { return status == Status::Halted; }
};

namespace detail {

struct RawRun {
    RunResult::Status status;
    std::uint32_t steps;
    std::uint32_t out_len;
};

/// Core interpreter over an unpacked condition (one byte per bit).
/// `out` must have room for cfg.output_cap bytes.
inline RawRun run_raw(const MachineConfig& cfg, Program p,
                      const std::uint8_t* cond, std::uint32_t cond_len,
                      std::uint8_t* out) {
    const int op_count = p.opcode_count();
    const std::uint32_t cap = cfg.output_cap;
    std::uint32_t out_len = 0;
    std::uint32_t head = 0;
    std::uint32_t steps = 0;
    int pc = 0;
    while (pc < op_count) {
        if (steps == cfg.step_budget)
            return {RunResult::Status::StepBudget, steps, out_len};
        ++steps;
        switch (p.opcode(pc)) {
            case 0:  // OUT0
                if (out_len == cap) return {RunResult::Status::OutputCap, steps, out_len};
                out[out_len++] = 0;
                ++pc;
                break;
            case 1:  // OUT1
                if (out_len == cap) return {RunResult::Status::OutputCap, steps, out_len};
                out[out_len++] = 1;
                ++pc;
                break;
            case 2:  // READ
                if (head < cond_len) {
                    if (out_len == cap) return {RunResult::Status::OutputCap, steps, out_len};
                    out[out_len++] = cond[head++];
                }
                ++pc;
                break;
            case 3:  // SKIP
                if (head < cond_len) ++head;
                ++pc;
                break;
            case 4:  // CEND
                pc += (head >= cond_len) ? 2 : 1;
                break;
            case 5:  // CBIT
                pc += (head < cond_len && cond[head] == 1) ? 2 : 1;
                break;
            case 6:  // JBACK
                pc = pc >= 3 ? pc - 3 : 0;
                break;
            default:  // DUP
                if (2 * out_len > cap) return {RunResult::Status::OutputCap, steps, out_len};
                std::memcpy(out + out_len, out, out_len);
                out_len *= 2;
                ++pc;
                break;
        }
    }
    return {RunResult::Status::Halted, steps, out_len};
}

inline std::vector<std::uint8_t>& scratch_output(std::uint32_t cap) {
    thread_local std::vector<std::uint8_t> buf;
    if (buf.size() < cap) buf.resize(cap);
    return buf;
}

inline std::vector<std::uint8_t> unpack_condition(const BitString& y) {
    std::vector<std::uint8_t> bits(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) bits[i] = static_cast<std::uint8_t>(y[i]);
    return bits;
}

}  // namespace detail

/// Runs program p on condition y. Divergence is a value, never an error.
inline RunResult run(const MachineConfig& cfg, Program p, const BitString& y) {
    if (p.length > cfg.max_program_bits)
        throw std::invalid_argument("program exceeds max_program_bits");
    if (y.size() > 2 * static_cast<std::size_t>(cfg.output_cap))
        throw std::invalid_argument("condition exceeds 2 * output_cap bits");
    auto cond = detail::unpack_condition(y);
    auto& out = detail::scratch_output(cfg.output_cap);
    auto raw = detail::run_raw(cfg, p, cond.data(), static_cast<std::uint32_t>(cond.size()), out.data());
    RunResult result;
    result.status = raw.status;
    result.steps = raw.steps;
    if (raw.status == RunResult::Status::Halted)
        result.output = BitString::from_bytes(out.data(), raw.out_len);
    return result;
}

inline RunResult run(const MachineConfig& cfg, const BitString& program_bits, const BitString& y) {
    return run(cfg, Program::from_bits(program_bits), y);
}

/// True iff p halts on every element of the (finite, explicit) domain.
template <typename Container>
bool is_total_on(const MachineConfig& cfg, Program p, const Container& domain) {
    for (const BitString& y : domain)
        if (!run(cfg, p, y).halted()) return false;
    return true;
}

}  // namespace aslab
