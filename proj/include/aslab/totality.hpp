#pragma once

// Totality tables and total conditional complexity CT: the minimum length
// of a program that maps y to x and halts on every string of the domain.

#include <cstdint>
#include <numeric>
#include <vector>

#include "aslab/enumeration.hpp"

namespace aslab {

/// A finite domain: all strings whose length is in `lengths`.
struct DomainSpec {
    std::vector<unsigned> lengths;

    static DomainSpec single_length(unsigned n) { return DomainSpec{{n}}; }

    /// All strings of length <= n.
    static DomainSpec up_to_length(unsigned n) {
        DomainSpec d;
        for (unsigned i = 0; i <= n; ++i) d.lengths.push_back(i);
        return d;
    }

    std::uint64_t size() const {
        std::uint64_t total = 0;
        for (unsigned len : lengths) total += std::uint64_t{1} << len;
        return total;
    }

    std::vector<BitString> enumerate() const {
        std::vector<BitString> out;
        out.reserve(size());
        for (unsigned len : lengths)
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v)
                out.push_back(BitString::from_value(v, len));
        return out;
    }

    std::string str() const {
        std::string s = "lengths{";
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(lengths[i]);
        }
        return s + "}";
    }
};

/// Total/partial flag for every program up to the enumeration ceiling,
/// relative to one domain.
class TotalityTable {
public:
    TotalityTable(const MachineConfig& cfg, DomainSpec domain)
        : cfg_(cfg), domain_(std::move(domain)) {
        cfg_.validate();
        for (unsigned len : domain_.lengths)
            if (len > 2 * cfg_.output_cap)
                throw InfeasibleError("domain strings exceed 2 * output_cap bits");
        if (domain_.size() > (std::uint64_t{1} << 20))
            throw InfeasibleError("domain too large for totality scan");
        auto strings = domain_.enumerate();
        std::vector<std::vector<std::uint8_t>> conds;
        conds.reserve(strings.size());
        for (const auto& y : strings) conds.push_back(detail::unpack_condition(y));

        const std::uint64_t total = program_count(cfg_.max_program_bits);
        flags_.assign(total, 1);
        std::vector<std::uint8_t> out(cfg_.output_cap);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            Program p = program_at_index(idx);
            for (const auto& cond : conds) {
                auto raw = detail::run_raw(cfg_, p, cond.data(),
                                           static_cast<std::uint32_t>(cond.size()), out.data());
                if (raw.status != RunResult::Status::Halted) {
                    flags_[idx] = 0;
                    break;
                }
            }
        }
    }

    const DomainSpec& domain() const { return domain_; }
    const MachineConfig& config() const { return cfg_; }

    bool is_total(Program p) const { return flags_[program_index(p)] != 0; }

    std::uint64_t total_count() const {
        return std::accumulate(flags_.begin(), flags_.end(), std::uint64_t{0});
    }

private:
    MachineConfig cfg_;
    DomainSpec domain_;
    std::vector<std::uint8_t> flags_;
};

/// CT(x | y) over the table's domain: minimal length of a program that is
/// total on the domain and maps y to x. Dominates plain conditional
/// complexity by construction.
inline Complexity ct(const TotalityTable& totality, const BitString& x, const BitString& y) {
    const MachineConfig& cfg = totality.config();
    const std::uint64_t total = program_count(cfg.max_program_bits);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Program p = program_at_index(idx);
        if (!totality.is_total(p)) continue;
        RunResult r = run(cfg, p, y);
        if (r.halted() && r.output == x) return Complexity(p.length);
    }
    return Complexity::overflow();
}

}  // namespace aslab
