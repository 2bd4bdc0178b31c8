#pragma once

// Holographic strings, loss families and list-decodable codebooks.
//
// A partial string x_I keeps the bits of x at the index set I and blanks
// the rest; its machine condition encodes two bits per position (00/01 a
// kept bit, 10 a blank; 11 is read as blank but never written). A string
// is (eps, k)-holographic when every k-position partial of it determines
// it within eps program bits.

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "aslab/lab.hpp"
#include "aslab/rng.hpp"

namespace aslab {

struct PartialString {
    unsigned n = 0;
    std::uint64_t mask = 0;  // bit i set = position i (0-based, left to right) kept
    BitString kept;          // kept bits in position order

    static PartialString of(const BitString& x, std::uint64_t mask) {
        PartialString partial;
        partial.n = static_cast<unsigned>(x.size());
        if (partial.n < 64) mask &= (std::uint64_t{1} << partial.n) - 1;
        partial.mask = mask;
        for (unsigned i = 0; i < partial.n; ++i)
            if ((mask >> i) & 1) partial.kept.push_back(x[i]);
        return partial;
    }

    unsigned kept_count() const { return static_cast<unsigned>(std::popcount(mask)); }

    /// Two bits per position: 00 / 01 for a kept 0 / 1, 10 for a blank.
    BitString encode() const {
        BitString out;
        out.reserve(2 * n);
        unsigned next_kept = 0;
        for (unsigned i = 0; i < n; ++i) {
            if ((mask >> i) & 1) {
                out.push_back(0);
                out.push_back(kept[next_kept++]);
            } else {
                out.push_back(1);
                out.push_back(0);
            }
        }
        return out;
    }

    static PartialString decode(const BitString& bits) {
        if (bits.size() % 2 != 0)
            throw InvariantViolation("partial-string encoding has odd length");
        PartialString partial;
        partial.n = static_cast<unsigned>(bits.size() / 2);
        for (unsigned i = 0; i < partial.n; ++i) {
            int flag = bits[2 * i];
            int data = bits[2 * i + 1];
            if (flag == 0) {  // kept bit; 10 and the reserved 11 both decode as blank
                partial.mask |= std::uint64_t{1} << i;
                partial.kept.push_back(data);
            }
        }
        return partial;
    }

    bool consistent(const BitString& candidate) const {
        if (candidate.size() != n) return false;
        unsigned next_kept = 0;
        for (unsigned i = 0; i < n; ++i)
            if ((mask >> i) & 1)
                if (candidate[i] != kept[next_kept++]) return false;
        return true;
    }

    bool consistent_value(std::uint64_t value) const {
        unsigned next_kept = 0;
        for (unsigned i = 0; i < n; ++i)
            if ((mask >> i) & 1)
                if (static_cast<int>((value >> (n - 1 - i)) & 1) != kept[next_kept++])
                    return false;
        return true;
    }

    /// Number of strings matching the kept bits: 2^(n - |I|).
    std::uint64_t completion_count() const { return std::uint64_t{1} << (n - kept_count()); }
};

/// All length-n outputs of programs shorter than eps applied to the
/// encoded partial string; contains x whenever C(x | x_I) < eps.
inline std::vector<BitString> decode_list(const MachineConfig& cfg, const PartialString& partial,
                                          unsigned eps) {
    if (eps > cfg.max_program_bits)
        throw InfeasibleError("decode_list: eps exceeds the enumeration ceiling");
    const BitString condition = partial.encode();
    std::vector<BitString> list;
    std::unordered_set<BitString, BitStringHash> seen;
    const std::uint64_t limit = eps == 0 ? 0 : program_count(eps - 1);
    for (std::uint64_t idx = 0; idx < limit; ++idx) {
        RunResult r = run(cfg, program_at_index(idx), condition);
        if (!r.halted() || r.output.size() != partial.n) continue;
        if (seen.insert(r.output).second) list.push_back(r.output);
    }
    if (eps < 64 && list.size() > (std::uint64_t{1} << eps) - 1)
        throw InvariantViolation("decode_list exceeded the 2^eps - 1 cardinality bound");
    return list;
}

/// Max over all k-element index sets I of C(x | x_I); overflow when any
/// partial leaves x undescribable within the ceiling.
inline Complexity eps_holo(const Lab& lab, const BitString& x, unsigned k) {
    const unsigned n = static_cast<unsigned>(x.size());
    if (k > n) throw InfeasibleError("eps_holo requires k <= n");
    Complexity worst(0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (static_cast<unsigned>(std::popcount(mask)) != k) continue;
        Complexity c = lab.c_cond(x, PartialString::of(x, mask).encode());
        if (c.is_overflow()) return Complexity::overflow();
        if (c > worst) worst = c;
    }
    return worst;
}

inline bool is_holographic(const Lab& lab, const BitString& x, unsigned k, unsigned eps) {
    Complexity worst = eps_holo(lab, x, k);
    return !worst.is_overflow() && worst < static_cast<int>(eps);
}

struct Codebook {
    unsigned n = 0;
    unsigned k = 0;
    std::vector<std::uint64_t> members;  // sorted numeric values of length-n strings
    std::string provenance;

    bool contains(std::uint64_t value) const {
        return std::binary_search(members.begin(), members.end(), value);
    }
};

inline constexpr unsigned kHolographicCensusMaxLength = 5;

/// All (eps, k)-holographic strings of length n.
inline Codebook census_holographic(const Lab& lab, unsigned n, unsigned k, unsigned eps) {
    if (n == 0 || n > kHolographicCensusMaxLength)
        throw InfeasibleError("holographic census requires 1 <= n <= " +
                              std::to_string(kHolographicCensusMaxLength));
    Codebook book;
    book.n = n;
    book.k = k;
    book.provenance = "holographic-census";
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
        if (is_holographic(lab, BitString::from_value(v, n), k, eps)) book.members.push_back(v);
    return book;
}

/// A family of equal-size subsets of {0,1}^n: explicit bitmaps for small
/// universes, erasure patterns or seeded random subsets for large ones.
class LossFamily {
public:
    static LossFamily explicit_sets(unsigned n, std::vector<SetBitmap> sets) {
        LossFamily family;
        family.n_ = n;
        family.kind_ = Kind::Explicit;
        family.sets_ = std::move(sets);
        return family;
    }

    static LossFamily erasure_patterns(unsigned n, std::vector<PartialString> patterns) {
        LossFamily family;
        family.n_ = n;
        family.kind_ = Kind::Erasure;
        family.patterns_ = std::move(patterns);
        return family;
    }

    static LossFamily random_subsets(unsigned n, std::uint64_t member_size, std::uint64_t count,
                                     std::uint64_t seed) {
        if (n > 48) throw InfeasibleError("loss family universe exponent above 48");
        LossFamily family;
        family.n_ = n;
        family.kind_ = Kind::Random;
        family.member_size_ = member_size;
        family.count_ = count;
        family.seed_ = seed;
        return family;
    }

    unsigned universe_exponent() const { return n_; }

    std::uint64_t size() const {
        switch (kind_) {
            case Kind::Explicit: return sets_.size();
            case Kind::Erasure: return patterns_.size();
            default: return count_;
        }
    }

    std::uint64_t member_cardinality(std::uint64_t index) const {
        switch (kind_) {
            case Kind::Explicit: return sets_[index].count();
            case Kind::Erasure: return patterns_[index].completion_count();
            default: return member_size_;
        }
    }

    const std::vector<SetBitmap>& sets() const { return sets_; }
    const std::vector<PartialString>& patterns() const { return patterns_; }

    /// Interleaved scan bitset for random-subset families: for each block
    /// of 64 values, word 2w is the per-member dedup scratch and word 2w+1
    /// holds the codebook membership bits, so one draw touches one cache
    /// line. Build it once per codebook, reuse across members.
    struct ScanContext {
        unsigned n = 0;
        std::vector<std::uint64_t> combined;

        static ScanContext build(const Codebook& codebook, unsigned n) {
            ScanContext ctx;
            ctx.n = n;
            const std::size_t words = static_cast<std::size_t>(((std::uint64_t{1} << n) + 63) / 64);
            ctx.combined.assign(words * 2, 0);
            for (std::uint64_t v : codebook.members)
                ctx.combined[(static_cast<std::size_t>(v >> 6) * 2) + 1] |=
                    std::uint64_t{1} << (v & 63);
            return ctx;
        }
    };

    /// |member(index) ∩ S| where S is given as a membership test over
    /// values plus its sorted member list.
    std::uint64_t intersection_count(std::uint64_t index, const Codebook& codebook,
                                     ScanContext* scan = nullptr) const {
        std::uint64_t count = 0;
        switch (kind_) {
            case Kind::Explicit: {
                const SetBitmap& set = sets_[index];
                for (std::uint64_t v : codebook.members)
                    if (set.contains_value(v)) ++count;
                return count;
            }
            case Kind::Erasure: {
                const PartialString& pattern = patterns_[index];
                for (std::uint64_t v : codebook.members)
                    if (pattern.consistent_value(v)) ++count;
                return count;
            }
            default: {
                SplitMix64 rng = SplitMix64::stream(seed_, index);
                const std::uint64_t value_mask = (std::uint64_t{1} << n_) - 1;
                thread_local std::vector<std::uint64_t> drawn;
                thread_local ScanContext local;
                ScanContext* ctx = scan;
                if (!ctx) {
                    local = ScanContext::build(codebook, n_);
                    ctx = &local;
                }
                std::uint64_t* combined = ctx->combined.data();
                drawn.clear();
                drawn.reserve(static_cast<std::size_t>(member_size_));
                std::uint64_t v_next = rng.next() & value_mask;
                while (drawn.size() < member_size_) {
                    const std::uint64_t v = v_next;
                    v_next = rng.next() & value_mask;
                    __builtin_prefetch(&combined[(v_next >> 6) * 2]);
                    std::uint64_t* word = &combined[(v >> 6) * 2];
                    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
                    if (*word & bit) continue;
                    *word |= bit;
                    drawn.push_back(v);
                    if (word[1] & bit) ++count;
                }
                for (std::uint64_t v : drawn)
                    combined[(v >> 6) * 2] &= ~(std::uint64_t{1} << (v & 63));
                return count;
            }
        }
    }

private:
    enum class Kind { Explicit, Erasure, Random };
    Kind kind_ = Kind::Explicit;
    unsigned n_ = 0;
    std::vector<SetBitmap> sets_;
    std::vector<PartialString> patterns_;
    std::uint64_t member_size_ = 0;
    std::uint64_t count_ = 0;
    std::uint64_t seed_ = 0;
};

/// The erasure family: all sets {x' : x'_I = x_I} over k-element index
/// sets I and kept-bit patterns. Each member has exactly 2^(n-k) elements.
inline LossFamily erasure_family(unsigned n, unsigned k) {
    if (k > n || n > 48) throw InfeasibleError("erasure family requires k <= n <= 48");
    std::vector<PartialString> patterns;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (static_cast<unsigned>(std::popcount(mask)) != k) continue;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
            PartialString pattern;
            pattern.n = n;
            pattern.mask = mask;
            pattern.kept = BitString::from_value(bits, k);
            patterns.push_back(std::move(pattern));
        }
    }
    return LossFamily::erasure_patterns(n, std::move(patterns));
}

/// Materializes every member as an explicit bitmap (small universes only);
/// the cross-check for the generator representation.
inline std::vector<SetBitmap> materialize_erasure_family(unsigned n, unsigned k) {
    if (n > 6) throw InfeasibleError("cannot materialize erasure family above n = 6");
    std::vector<SetBitmap> sets;
    std::unordered_set<std::uint64_t> seen;
    LossFamily family = erasure_family(n, k);
    for (const auto& pattern : family.patterns()) {
        SetBitmap set(n, 0);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
            if (pattern.consistent_value(v)) set.insert_value(v);
        if (seen.insert(set.mask()).second) sets.push_back(set);
    }
    return sets;
}

/// The thresholding construction: keep y iff every family member holding y
/// explains it within D_thr bits given the member's bitmap as condition.
/// Distinct outputs need distinct programs, so |A ∩ S| < 2^D_thr exactly.
inline Codebook threshold_codebook(const Lab& lab, const std::vector<SetBitmap>& family,
                                   unsigned n, unsigned d_thr) {
    Codebook book;
    book.n = n;
    book.provenance = "threshold";
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        BitString y = BitString::from_value(v, n);
        bool keep = true;
        for (const auto& member : family) {
            if (!member.contains_value(v)) continue;
            Complexity c = lab.c_cond(y, member.to_bits());
            if (!(c < static_cast<int>(d_thr))) {
                keep = false;
                break;
            }
        }
        if (keep) book.members.push_back(v);
    }
    for (const auto& member : family) {
        std::uint64_t count = 0;
        for (std::uint64_t v : book.members)
            if (member.contains_value(v)) ++count;
        if (d_thr >= 64) continue;
        if (count > (std::uint64_t{1} << d_thr) - 1)
            throw InvariantViolation("threshold codebook intersection bound violated");
    }
    return book;
}

inline constexpr std::uint64_t kSampleMembersCap = std::uint64_t{1} << 24;

/// Random codebook of the appendix construction: |S| ~ Binomial(2^n, p)
/// with p = 2^-(n-k-1), then a uniform subset of that size; the two-step
/// draw has exactly the i.i.d.-inclusion distribution.
inline Codebook sample_codebook(unsigned n, unsigned k, std::uint64_t seed) {
    if (n > 40 || k + 2 > n) throw InfeasibleError("sample_codebook requires k <= n-2, n <= 40");
    const unsigned j = n - k - 1;
    if ((std::uint64_t{1} << (k + 1)) > kSampleMembersCap / 4)
        throw InfeasibleError("sample_codebook: expected size too large to materialize");
    SplitMix64 size_rng = SplitMix64::stream(seed, 0);
    std::uint64_t size = binomial_pow2(size_rng, std::uint64_t{1} << n, j);
    if (size > kSampleMembersCap) throw InfeasibleError("sampled codebook too large");
    SplitMix64 subset_rng = SplitMix64::stream(seed, 1);
    Codebook book;
    book.n = n;
    book.k = k;
    book.members = distinct_subset(subset_rng, std::uint64_t{1} << n, size);
    book.provenance = "sampled(seed=" + std::to_string(seed) + ")";
    return book;
}

inline unsigned default_list_bound(std::uint64_t family_size) {
    return static_cast<unsigned>(std::bit_width(family_size) -
                                 (std::popcount(family_size) == 1 ? 1 : 0)) +
           1;  // ceil(log2 |A|) + 1
}

struct VerifyReport {
    bool size_ok = false;
    std::uint64_t codebook_size = 0;
    std::uint64_t max_intersection = 0;
    bool all_bounded = false;
    std::map<std::uint64_t, std::uint64_t> histogram;  // intersection size -> members
};

inline VerifyReport verify_codebook(const Codebook& codebook, const LossFamily& family,
                                    unsigned list_bound) {
    VerifyReport report;
    report.codebook_size = codebook.members.size();
    report.size_ok = report.codebook_size >= (std::uint64_t{1} << codebook.k);

    LossFamily::ScanContext scan;
    LossFamily::ScanContext* scan_ptr = nullptr;
    if (family.universe_exponent() <= 28) {
        scan = LossFamily::ScanContext::build(codebook, family.universe_exponent());
        scan_ptr = &scan;
    }

    for (std::uint64_t i = 0; i < family.size(); ++i) {
        std::uint64_t count = family.intersection_count(i, codebook, scan_ptr);
        ++report.histogram[count];
        if (count > report.max_intersection) report.max_intersection = count;
    }
    report.all_bounded = report.max_intersection <= list_bound;
    return report;
}

/// Erasure list decoding: the codewords consistent with the surviving bits.
inline std::vector<std::uint64_t> list_decode(const Codebook& codebook,
                                              const PartialString& partial) {
    std::vector<std::uint64_t> list;
    for (std::uint64_t v : codebook.members)
        if (partial.consistent_value(v)) list.push_back(v);
    return list;
}

}  // namespace aslab
