#pragma once

// The exclusion construction: x* is the least string of length n avoiding
// every describable set of complexity under k and cardinality at most
// 2^(n-k). Counting makes existence exact: fewer than 2^k such sets, each
// with at most 2^(n-k) strings, cannot cover all 2^n strings.
//
// Also here: the deficiency census, the Omega-advice decoder (find x from
// Omega_k and the count of later-appearing strings), and the enumeration
// portion bookkeeping behind that decoder's profile pair.

#include <bit>
#include <optional>
#include <vector>

#include "aslab/profiles.hpp"

namespace aslab {

inline constexpr unsigned kConstructMaxLength = 5;
inline constexpr unsigned kCensusMaxLength = 4;

struct ExclusionFamily {
    unsigned n = 0;
    unsigned k = 0;
    std::vector<SetBitmap> members;  // c_set < k and |A| <= 2^(n-k)
    SetBitmap union_set;

    std::uint64_t union_size() const { return union_set.count(); }
};

inline ExclusionFamily exclusion_family(const Lab& lab, unsigned n, unsigned k) {
    if (n == 0 || n > kConstructMaxLength || k == 0 || k > n)
        throw InfeasibleError("exclusion family requires 1 <= k <= n <= " +
                              std::to_string(kConstructMaxLength));
    ExclusionFamily family;
    family.n = n;
    family.k = k;
    family.union_set = SetBitmap::empty_set(n);
    const std::uint64_t want = std::uint64_t{1} << n;
    const std::uint64_t max_card = std::uint64_t{1} << (n - k);
    for (const auto& e : lab.enumeration().table().entries()) {
        if (e.output.size() != want) continue;
        if (e.complexity >= k) continue;  // strict: complexity less than k
        SetBitmap set = SetBitmap::from_bits(e.output);
        if (set.count() > max_card) continue;
        family.members.push_back(set);
        family.union_set = family.union_set.united(set);
    }
    // counting invariants from the proof, exact
    const std::uint64_t program_bound = (std::uint64_t{1} << k) - 1;
    if (family.members.size() > program_bound)
        throw InvariantViolation("exclusion family larger than the count of short programs");
    if (family.union_size() > program_bound * max_card || family.union_size() >= want)
        throw InvariantViolation("exclusion family union bound violated");
    return family;
}

struct ConstructReport {
    BitString x;
    unsigned n = 0;
    unsigned k = 0;
    std::uint64_t family_size = 0;
    std::uint64_t union_size = 0;
    Complexity c_x;
    Complexity c_singleton;
    std::optional<int> epsilon_star;       // absent when c(x) overflows
    bool lemma3_at_one = false;            // with the construction parameter k
};

/// The least string of length n outside the exclusion family's union.
inline BitString construct_antistochastic(const Lab& lab, unsigned n, unsigned k) {
    ExclusionFamily family = exclusion_family(lab, n, k);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
        if (!family.union_set.contains_value(v)) return BitString::from_value(v, n);
    throw InvariantViolation("exclusion union covers the universe (counting broken)");
}

inline ConstructReport construct_report(const Lab& lab, unsigned n, unsigned k) {
    ExclusionFamily family = exclusion_family(lab, n, k);
    ConstructReport report;
    report.n = n;
    report.k = k;
    report.family_size = family.members.size();
    report.union_size = family.union_size();
    report.x = construct_antistochastic(lab, n, k);
    report.c_x = lab.c(report.x);
    report.c_singleton = lab.c_set(SetBitmap::singleton(report.x));
    StructureFunction sf = profile(lab, report.x);
    if (!report.c_x.is_overflow()) report.epsilon_star = deficiency(sf);
    report.lemma3_at_one = lemma3_check(sf, static_cast<int>(k), 1);
    return report;
}

struct CensusRow {
    BitString x;
    Complexity c;
    std::optional<int> epsilon_star;  // absent when c(x) overflows
    Complexity c_singleton;
    Complexity c_given_omega;  // c(x | Omega_{c(x)} numeral), the measured
                               // machine-conditional cost of the decoder
};

/// Full deficiency table over {0,1}^n.
inline std::vector<CensusRow> census(const Lab& lab, unsigned n) {
    if (n == 0 || n > kCensusMaxLength)
        throw InfeasibleError("census requires 1 <= n <= " + std::to_string(kCensusMaxLength));
    std::vector<CensusRow> rows;
    rows.reserve(std::size_t{1} << n);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        CensusRow row;
        row.x = BitString::from_value(v, n);
        row.c = lab.c(row.x);
        row.c_singleton = lab.c_set(SetBitmap::singleton(row.x));
        if (!row.c.is_overflow()) {
            StructureFunction sf = profile(lab, row.x);
            row.epsilon_star = deficiency(sf);
            row.c_given_omega =
                lab.c_cond(row.x, lab.omega_numeral(static_cast<unsigned>(row.c.bits())));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Count of eps-antistochastic strings of complexity k in a census; rows
/// with overflow quantities are excluded (they are reported separately).
inline std::uint64_t census_count(const std::vector<CensusRow>& rows, int k, int eps) {
    std::uint64_t count = 0;
    for (const auto& row : rows)
        if (row.c == Complexity(k) && row.epsilon_star && *row.epsilon_star <= eps) ++count;
    return count;
}

struct OmegaAdvice {
    unsigned k = 0;      // complexity budget
    std::uint64_t j = 0; // count of strings appearing after x, the proof's N
};

/// Inverts the waiting argument: given Omega_k and the number of strings
/// that appear after x among those of complexity <= k, recover x.
inline BitString decode_from_omega(const Lab& lab, std::uint64_t omega_k,
                                   const OmegaAdvice& advice) {
    std::uint64_t actual = lab.omega(advice.k);
    if (omega_k != actual)
        throw InvariantViolation("decode_from_omega: numeral does not match Omega_" +
                                 std::to_string(advice.k));
    if (advice.j >= omega_k)
        throw InvariantViolation("decode_from_omega: advice index out of range");
    const auto& stream = lab.enumeration().appearance_stream(advice.k);
    const auto& event = stream[stream.size() - 1 - advice.j];
    return lab.enumeration().output(event.output_id);
}

struct PortionReport {
    unsigned l = 0;                   // floor(log2 j)
    std::uint64_t portion_index = 0;  // which complete portion holds x
    std::vector<BitString> portion;   // the portion itself, appearance order
    bool complete = false;
    bool contains_x = false;
    bool embeddable = false;          // all members have length |x|
    Complexity portion_set_complexity;  // c_set of the portion when embeddable
    int k_minus_l = 0;                // the paper-side first coordinate k - l
};

/// Chops the budget-k appearance stream into portions of size 2^l with
/// l = floor(log2 j); x lands in a complete portion because j >= 2^l
/// strings still follow it.
inline PortionReport portion_pairs(const Lab& lab, const BitString& x, unsigned k) {
    std::uint64_t j = lab.count_after(x, k);
    if (j == 0) throw InvariantViolation("portion_pairs requires count_after(x,k) > 0");
    PortionReport report;
    report.l = static_cast<unsigned>(std::bit_width(j) - 1);
    const std::uint64_t size = std::uint64_t{1} << report.l;
    const auto& stream = lab.enumeration().appearance_stream(k);
    std::uint64_t rank = lab.enumeration().appearance_rank(x, k);
    report.portion_index = rank / size;
    const std::uint64_t begin = report.portion_index * size;
    const std::uint64_t end = begin + size;
    report.complete = end <= stream.size();
    if (!report.complete)
        throw InvariantViolation("portion containing x is incomplete (chopping argument broken)");
    report.portion.reserve(size);
    bool embeddable = x.size() <= 6;
    for (std::uint64_t i = begin; i < end; ++i) {
        const BitString& member = lab.enumeration().output(stream[i].output_id);
        if (member.size() != x.size()) embeddable = false;
        report.portion.push_back(member);
        if (member == x) report.contains_x = true;
    }
    report.embeddable = embeddable;
    if (embeddable) {
        SetBitmap set = SetBitmap::empty_set(static_cast<unsigned>(x.size()));
        for (const auto& member : report.portion) set.insert(member);
        report.portion_set_complexity = lab.c_set(set);
    }
    report.k_minus_l = static_cast<int>(k) - static_cast<int>(report.l);
    return report;
}

}  // namespace aslab
