#pragma once

// The advice decoder: recover x from any small set A containing it plus a
// short structured advice record. The decoder has free access to the
// enumeration (it recomputes set complexities, indices and Omega tables);
// only the advice fields are charged as information about x.
//
// Two paths mirror the proof. The OMEGA path derives the leading bits of
// the set-universe Omega from A's enumeration index, corrects the induced
// string-universe estimate with an advice delta, and finishes with the
// waiting decoder. The COVER path rebuilds the chunk family around A,
// thresholds by the advised cover count and picks the advised element of
// the covered set. Sets whose complexity overflows the ceiling degenerate
// to the singleton family {A}, which reduces the COVER path to "index of
// x inside A".

#include <bit>
#include <optional>
#include <vector>

#include "aslab/antistochastic.hpp"

namespace aslab {

struct PrefixSplit {
    unsigned width = 0;  // numeral width = bitlength(Omega)
    unsigned m = 0;      // common leading bits of N and Omega
    unsigned l = 0;      // width - m
    std::uint64_t a = 0; // common prefix value
    std::uint64_t b = 0; // low l bits of N
    std::uint64_t c = 0; // low l bits of Omega
};

inline PrefixSplit prefix_split(std::uint64_t n_index, std::uint64_t omega) {
    if (n_index < 1 || n_index > omega)
        throw InvariantViolation("prefix_split requires 1 <= N <= Omega");
    PrefixSplit split;
    split.width = static_cast<unsigned>(std::bit_width(omega));
    split.l = static_cast<unsigned>(std::bit_width(n_index ^ omega));
    split.m = split.width - split.l;
    split.a = omega >> split.l;
    const std::uint64_t low = split.l == 64 ? ~std::uint64_t{0}
                                            : (std::uint64_t{1} << split.l) - 1;
    split.b = n_index & low;
    split.c = omega & low;
    // type invariants, exact
    if (n_index != (split.a << split.l) + split.b || omega != (split.a << split.l) + split.c)
        throw InvariantViolation("prefix split reconstruction identity failed");
    if (!(split.b <= split.c && (split.l == 64 || split.c < (std::uint64_t{1} << split.l))))
        throw InvariantViolation("prefix split remainder ordering failed");
    if (split.l > 0) {
        const std::uint64_t half = std::uint64_t{1} << (split.l - 1);
        if (!(split.b < half && half <= split.c))
            throw InvariantViolation("prefix split half-point invariant failed");
    }
    return split;
}

/// 1-based position of A's first appearance among sets of complexity at
/// most c_set(A) in enumeration order.
inline std::uint64_t index_of(const Lab& lab, const SetBitmap& set) {
    Complexity c = lab.c_set(set);
    if (c.is_overflow())
        throw InvariantViolation("index_of: set complexity overflows the ceiling");
    const unsigned budget = static_cast<unsigned>(c.bits());
    auto stream = lab.enumeration().set_appearance_stream(budget, set.universe_exponent());
    const BitString bitmap = set.to_bits();
    for (std::uint64_t i = 0; i < stream.size(); ++i)
        if (lab.enumeration().output(stream[i].output_id) == bitmap) return i + 1;
    throw InvariantViolation("index_of: set missing from its own appearance stream");
}

struct ChunkFamily {
    unsigned n = 0;
    unsigned k = 0;
    PrefixSplit split;
    std::uint64_t chunk_index = 0;
    std::vector<SetBitmap> chunk;    // the complete chunk containing A
    std::vector<SetBitmap> family;   // chunk members with |A'| <= 2^(n-k)
};

/// Chops the set enumeration at budget c_set(A) into chunks of size
/// 2^(l-1) (or 1 when l = 0); A's chunk is complete by the prefix choice.
inline ChunkFamily chunk_family(const Lab& lab, const SetBitmap& set, unsigned k) {
    const unsigned n = set.universe_exponent();
    if (k > n) throw InfeasibleError("chunk_family requires k <= n");
    const std::uint64_t max_card = std::uint64_t{1} << (n - k);
    if (set.count() > max_card)
        throw InvariantViolation("chunk_family: |A| exceeds 2^(n-k)");
    Complexity c = lab.c_set(set);
    if (c.is_overflow())
        throw InvariantViolation("chunk_family: set complexity overflows the ceiling");
    const unsigned budget = static_cast<unsigned>(c.bits());

    ChunkFamily result;
    result.n = n;
    result.k = k;
    const std::uint64_t n_index = index_of(lab, set);
    const std::uint64_t omega_set = lab.omega_set(budget, n);
    result.split = prefix_split(n_index, omega_set);
    const std::uint64_t size =
        result.split.l == 0 ? 1 : std::uint64_t{1} << (result.split.l - 1);
    result.chunk_index = (n_index - 1) / size;

    auto stream = lab.enumeration().set_appearance_stream(budget, n);
    const std::uint64_t begin = result.chunk_index * size;
    const std::uint64_t end = begin + size;
    if (end > stream.size())
        throw InvariantViolation("chunk containing A is incomplete (prefix argument broken)");
    bool found = false;
    for (std::uint64_t i = begin; i < end; ++i) {
        SetBitmap member = SetBitmap::from_bits(lab.enumeration().output(stream[i].output_id));
        if (member == set) found = true;
        result.chunk.push_back(member);
        if (member.count() <= max_card) result.family.push_back(member);
    }
    if (!found) throw InvariantViolation("A missing from its own chunk");
    if (result.family.size() > (std::uint64_t{1} << result.split.l))
        throw InvariantViolation("filtered family exceeds 2^l members");
    return result;
}

/// Strings covered by at least `threshold` members, ascending.
inline std::vector<BitString> covered_set(const std::vector<SetBitmap>& family,
                                          unsigned threshold, unsigned n) {
    std::vector<BitString> covered;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        unsigned count = 0;
        for (const auto& member : family)
            if (member.contains_value(v)) ++count;
        if (count >= threshold) covered.push_back(BitString::from_value(v, n));
    }
    return covered;
}

struct CoveringModel {
    unsigned cover_count = 0;              // K: members of the family containing x
    std::vector<BitString> covered;        // B, lexicographically ascending
    std::uint64_t total_member_cardinality = 0;
};

inline CoveringModel covering_model(const std::vector<SetBitmap>& family, const BitString& x,
                                    unsigned n) {
    CoveringModel model;
    for (const auto& member : family) {
        if (member.contains(x)) ++model.cover_count;
        model.total_member_cardinality += member.count();
    }
    if (model.cover_count == 0)
        throw InvariantViolation("covering_model: x is not covered by the family");
    model.covered = covered_set(family, model.cover_count, n);
    // exact counting bound |B| * K <= sum of member cardinalities
    if (model.covered.size() * model.cover_count > model.total_member_cardinality)
        throw InvariantViolation("covering bound |B| * K <= sum |A'| violated");
    bool has_x = false;
    for (const auto& y : model.covered)
        if (y == x) has_x = true;
    if (!has_x) throw InvariantViolation("covering_model: x missing from B");
    return model;
}

struct OmegaPrefixEstimate {
    std::uint64_t estimate = 0;
    std::uint64_t delta = 0;  // true Omega_l - estimate, always >= 0
};

/// From the leading l bits of Omega_m (value `a` in the fixed-width
/// numeral), run the budget-m enumeration until a * 2^(width-l) distinct
/// strings have appeared and count how many of them have complexity <= l.
/// The correction delta tops the estimate up to Omega_l exactly.
inline OmegaPrefixEstimate omega_from_prefix(const Lab& lab, std::uint64_t a, unsigned m,
                                             unsigned l) {
    if (l > m || m > lab.config().max_program_bits)
        throw InfeasibleError("omega_from_prefix requires l <= m <= the enumeration ceiling");
    const std::uint64_t omega_m = lab.omega(m);
    const unsigned width = std::max<unsigned>(m, static_cast<unsigned>(std::bit_width(omega_m)));
    if (l < 64 && a >= (std::uint64_t{1} << l))
        throw InvariantViolation("omega_from_prefix: prefix value wider than l bits");
    const std::uint64_t threshold = a << (width - l);
    if (threshold > omega_m)
        throw InvariantViolation("omega_from_prefix: malformed prefix exceeds Omega_m");
    const auto& stream = lab.enumeration().appearance_stream(m);
    OmegaPrefixEstimate result;
    for (std::uint64_t i = 0; i < threshold; ++i) {
        const auto& entry = lab.enumeration().table().entries()[stream[i].output_id];
        if (entry.complexity <= l) ++result.estimate;
    }
    result.delta = lab.omega(l) - result.estimate;
    return result;
}

/// The l leading bits of Omega_m in the same fixed-width convention.
inline std::uint64_t omega_prefix_value(const Lab& lab, unsigned m, unsigned l) {
    const std::uint64_t omega_m = lab.omega(m);
    const unsigned width = std::max<unsigned>(m, static_cast<unsigned>(std::bit_width(omega_m)));
    return omega_m >> (width - l);
}

// --- advice records ---------------------------------------------------

inline void append_varint(std::vector<std::uint8_t>& out, std::uint64_t value) {
    do {
        std::uint8_t group = value & 0x7f;
        value >>= 7;
        out.push_back(group | (value ? 0x80 : 0));
    } while (value);
}

inline std::uint64_t read_varint(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
    std::uint64_t value = 0;
    unsigned shift = 0;
    while (true) {
        if (pos >= bytes.size()) throw InvariantViolation("advice varint truncated");
        std::uint8_t group = bytes[pos++];
        value |= static_cast<std::uint64_t>(group & 0x7f) << shift;
        if (!(group & 0x80)) return value;
        shift += 7;
        if (shift >= 64) throw InvariantViolation("advice varint too wide");
    }
}

struct Advice {
    enum class Path : std::uint8_t { Omega = 0, Cover = 1 };
    Path path = Path::Omega;
    std::uint64_t k = 0;   // OMEGA: complexity budget c(x); COVER: family parameter
    std::uint64_t f2 = 0;  // OMEGA: j (count after); COVER: cover count K
    std::uint64_t f3 = 0;  // OMEGA: delta;           COVER: index of x within B

    BitString encode() const {
        std::vector<std::uint8_t> bytes;
        append_varint(bytes, k);
        append_varint(bytes, f2);
        append_varint(bytes, f3);
        BitString bits;
        bits.push_back(path == Path::Cover ? 1 : 0);
        for (std::uint8_t b : bytes)
            for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
        return bits;
    }

    static Advice decode(const BitString& bits) {
        if (bits.empty() || (bits.size() - 1) % 8 != 0)
            throw InvariantViolation("advice record has invalid length");
        Advice advice;
        advice.path = bits[0] ? Path::Cover : Path::Omega;
        std::vector<std::uint8_t> bytes((bits.size() - 1) / 8, 0);
        for (std::size_t i = 0; i + 1 < bits.size(); ++i)
            if (bits[i + 1]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
        std::size_t pos = 0;
        advice.k = read_varint(bytes, pos);
        advice.f2 = read_varint(bytes, pos);
        advice.f3 = read_varint(bytes, pos);
        if (pos != bytes.size()) throw InvariantViolation("advice record has trailing bytes");
        return advice;
    }

    std::size_t bit_length() const { return encode().size(); }
};

namespace detail {

/// Count of strings of complexity <= k among the outputs that appear in the
/// budget-c_A stream up to and including the threshold-th set appearance.
inline std::uint64_t estimate_from_set_prefix(const Lab& lab, unsigned c_A, unsigned n,
                                              std::uint64_t threshold_sets, unsigned k) {
    if (threshold_sets == 0) return 0;
    const auto& stream = lab.enumeration().appearance_stream(c_A);
    const std::uint64_t bitmap_len = std::uint64_t{1} << n;
    std::uint64_t sets_seen = 0;
    std::uint64_t estimate = 0;
    for (const auto& event : stream) {
        const auto& entry = lab.enumeration().table().entries()[event.output_id];
        if (entry.complexity <= k) ++estimate;
        if (entry.output.size() == bitmap_len) {
            if (++sets_seen == threshold_sets) return estimate;
        }
    }
    throw InvariantViolation("set prefix threshold exceeds the set count");
}

inline std::vector<SetBitmap> decoder_family(const Lab& lab, const SetBitmap& set, unsigned k) {
    if (lab.c_set(set).is_overflow()) return {set};  // degenerate singleton family
    return chunk_family(lab, set, k).family;
}

}  // namespace detail

/// Builds the shorter of the two advice records for recovering x from A.
/// k is the admissibility parameter: |A| must be at most 2^(n-k).
inline Advice encode_advice(const Lab& lab, const BitString& x, const SetBitmap& set,
                            unsigned k) {
    const unsigned n = set.universe_exponent();
    if (x.size() != n || !set.contains(x))
        throw InvariantViolation("encode_advice requires x in A");
    if (k > n || set.count() > (std::uint64_t{1} << (n - k)))
        throw InvariantViolation("encode_advice requires |A| <= 2^(n-k)");

    std::optional<Advice> omega_path;
    Complexity k_x = lab.c(x);
    Complexity c_A = lab.c_set(set);
    if (!k_x.is_overflow() && !c_A.is_overflow()) {
        const unsigned budget = static_cast<unsigned>(c_A.bits());
        const std::uint64_t n_index = index_of(lab, set);
        const std::uint64_t omega_set = lab.omega_set(budget, n);
        PrefixSplit split = prefix_split(n_index, omega_set);
        const std::uint64_t threshold = split.a << split.l;
        const unsigned kx_bits = static_cast<unsigned>(k_x.bits());
        std::uint64_t estimate =
            detail::estimate_from_set_prefix(lab, budget, n, threshold, kx_bits);
        Advice advice;
        advice.path = Advice::Path::Omega;
        advice.k = kx_bits;
        advice.f2 = lab.count_after(x, kx_bits);
        advice.f3 = lab.omega(kx_bits) - estimate;
        omega_path = advice;
    }

    std::vector<SetBitmap> family = detail::decoder_family(lab, set, k);
    CoveringModel model = covering_model(family, x, n);
    std::uint64_t rank = 0;
    while (!(model.covered[rank] == x)) ++rank;
    Advice cover;
    cover.path = Advice::Path::Cover;
    cover.k = k;
    cover.f2 = model.cover_count;
    cover.f3 = rank;

    if (omega_path && omega_path->bit_length() < cover.bit_length()) return *omega_path;
    return cover;
}

/// Runs the decoder: everything except the advice fields is recomputed
/// from A and the enumeration.
inline BitString reconstruct_string(const Lab& lab, const SetBitmap& set, const Advice& advice) {
    const unsigned n = set.universe_exponent();
    if (advice.path == Advice::Path::Omega) {
        Complexity c_A = lab.c_set(set);
        if (c_A.is_overflow())
            throw InvariantViolation("OMEGA advice for a set above the complexity ceiling");
        const unsigned budget = static_cast<unsigned>(c_A.bits());
        const std::uint64_t n_index = index_of(lab, set);
        const std::uint64_t omega_set = lab.omega_set(budget, n);
        PrefixSplit split = prefix_split(n_index, omega_set);
        const std::uint64_t threshold = split.a << split.l;
        const unsigned k = static_cast<unsigned>(advice.k);
        std::uint64_t estimate = detail::estimate_from_set_prefix(lab, budget, n, threshold, k);
        std::uint64_t omega_k = estimate + advice.f3;
        return decode_from_omega(lab, omega_k, OmegaAdvice{k, advice.f2});
    }
    std::vector<SetBitmap> family =
        detail::decoder_family(lab, set, static_cast<unsigned>(advice.k));
    std::vector<BitString> covered =
        covered_set(family, static_cast<unsigned>(advice.f2), n);
    if (advice.f3 >= covered.size())
        throw InvariantViolation("COVER advice index outside the covered set");
    return covered[advice.f3];
}

struct ConverseWitness {
    SetBitmap witness;
    Complexity set_complexity;
    std::size_t advice_bits = 0;
};

/// Searches for a set refuting delta-antistochasticity at parameter k: a
/// describable A containing x with |A| <= 2^(n-k) and c_set(A) < k - delta.
/// Returns the cheapest such witness with the measured advice length for
/// reconstructing x from it, or nothing when x is delta-antistochastic in
/// this parameterized sense.
inline std::optional<ConverseWitness> converse_check(const Lab& lab, const BitString& x,
                                                     unsigned k, int delta) {
    const unsigned n = static_cast<unsigned>(x.size());
    if (n > 6 || k > n) throw InfeasibleError("converse_check requires k <= n <= 6");
    const std::uint64_t max_card = std::uint64_t{1} << (n - k);
    const std::uint64_t want = std::uint64_t{1} << n;
    std::optional<ConverseWitness> best;
    for (const auto& e : lab.enumeration().table().entries()) {
        if (e.output.size() != want) continue;
        if (static_cast<int>(e.complexity) >= static_cast<int>(k) - delta) continue;
        SetBitmap candidate = SetBitmap::from_bits(e.output);
        if (!candidate.contains(x) || candidate.count() > max_card) continue;
        if (!best || Complexity(e.complexity) < best->set_complexity ||
            (Complexity(e.complexity) == best->set_complexity &&
             candidate.mask() < best->witness.mask())) {
            ConverseWitness witness;
            witness.witness = candidate;
            witness.set_complexity = Complexity(e.complexity);
            witness.advice_bits = encode_advice(lab, x, candidate, k).bit_length();
            best = witness;
        }
    }
    return best;
}

}  // namespace aslab
