#pragma once

// Structure functions: for a string x the function h(l) is the least
// complexity of a describable set containing x with ceil(log2 |A|) <= l.
// The profile P_x is {(m, l) : m >= h(l)}; the antistochasticity
// deficiency is the least eps making every boundary pair (h(l), l)
// satisfy h(l) > k - eps or h(l) + l > n - eps (strict, as defined).

#include <algorithm>
#include <optional>
#include <vector>

#include "aslab/lab.hpp"

namespace aslab {

inline constexpr unsigned kProfileMaxLength = 5;  // bitmap universe 2^n <= 32

struct StructureFunction {
    BitString x;
    unsigned n = 0;              // |x|
    Complexity k;                // c(x)
    std::vector<Complexity> h;   // indexed by l in [0..n], nonincreasing

    bool in_profile(Complexity m, unsigned l) const {
        if (l > n) l = n;
        return !h[l].is_overflow() && m >= h[l];
    }
    // negative m never names a set complexity
    bool in_profile(int m, unsigned l) const { return m >= 0 && in_profile(Complexity(m), l); }
};

inline StructureFunction profile(const Lab& lab, const BitString& x) {
    const unsigned n = static_cast<unsigned>(x.size());
    if (n > kProfileMaxLength)
        throw InfeasibleError("profile: string length exceeds the feasibility cutoff of " +
                              std::to_string(kProfileMaxLength));
    StructureFunction sf;
    sf.x = x;
    sf.n = n;
    sf.k = lab.c(x);
    sf.h.assign(n + 1, Complexity::overflow());

    const std::uint64_t want = std::uint64_t{1} << n;
    for (const auto& e : lab.enumeration().table().entries()) {
        if (e.output.size() != want) continue;
        SetBitmap set = SetBitmap::from_bits(e.output);
        if (!set.contains(x)) continue;
        unsigned l = ceil_log2_count(set.count());
        Complexity m(e.complexity);
        if (m < sf.h[l]) sf.h[l] = m;
    }
    for (unsigned l = 1; l <= n; ++l)
        if (sf.h[l - 1] < sf.h[l]) sf.h[l] = sf.h[l - 1];
    return sf;
}

/// Deficiency by direct scan over candidate eps values.
inline int deficiency_scan(const StructureFunction& sf) {
    const int k = sf.k.bits();
    const int n = static_cast<int>(sf.n);
    for (int eps = 0;; ++eps) {
        bool ok = true;
        for (unsigned l = 0; l <= sf.n && ok; ++l) {
            if (sf.h[l].is_overflow()) continue;
            int m = sf.h[l].bits();
            if (!(m > k - eps || m + static_cast<int>(l) > n - eps)) ok = false;
        }
        if (ok) return eps;
    }
}

/// Deficiency in closed form: a pair (m, l) tolerates eps iff
/// eps > min(k - m, n - m - l), so the least workable eps is the max over
/// boundary pairs of that minimum plus one (clamped at zero).
inline int deficiency_closed_form(const StructureFunction& sf) {
    const int k = sf.k.bits();
    const int n = static_cast<int>(sf.n);
    int eps = 0;
    for (unsigned l = 0; l <= sf.n; ++l) {
        if (sf.h[l].is_overflow()) continue;
        int m = sf.h[l].bits();
        eps = std::max(eps, std::min(k - m, n - m - static_cast<int>(l)) + 1);
    }
    return eps;
}

inline int deficiency(const StructureFunction& sf) {
    if (sf.k.is_overflow())
        throw InfeasibleError("deficiency: c(x) overflows the enumeration ceiling");
    return deficiency_scan(sf);
}

/// Lemma-style sufficient condition with an explicit complexity parameter:
/// true iff the pair (k - eps, n - k) is outside the profile. For k > n
/// there are no sets of negative log-cardinality, so the check is
/// vacuously true.
inline bool lemma3_check(const StructureFunction& sf, int k, int eps) {
    if (k > static_cast<int>(sf.n)) return true;
    unsigned l = static_cast<unsigned>(sf.n - k);
    return !sf.in_profile(k - eps, l);
}

inline bool lemma3_check(const StructureFunction& sf, int eps) {
    if (sf.k.is_overflow())
        throw InfeasibleError("lemma3_check: c(x) overflows the enumeration ceiling");
    return lemma3_check(sf, sf.k.bits(), eps);
}

/// Reference curves for a string of length n and complexity k: the minimal
/// profile {(m,l) : m+l >= n or m >= k} and the maximal {(m,l) : m+l >= k}.
struct ReferenceCurves {
    unsigned n = 0;
    int k = 0;

    int pmin_boundary(unsigned l) const {
        int by_sum = std::max(static_cast<int>(n) - static_cast<int>(l), 0);
        return std::min(by_sum, std::max(k, 0));
    }
    int pmax_boundary(unsigned l) const {
        return std::max(k - static_cast<int>(l), 0);
    }
    bool in_pmin(int m, unsigned l) const {
        return m + static_cast<int>(l) >= static_cast<int>(n) || m >= k;
    }
    bool in_pmax(int m, unsigned l) const { return m + static_cast<int>(l) >= k; }
};

/// Measured machine-relative slack. The paper-level inclusions hold only up
/// to universal-machine constants, so they are reported, never asserted.
struct ProfileSlack {
    // max over finite boundary pairs of k - h(l) - l; positive values
    // measure how far the profile dips under the maximal curve's boundary
    std::optional<int> delta_max;
    // max over finite boundary pairs of h(l) - pmin_boundary(l); positive
    // values measure failure of the minimal-curve inclusion
    std::optional<int> pmin_excess;
    // trade-off property: (m,l) in P_x should give (m+i, l-i) in P_x;
    // max finite violation of h(l-i) <= h(l) + i, plus the count of (l,i)
    // pairs where h(l-i) overflows outright
    std::optional<int> tradeoff_violation;
    unsigned tradeoff_overflow_pairs = 0;
};

inline ProfileSlack profile_slack(const StructureFunction& sf) {
    ProfileSlack slack;
    if (sf.k.is_overflow()) return slack;
    const int k = sf.k.bits();
    ReferenceCurves ref{sf.n, k};
    for (unsigned l = 0; l <= sf.n; ++l) {
        if (sf.h[l].is_overflow()) continue;
        int m = sf.h[l].bits();
        int delta = k - m - static_cast<int>(l);
        if (!slack.delta_max || delta > *slack.delta_max) slack.delta_max = delta;
        int excess = m - ref.pmin_boundary(l);
        if (!slack.pmin_excess || excess > *slack.pmin_excess) slack.pmin_excess = excess;
        for (unsigned i = 1; i <= l; ++i) {
            if (sf.h[l - i].is_overflow()) {
                ++slack.tradeoff_overflow_pairs;
                continue;
            }
            int violation = sf.h[l - i].bits() - (m + static_cast<int>(i));
            if (!slack.tradeoff_violation || violation > *slack.tradeoff_violation)
                slack.tradeoff_violation = violation;
        }
    }
    return slack;
}

}  // namespace aslab
