#pragma once

// Exact-rational verification of the randomized-construction inequalities:
// the variance bound sigma^2 <= 2^(k+1) for the codebook size, and the
// binomial tail chain
//   binom(2^(n-k), i) * 2^(-(n-k+1) i)  <=  2^-i / i!  <=  2^-i
// with every link checked in exact arithmetic, no floating point.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "aslab/errors.hpp"

namespace aslab {

struct BoundsChainRow {
    unsigned i = 0;
    bool binom_le_middle = false;  // binom(|A|,i) * 2^(-(n-k+1)i) <= 2^-i / i!
    bool middle_le_tail = false;   // 2^-i / i! <= 2^-i
    std::string binom_term;        // exact fraction rendering
    std::string middle_term;
    std::string tail_term;
};

struct BoundsReport {
    unsigned n = 0;
    unsigned k = 0;
    bool sigma_ok = false;
    std::string sigma_sq;     // exact fraction
    std::string sigma_bound;  // 2^(k+1)
    std::vector<BoundsChainRow> chain;
    bool chain_ok = false;

    bool all_ok() const { return sigma_ok && chain_ok; }
};

inline mpq_class pow2_rational(long exponent) {
    mpq_class q;
    if (exponent >= 0) {
        mpz_class num = 1;
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(exponent));
        q = num;
    } else {
        mpz_class den = 1;
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(-exponent));
        q = mpq_class(1, den);
    }
    q.canonicalize();
    return q;
}

/// keep_rows controls whether the per-i fraction strings are rendered
/// (they get large; grid sweeps only need the booleans).
inline BoundsReport analytic_bounds(unsigned n, unsigned k, unsigned max_i = 64,
                                    bool keep_rows = true) {
    if (n > 40 || k + 2 > n || k < 2)
        throw InfeasibleError("analytic bounds require 2 <= k <= n-2 <= 38");
    BoundsReport report;
    report.n = n;
    report.k = k;

    // sigma^2 = 2^n * p * (1-p) with p = 2^-(n-k-1), against 2^(k+1)
    const mpq_class p = pow2_rational(-static_cast<long>(n - k - 1));
    const mpq_class sigma_sq = pow2_rational(static_cast<long>(n)) * p * (1 - p);
    const mpq_class sigma_bound = pow2_rational(static_cast<long>(k) + 1);
    report.sigma_ok = sigma_sq <= sigma_bound;
    report.sigma_sq = sigma_sq.get_str();
    report.sigma_bound = sigma_bound.get_str();

    // chain over i = 1..min(|A|, max_i) with |A| = 2^(n-k)
    const unsigned nk = n - k;
    const mpz_class member_size = mpz_class(1) << nk;
    mpz_class binom = 1;        // binom(|A|, i), updated incrementally
    mpz_class factorial = 1;    // i!
    report.chain_ok = true;
    const std::uint64_t limit =
        nk >= 32 ? max_i : std::min<std::uint64_t>(max_i, std::uint64_t{1} << nk);
    for (unsigned i = 1; i <= limit; ++i) {
        binom *= member_size - (i - 1);
        binom /= i;  // exact: product of i consecutive integers over i!
        factorial *= i;

        const mpq_class decay = pow2_rational(-static_cast<long>(nk + 1) * i);
        const mpq_class binom_term = mpq_class(binom) * decay;
        const mpq_class middle = pow2_rational(-static_cast<long>(i)) / mpq_class(factorial);
        const mpq_class tail = pow2_rational(-static_cast<long>(i));

        BoundsChainRow row;
        row.i = i;
        row.binom_le_middle = binom_term <= middle;
        row.middle_le_tail = middle <= tail;
        if (keep_rows) {
            row.binom_term = binom_term.get_str();
            row.middle_term = middle.get_str();
            row.tail_term = tail.get_str();
        }
        if (!row.binom_le_middle || !row.middle_le_tail) report.chain_ok = false;
        report.chain.push_back(std::move(row));
    }
    return report;
}

}  // namespace aslab
