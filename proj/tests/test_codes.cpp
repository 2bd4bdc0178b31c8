#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "aslab/bounds.hpp"
#include "aslab/codes.hpp"

using namespace aslab;

namespace {
Lab& shared_lab() {
    static Lab lab;
    return lab;
}
}  // namespace

TEST_CASE("partial string encoding") {
    BitString x("01");
    SECTION("full index set keeps both bits") {
        PartialString partial = PartialString::of(x, 0b11);
        CHECK(partial.encode() == BitString("0001"));
    }
    SECTION("second position only") {
        PartialString partial = PartialString::of(x, 0b10);
        CHECK(partial.encode() == BitString("1001"));
    }
    SECTION("reserved 11 decodes as blank but is never produced") {
        PartialString partial = PartialString::decode(BitString("1101"));
        CHECK(partial.kept_count() == 1);
        CHECK(partial.mask == 0b10);
        CHECK_FALSE(partial.encode() == BitString("1101"));
    }
    SECTION("round trip under fuzzing") {
        SplitMix64 rng(17);
        for (int trial = 0; trial < 500; ++trial) {
            unsigned n = 1 + static_cast<unsigned>(rng.below(12));
            BitString s = BitString::from_value(rng.next(), n);
            std::uint64_t mask = rng.below(std::uint64_t{1} << n);
            PartialString partial = PartialString::of(s, mask);
            PartialString back = PartialString::decode(partial.encode());
            CHECK(back.n == partial.n);
            CHECK(back.mask == partial.mask);
            CHECK(back.kept == partial.kept);
            CHECK(partial.consistent(s));
            CHECK(partial.consistent_value(s.value()));
        }
    }
}

TEST_CASE("decode_list") {
    Lab& lab = shared_lab();
    SECTION("eps = 0 gives the empty list") {
        PartialString partial = PartialString::of(BitString("0110"), 0b1111);
        CHECK(decode_list(lab.config(), partial, 0).empty());
    }
    SECTION("cardinality bound holds on a sweep") {
        PartialString partial = PartialString::of(BitString("01"), 0b01);
        for (unsigned eps : {1u, 4u, 7u, 10u}) {
            auto list = decode_list(lab.config(), partial, eps);
            CHECK(list.size() <= (std::uint64_t{1} << eps) - 1);
        }
    }
    SECTION("the 12-bit unblanking loop recovers x from a full mask at eps = 13") {
        for (std::uint64_t v = 0; v < 16; ++v) {
            BitString x = BitString::from_value(v, 4);
            auto list = decode_list(lab.config(), PartialString::of(x, 0b1111), 13);
            bool found = false;
            for (const auto& y : list)
                if (y == x) found = true;
            CHECK(found);
        }
        // and the program itself: SKIP READ CEND JBACK
        BitString decoder("011010100110");
        PartialString partial = PartialString::of(BitString("1011"), 0b1111);
        RunResult r = run(lab.config(), decoder, partial.encode());
        REQUIRE(r.halted());
        CHECK(r.output == BitString("1011"));
    }
}

TEST_CASE("holographic strings") {
    Lab& lab = shared_lab();
    SECTION("at k = n the decode loop caps eps_holo by 12") {
        CHECK(eps_holo(lab, BitString("1011"), 4) <= 12);
        CHECK(eps_holo(lab, BitString("01"), 2) <= 12);
    }
    SECTION("holographicity is monotone in eps") {
        BitString x("10");
        Complexity worst = eps_holo(lab, x, 1);
        REQUIRE_FALSE(worst.is_overflow());
        for (unsigned eps = 0; eps <= 18; ++eps) {
            bool holo = is_holographic(lab, x, 1, eps);
            CHECK(holo == (eps > static_cast<unsigned>(worst.bits())));
        }
    }
    SECTION("census at (n, k=n, eps=13) holds every string") {
        Codebook book = census_holographic(lab, 2, 2, 13);
        CHECK(book.members.size() == 4);
    }
    SECTION("census grows with eps") {
        for (unsigned k : {1u, 2u}) {
            std::size_t prev = 0;
            for (unsigned eps = 8; eps <= 14; ++eps) {
                Codebook book = census_holographic(lab, 2, k, eps);
                CHECK(book.members.size() >= prev);
                prev = book.members.size();
            }
        }
    }
    SECTION("infeasible size is rejected") {
        CHECK_THROWS_AS(census_holographic(lab, 6, 2, 13), InfeasibleError);
    }
}

TEST_CASE("erasure families") {
    SECTION("every member has exactly 2^(n-k) completions") {
        for (unsigned n : {3u, 5u}) {
            for (unsigned k = 1; k <= n; ++k) {
                LossFamily family = erasure_family(n, k);
                for (std::uint64_t i = 0; i < family.size(); ++i)
                    CHECK(family.member_cardinality(i) == (std::uint64_t{1} << (n - k)));
            }
        }
    }
    SECTION("n = k gives singleton members") {
        LossFamily family = erasure_family(3, 3);
        CHECK(family.size() == 8);
        for (std::uint64_t i = 0; i < family.size(); ++i)
            CHECK(family.member_cardinality(i) == 1);
    }
    SECTION("generator members match the brute-force set construction") {
        auto sets = materialize_erasure_family(4, 2);
        CHECK(sets.size() == 24);  // C(4,2) * 2^2, no duplicates at this size
        LossFamily family = erasure_family(4, 2);
        REQUIRE(family.size() == 24);
        for (std::uint64_t i = 0; i < family.size(); ++i) {
            const PartialString& pattern = family.patterns()[i];
            SetBitmap direct(4, 0);
            for (std::uint64_t v = 0; v < 16; ++v)
                if (pattern.consistent_value(v)) direct.insert_value(v);
            CHECK(direct.count() == 4);
            bool found = false;
            for (const auto& set : sets)
                if (set == direct) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("threshold codebook") {
    Lab& lab = shared_lab();
    auto family = materialize_erasure_family(2, 1);  // covers the whole universe
    SECTION("D_thr = 0 excludes every covered string") {
        Codebook book = threshold_codebook(lab, family, 2, 0);
        CHECK(book.members.empty());
    }
    SECTION("intersection bound is exact across a D_thr sweep") {
        std::size_t prev = 0;
        for (unsigned d : {6u, 9u, 12u, 15u, 18u}) {
            Codebook book = threshold_codebook(lab, family, 2, d);  // asserts internally
            for (const auto& member : family) {
                std::uint64_t count = 0;
                for (std::uint64_t v : book.members)
                    if (member.contains_value(v)) ++count;
                CHECK(count <= (std::uint64_t{1} << d) - 1);
            }
            CHECK(book.members.size() >= prev);
            prev = book.members.size();
        }
    }
}

TEST_CASE("sampled codebooks") {
    SECTION("expected size is 2^(k+1): n=16, k=6 gives 128") {
        const int trials = 1000;
        double sum = 0;
        for (int t = 0; t < trials; ++t) {
            Codebook book = sample_codebook(16, 6, SplitMix64::stream(42, t).next());
            sum += static_cast<double>(book.members.size());
        }
        double mean = sum / trials;
        // sigma^2 <= 2^(k+1) = 128, so 5 standard errors of the mean
        double tolerance = 5.0 * std::sqrt(128.0 / trials);
        CHECK(std::abs(mean - 128.0) <= tolerance);
    }
    SECTION("members are distinct, sorted and in range") {
        Codebook book = sample_codebook(12, 5, 7);
        for (std::size_t i = 1; i < book.members.size(); ++i)
            CHECK(book.members[i - 1] < book.members[i]);
        for (std::uint64_t v : book.members) CHECK(v < (std::uint64_t{1} << 12));
    }
    SECTION("deterministic in the seed") {
        Codebook a = sample_codebook(12, 5, 99);
        Codebook b = sample_codebook(12, 5, 99);
        CHECK(a.members == b.members);
    }
    SECTION("parameter range") {
        CHECK_THROWS_AS(sample_codebook(41, 10, 1), InfeasibleError);
        CHECK_THROWS_AS(sample_codebook(10, 9, 1), InfeasibleError);
    }
}

TEST_CASE("two-step sampling matches direct iid inclusion") {
    // chi-square on the size distribution at n=8, k=4 (p = 1/8), two
    // samples of 2000 codebooks each
    const unsigned n = 8;
    const int trials = 2000;
    auto bin_of = [](std::uint64_t size) {
        if (size <= 24) return 0;
        if (size <= 28) return 1;
        if (size <= 30) return 2;
        if (size <= 32) return 3;
        if (size <= 34) return 4;
        if (size <= 36) return 5;
        if (size <= 40) return 6;
        return 7;
    };
    std::vector<double> two_step(8, 0), direct(8, 0);
    for (int t = 0; t < trials; ++t) {
        Codebook book = sample_codebook(n, 4, SplitMix64::stream(1234, t).next());
        two_step[bin_of(book.members.size())] += 1;

        SplitMix64 rng = SplitMix64::stream(5678, t);
        std::uint64_t size = 0;
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
            if (rng.below(8) == 0) ++size;
        direct[bin_of(size)] += 1;
    }
    double chi2 = 0;
    for (int b = 0; b < 8; ++b) {
        double total = two_step[b] + direct[b];
        REQUIRE(total > 0);
        double diff = two_step[b] - direct[b];
        chi2 += diff * diff / total;
    }
    // 99.9% critical value for 7 degrees of freedom
    CHECK(chi2 < 24.322);
}

TEST_CASE("verify_codebook") {
    SECTION("empty codebook") {
        Codebook empty;
        empty.n = 8;
        empty.k = 3;
        LossFamily family = erasure_family(8, 3);
        VerifyReport report = verify_codebook(empty, family, default_list_bound(family.size()));
        CHECK_FALSE(report.size_ok);
        CHECK(report.max_intersection == 0);
        CHECK(report.all_bounded);
    }
    SECTION("default list bound is ceil(log2 |family|) + 1") {
        CHECK(default_list_bound(1 << 10) == 11);
        CHECK(default_list_bound(1000) == 11);
        CHECK(default_list_bound(1) == 1);
    }
    SECTION("random families count intersections through the generators") {
        Codebook book = sample_codebook(12, 4, 5);
        LossFamily family = LossFamily::random_subsets(12, 1 << 8, 1 << 6, 777);
        VerifyReport report = verify_codebook(book, family, default_list_bound(family.size()));
        std::uint64_t members_counted = 0;
        for (const auto& [size, count] : report.histogram) members_counted += count;
        CHECK(members_counted == family.size());
    }
}

TEST_CASE("erasure list decoding") {
    Codebook book = sample_codebook(12, 4, 21);
    SECTION("a full mask leaves at most the unique completion") {
        PartialString partial = PartialString::of(BitString::from_value(5, 12), ~std::uint64_t{0});
        auto list = list_decode(book, partial);
        CHECK(list.size() <= 1);
    }
    SECTION("a codeword always survives its own erasure") {
        SplitMix64 rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            std::uint64_t word = book.members[rng.below(book.members.size())];
            std::uint64_t mask = rng.below(std::uint64_t{1} << 12);
            PartialString partial = PartialString::of(BitString::from_value(word, 12), mask);
            auto list = list_decode(book, partial);
            bool found = false;
            for (std::uint64_t v : list)
                if (v == word) found = true;
            CHECK(found);
        }
    }
    SECTION("appendix-scale erasures stay within the analytic list bound") {
        Codebook big = sample_codebook(24, 10, 4242);
        SplitMix64 rng(57);
        std::uint64_t worst = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            std::uint64_t word = big.members[rng.below(big.members.size())];
            // keep a uniformly random 10-element index set
            std::uint64_t mask = 0;
            unsigned kept = 0;
            while (kept < 10) {
                std::uint64_t bit = std::uint64_t{1} << rng.below(24);
                if (!(mask & bit)) {
                    mask |= bit;
                    ++kept;
                }
            }
            PartialString partial = PartialString::of(BitString::from_value(word, 24), mask);
            auto list = list_decode(big, partial);
            worst = std::max<std::uint64_t>(worst, list.size());
        }
        CHECK(worst <= 13);
    }
}

TEST_CASE("analytic bounds in exact rational arithmetic") {
    SECTION("the i = 1 link is tight: 2^-1 / 1! = 1/2") {
        BoundsReport report = analytic_bounds(16, 6, 4);
        REQUIRE_FALSE(report.chain.empty());
        CHECK(report.chain[0].binom_term == "1/2");
        CHECK(report.chain[0].middle_term == "1/2");
        CHECK(report.chain[0].binom_le_middle);
        CHECK(report.chain[0].middle_le_tail);
    }
    SECTION("sigma^2 stays under 2^(k+1)") {
        BoundsReport report = analytic_bounds(24, 10, 8);
        CHECK(report.sigma_ok);
        CHECK(report.sigma_bound == "2048");
    }
    SECTION("full chain on sample points of the grid") {
        for (auto [n, k] : std::vector<std::pair<unsigned, unsigned>>{
                 {4, 2}, {16, 6}, {24, 10}, {40, 38}, {40, 2}}) {
            BoundsReport report = analytic_bounds(n, k, 64, /*keep_rows=*/false);
            CAPTURE(n, k);
            CHECK(report.all_ok());
        }
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(analytic_bounds(10, 9), InfeasibleError);
        CHECK_THROWS_AS(analytic_bounds(10, 1), InfeasibleError);
        CHECK_THROWS_AS(analytic_bounds(41, 10), InfeasibleError);
    }
}
