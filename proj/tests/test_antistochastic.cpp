#include <catch2/catch_amalgamated.hpp>

#include "aslab/antistochastic.hpp"

using namespace aslab;

namespace {
Lab& shared_lab() {
    static Lab lab;
    return lab;
}
}  // namespace

TEST_CASE("exclusion family counting invariants hold on the whole grid") {
    Lab& lab = shared_lab();
    for (unsigned n = 1; n <= 5; ++n) {
        for (unsigned k = 1; k <= n; ++k) {
            ExclusionFamily family = exclusion_family(lab, n, k);
            CAPTURE(n, k);
            CHECK(family.members.size() <= (std::uint64_t{1} << k) - 1);
            std::uint64_t card_bound = std::uint64_t{1} << (n - k);
            std::uint64_t covered = 0;
            for (const auto& set : family.members) {
                CHECK(lab.c_set(set) < static_cast<int>(k));
                CHECK(set.count() <= card_bound);
                covered += set.count();
            }
            CHECK(family.union_size() <= covered);
            CHECK(family.union_size() <= ((std::uint64_t{1} << k) - 1) * card_bound);
            CHECK(family.union_size() < (std::uint64_t{1} << n));
        }
    }
}

TEST_CASE("construct returns the least string outside the union") {
    Lab& lab = shared_lab();
    SECTION("n=1, k=1: the family is empty, so x* is 0") {
        ExclusionFamily family = exclusion_family(lab, 1, 1);
        CHECK(family.members.empty());  // no program of length 0 outputs a 2-bit bitmap
        CHECK(construct_antistochastic(lab, 1, 1) == BitString("0"));
    }
    SECTION("the constructed string avoids every family member") {
        for (unsigned n = 1; n <= 5; ++n) {
            for (unsigned k = 1; k <= n; ++k) {
                BitString x = construct_antistochastic(lab, n, k);
                REQUIRE(x.size() == n);
                ExclusionFamily family = exclusion_family(lab, n, k);
                for (const auto& set : family.members) CHECK_FALSE(set.contains(x));
                // lexicographically least: everything below x is covered
                for (std::uint64_t v = 0; v < x.value(); ++v)
                    CHECK(family.union_set.contains_value(v));
            }
        }
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(construct_antistochastic(lab, 6, 1), InfeasibleError);
        CHECK_THROWS_AS(construct_antistochastic(lab, 3, 4), InfeasibleError);
        CHECK_THROWS_AS(construct_antistochastic(lab, 3, 0), InfeasibleError);
    }
}

TEST_CASE("singleton hardness of constructed strings") {
    // {x*} is not in the family and has log-cardinality 0 <= n-k, so its
    // set complexity is at least k (or above the ceiling altogether).
    Lab& lab = shared_lab();
    for (unsigned n = 1; n <= 5; ++n) {
        for (unsigned k = 1; k <= n; ++k) {
            auto report = construct_report(lab, n, k);
            CAPTURE(n, k);
            CHECK(report.c_singleton >= static_cast<int>(k));
            CHECK(report.lemma3_at_one);
        }
    }
}

TEST_CASE("omega decoder round trip is the identity, exhaustively") {
    Lab& lab = shared_lab();
    const auto& en = lab.enumeration();
    for (unsigned k = 0; k <= 10; ++k) {
        std::uint64_t omega = lab.omega(k);
        const auto& stream = en.appearance_stream(k);
        REQUIRE(stream.size() == omega);
        for (const auto& event : stream) {
            const BitString& x = en.output(event.output_id);
            OmegaAdvice advice{k, lab.count_after(x, k)};
            CHECK(decode_from_omega(lab, omega, advice) == x);
        }
    }
}

TEST_CASE("omega decoder reference cases") {
    Lab& lab = shared_lab();
    SECTION("advice j = 0 names the last-appearing string") {
        const auto& stream = lab.enumeration().appearance_stream(9);
        const BitString& last = lab.enumeration().output(stream.back().output_id);
        CHECK(decode_from_omega(lab, lab.omega(9), OmegaAdvice{9, 0}) == last);
    }
    SECTION("k = 3 decodes exactly three strings") {
        REQUIRE(lab.omega(3) == 3);
        CHECK(decode_from_omega(lab, 3, OmegaAdvice{3, 2}) == lambda());
        CHECK(decode_from_omega(lab, 3, OmegaAdvice{3, 1}) == BitString("0"));
        CHECK(decode_from_omega(lab, 3, OmegaAdvice{3, 0}) == BitString("1"));
    }
    SECTION("mismatched numeral and out-of-range advice are rejected") {
        CHECK_THROWS_AS(decode_from_omega(lab, 4, OmegaAdvice{3, 0}), InvariantViolation);
        CHECK_THROWS_AS(decode_from_omega(lab, 3, OmegaAdvice{3, 3}), InvariantViolation);
    }
}

TEST_CASE("census") {
    Lab& lab = shared_lab();
    auto rows = census(lab, 4);
    SECTION("one row per string") {
        CHECK(rows.size() == 16);
    }
    SECTION("count of eps-antistochastic strings is nondecreasing in eps") {
        for (int k : {9, 12}) {
            std::uint64_t prev = 0;
            for (int eps = 0; eps <= 16; ++eps) {
                std::uint64_t now = census_count(rows, k, eps);
                CHECK(now >= prev);
                prev = now;
            }
        }
    }
    SECTION("complexities in the census match direct lookups") {
        for (const auto& row : rows) {
            CHECK(row.c == lab.c(row.x));
            CHECK(row.c_singleton == lab.c_set(SetBitmap::singleton(row.x)));
        }
    }
    SECTION("infeasible sizes are rejected") {
        CHECK_THROWS_AS(census(lab, 5), InfeasibleError);
    }
}

TEST_CASE("portion bookkeeping") {
    Lab& lab = shared_lab();
    const auto& en = lab.enumeration();
    unsigned embeddable_seen = 0;
    for (unsigned k : {3u, 6u, 9u, 12u}) {
        const auto& stream = en.appearance_stream(k);
        for (const auto& event : stream) {
            const BitString& x = en.output(event.output_id);
            std::uint64_t j = lab.count_after(x, k);
            if (j == 0) {
                CHECK_THROWS_AS(portion_pairs(lab, x, k), InvariantViolation);
                continue;
            }
            auto report = portion_pairs(lab, x, k);
            CAPTURE(k, x.str());
            // complete portion of exactly 2^l members containing x
            CHECK(report.complete);
            CHECK(report.portion.size() == (std::uint64_t{1} << report.l));
            CHECK(report.contains_x);
            // l = floor(log2 j): x cannot sit in the incomplete tail
            CHECK((std::uint64_t{1} << report.l) <= j);
            if (report.embeddable) {
                ++embeddable_seen;
                for (const auto& member : report.portion) CHECK(member.size() == x.size());
            }
        }
    }
    CHECK(embeddable_seen > 0);
}
