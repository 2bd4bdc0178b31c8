#pragma once

// Deterministic randomness for the Monte-Carlo code experiments. The
// generator is SplitMix64; streams split by index so trials are
// independent and reproducible: stream(master, i) seeds a fresh generator
// with splitmix(master + (i+1) * golden-gamma).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "aslab/errors.hpp"

namespace aslab {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Child stream for (this seed, index); used for per-trial and
    /// per-member generators.
    static SplitMix64 stream(std::uint64_t master, std::uint64_t index) {
        SplitMix64 seeder(master + (index + 1) * 0x9e3779b97f4a7c15ull);
        return SplitMix64(seeder.next());
    }

    /// Uniform value in [0, bound) by rejection, bias free.
    std::uint64_t below(std::uint64_t bound) {
        if ((bound & (bound - 1)) == 0) return next() & (bound - 1);
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform double in (0, 1], 53 significant bits.
    double u01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Number of successes among `trials` independent Bernoulli(2^-j) draws,
/// sampled through geometric gaps between successes (the textbook
/// decomposition of the Bernoulli process, so the count is Binomial).
inline std::uint64_t binomial_pow2(SplitMix64& rng, std::uint64_t trials, unsigned j) {
    if (j == 0) return trials;  // p = 1
    const double p = std::ldexp(1.0, -static_cast<int>(j));
    const double log_q = std::log1p(-p);
    std::uint64_t position = 0;
    std::uint64_t successes = 0;
    while (true) {
        double gap = std::floor(std::log(rng.u01()) / log_q) + 1.0;
        if (gap > static_cast<double>(trials)) break;
        position += static_cast<std::uint64_t>(gap);
        if (position > trials) break;
        ++successes;
    }
    return successes;
}

/// Uniformly random `count`-element subset of [0, universe), sorted.
inline std::vector<std::uint64_t> distinct_subset(SplitMix64& rng, std::uint64_t universe,
                                                  std::uint64_t count) {
    if (count > universe) throw InfeasibleError("subset larger than the universe");
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(count) * 2);
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(count));
    while (out.size() < count) {
        std::uint64_t v = rng.below(universe);
        if (chosen.insert(v).second) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace aslab
