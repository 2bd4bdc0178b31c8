#pragma once

// Orchestrated experiments behind the CLI subcommands: the total-vs-plain
// conditional complexity experiment on blocks of a constructed
// antistochastic string, structure-function plot data, the Monte-Carlo
// code trials, and the reconstruction sweep.

#include <cmath>
#include <sstream>

#include "aslab/bounds.hpp"
#include "aslab/codes.hpp"
#include "aslab/reconstruct.hpp"
#include "aslab/report.hpp"
#include "aslab/totality.hpp"

namespace aslab {

inline std::string hex_digest(std::uint64_t digest) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (int shift = 60; shift >= 0; shift -= 4) out += hex[(digest >> shift) & 15];
    return out;
}

inline void stamp_provenance(Report& report, const MachineConfig& cfg) {
    report.add_provenance("config_digest", hex_digest(cfg.digest()));
    report.add_provenance("code_version", kCodeVersion);
    report.add_provenance("machine", cfg.version_id);
    report.add_provenance("l_max", std::to_string(cfg.max_program_bits));
    report.add_provenance("step_budget", std::to_string(cfg.step_budget));
    report.add_provenance("enum_order", to_string(cfg.enum_order));
}

// --- structure function plot data --------------------------------------

/// Long-format rows: the measured curve plus both reference curves, with
/// the excess over the minimal curve carried alongside the measured rows.
inline Report profile_plotdata(const Lab& lab, const BitString& x) {
    StructureFunction sf = profile(lab, x);
    Report report;
    report.title = "profile";
    stamp_provenance(report, lab.config());
    report.add_provenance("x", x.str());
    report.add_provenance("n", std::to_string(sf.n));
    report.add_provenance("k", sf.k.str());
    if (!sf.k.is_overflow()) {
        report.add_provenance("deficiency", std::to_string(deficiency(sf)));
        ProfileSlack slack = profile_slack(sf);
        report.add_provenance("delta_max",
                              slack.delta_max ? std::to_string(*slack.delta_max) : "none");
        report.add_provenance("tradeoff_violation",
                              slack.tradeoff_violation ? std::to_string(*slack.tradeoff_violation)
                                                       : "none");
        report.add_provenance("tradeoff_overflow_pairs",
                              std::to_string(slack.tradeoff_overflow_pairs));
    }
    report.columns = {"curve", "l", "m", "excess_vs_pmin"};
    ReferenceCurves ref{sf.n, sf.k.is_overflow() ? 0 : sf.k.bits()};
    for (unsigned l = 0; l <= sf.n; ++l) {
        std::string excess = "";
        if (!sf.h[l].is_overflow())
            excess = std::to_string(sf.h[l].bits() - ref.pmin_boundary(l));
        report.add_row({"h", std::to_string(l), sf.h[l].str(), excess});
    }
    for (unsigned l = 0; l <= sf.n; ++l)
        report.add_row({"pmin", std::to_string(l), std::to_string(ref.pmin_boundary(l)), ""});
    for (unsigned l = 0; l <= sf.n; ++l)
        report.add_row({"pmax", std::to_string(l), std::to_string(ref.pmax_boundary(l)), ""});
    return report;
}

// --- the total conditional complexity experiment ------------------------

struct CtExperiment {
    unsigned k_blocks = 0;
    unsigned n_block = 0;
    BitString x;
    std::vector<BitString> blocks;

    struct Pair {
        unsigned i, j;
        Complexity c_cond;
        Complexity ct_value;  // over the domain of all length-n_block strings
    };
    std::vector<Pair> pairwise;

    struct BlockCt {
        unsigned i;
        Complexity ct_rest;      // CT(x_i | the other blocks concatenated)
        Complexity c_cond_rest;  // C(x_i | the same condition)
    };
    std::vector<BlockCt> block_ct;

    Complexity ct_x1, ct_x1_given_x, ct_x, ct_x_given_x1;

    std::uint64_t total_programs = 0;
    std::uint64_t max_image_size = 0;
    bool image_bound_ok = false;

    bool dominance_ok = false;
    int max_gap = 0;  // max over blocks of ct_rest - c_cond_rest

    std::string diff_str(Complexity lhs, Complexity rhs) const {
        if (lhs.is_overflow() || rhs.is_overflow()) return "overflow";
        return std::to_string(lhs.bits() - rhs.bits());
    }
};

inline CtExperiment run_ct_experiment(const Lab& lab, unsigned k_blocks, unsigned n_block) {
    if (k_blocks < 2 || n_block == 0 || k_blocks * n_block > kConstructMaxLength)
        throw InfeasibleError("ct experiment requires k_blocks >= 2 and k*n <= " +
                              std::to_string(kConstructMaxLength));
    CtExperiment exp;
    exp.k_blocks = k_blocks;
    exp.n_block = n_block;
    exp.x = construct_antistochastic(lab, k_blocks * n_block, n_block);
    for (unsigned i = 0; i < k_blocks; ++i)
        exp.blocks.push_back(exp.x.substr(i * n_block, n_block));

    exp.dominance_ok = true;
    TotalityTable single_table(lab.config(), DomainSpec::single_length(n_block));
    for (unsigned i = 0; i < k_blocks; ++i) {
        for (unsigned j = 0; j < k_blocks; ++j) {
            if (i == j) continue;
            Complexity plain = lab.c_cond(exp.blocks[i], exp.blocks[j]);
            Complexity total = ct(single_table, exp.blocks[i], exp.blocks[j]);
            exp.pairwise.push_back({i, j, plain, total});
            if (total < plain) exp.dominance_ok = false;
            if (!total.is_overflow() && !plain.is_overflow())
                exp.max_gap = std::max(exp.max_gap, total.bits() - plain.bits());
        }
    }

    const unsigned rest_len = (k_blocks - 1) * n_block;
    TotalityTable rest_table(lab.config(), DomainSpec::single_length(rest_len));
    for (unsigned i = 0; i < k_blocks; ++i) {
        BitString rest;
        for (unsigned j = 0; j < k_blocks; ++j)
            if (j != i) rest.append(exp.blocks[j]);
        Complexity total = ct(rest_table, exp.blocks[i], rest);
        Complexity plain = lab.c_cond(exp.blocks[i], rest);
        exp.block_ct.push_back({i, total, plain});
        if (total < plain) exp.dominance_ok = false;
        if (!total.is_overflow() && !plain.is_overflow())
            exp.max_gap = std::max(exp.max_gap, total.bits() - plain.bits());
    }

    TotalityTable empty_table(lab.config(), DomainSpec::single_length(0));
    TotalityTable x_table(lab.config(), DomainSpec::single_length(k_blocks * n_block));
    TotalityTable block_table(lab.config(), DomainSpec::single_length(n_block));
    exp.ct_x1 = ct(empty_table, exp.blocks[0], lambda());
    exp.ct_x1_given_x = ct(x_table, exp.blocks[0], exp.x);
    exp.ct_x = ct(empty_table, exp.x, lambda());
    exp.ct_x_given_x1 = ct(block_table, exp.x, exp.blocks[0]);

    // image-set audit: every total program maps the domain to at most
    // |domain| outputs, the proof's log |A| <= (k-1) n analogue
    auto domain = rest_table.domain().enumerate();
    exp.image_bound_ok = true;
    const std::uint64_t total_count = program_count(lab.config().max_program_bits);
    for (std::uint64_t idx = 0; idx < total_count; ++idx) {
        Program p = program_at_index(idx);
        if (!rest_table.is_total(p)) continue;
        ++exp.total_programs;
        std::unordered_set<BitString, BitStringHash> image;
        for (const auto& y : domain) {
            RunResult r = run(lab.config(), p, y);
            if (!r.halted())
                throw InvariantViolation("totality table marked a diverging program total");
            image.insert(r.output);
        }
        exp.max_image_size = std::max<std::uint64_t>(exp.max_image_size, image.size());
        if (image.size() > domain.size()) exp.image_bound_ok = false;
    }
    return exp;
}

inline Report ct_experiment_report(const Lab& lab, const CtExperiment& exp) {
    Report report;
    report.title = "ct-experiment";
    stamp_provenance(report, lab.config());
    report.add_provenance("k_blocks", std::to_string(exp.k_blocks));
    report.add_provenance("n_block", std::to_string(exp.n_block));
    report.add_provenance("x", exp.x.str());
    report.add_provenance("ct_diff_block", exp.diff_str(exp.ct_x1, exp.ct_x1_given_x));
    report.add_provenance("ct_diff_whole", exp.diff_str(exp.ct_x, exp.ct_x_given_x1));
    report.add_provenance("dominance_ok", exp.dominance_ok ? "true" : "false");
    report.add_provenance("max_ct_gap", std::to_string(exp.max_gap));
    report.add_provenance("total_programs", std::to_string(exp.total_programs));
    report.add_provenance("max_image_size", std::to_string(exp.max_image_size));
    report.add_provenance("image_bound_ok", exp.image_bound_ok ? "true" : "false");
    report.columns = {"kind", "i", "j", "value"};
    for (const auto& pair : exp.pairwise) {
        report.add_row({"c_cond", std::to_string(pair.i), std::to_string(pair.j),
                        pair.c_cond.str()});
        report.add_row({"ct", std::to_string(pair.i), std::to_string(pair.j),
                        pair.ct_value.str()});
    }
    for (const auto& block : exp.block_ct) {
        report.add_row({"ct_rest", std::to_string(block.i), "", block.ct_rest.str()});
        report.add_row({"c_cond_rest", std::to_string(block.i), "", block.c_cond_rest.str()});
    }
    report.add_row({"ct_x1", "0", "", exp.ct_x1.str()});
    report.add_row({"ct_x1_given_x", "0", "", exp.ct_x1_given_x.str()});
    report.add_row({"ct_x", "", "", exp.ct_x.str()});
    report.add_row({"ct_x_given_x1", "", "0", exp.ct_x_given_x1.str()});
    return report;
}

// --- reconstruction sweep -----------------------------------------------

struct ReconstructionSweep {
    unsigned n = 0;
    unsigned k = 0;
    BitString x;
    std::uint64_t cases = 0;
    std::uint64_t successes = 0;
    std::map<std::size_t, std::uint64_t> advice_histogram;  // bits -> count
    std::size_t max_advice_bits = 0;
    Report rows;  // per-set rows (set, cardinality, c_set, path, advice_bits, ok)
};

inline ReconstructionSweep reconstruct_sweep(const Lab& lab, unsigned n, unsigned k,
                                             bool keep_rows) {
    ReconstructionSweep sweep;
    sweep.n = n;
    sweep.k = k;
    sweep.x = construct_antistochastic(lab, n, k);
    sweep.rows.title = "reconstruct";
    stamp_provenance(sweep.rows, lab.config());
    sweep.rows.add_provenance("n", std::to_string(n));
    sweep.rows.add_provenance("k", std::to_string(k));
    sweep.rows.add_provenance("x", sweep.x.str());
    sweep.rows.columns = {"set", "cardinality", "c_set", "path", "advice_bits", "ok"};

    const std::uint64_t x_bit = std::uint64_t{1} << sweep.x.value();
    const std::uint64_t max_card = std::uint64_t{1} << (n - k);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (std::uint64_t{1} << n)); ++mask) {
        if (!(mask & x_bit)) continue;
        SetBitmap set(n, mask);
        if (set.count() > max_card) continue;
        Advice advice = encode_advice(lab, sweep.x, set, k);
        bool ok = reconstruct_string(lab, set, advice) == sweep.x;
        ++sweep.cases;
        if (ok) ++sweep.successes;
        ++sweep.advice_histogram[advice.bit_length()];
        sweep.max_advice_bits = std::max(sweep.max_advice_bits, advice.bit_length());
        if (keep_rows)
            sweep.rows.add_row({set.to_bits().str(), std::to_string(set.count()),
                                lab.c_set(set).str(),
                                advice.path == Advice::Path::Omega ? "OMEGA" : "COVER",
                                std::to_string(advice.bit_length()), ok ? "true" : "false"});
    }
    return sweep;
}

/// Single-set variant of the sweep row.
inline Report reconstruct_single(const Lab& lab, unsigned n, unsigned k, const SetBitmap& set) {
    BitString x = construct_antistochastic(lab, n, k);
    if (!set.contains(x))
        throw InfeasibleError("the given set does not contain the constructed string " + x.str());
    Report report;
    report.title = "reconstruct";
    stamp_provenance(report, lab.config());
    report.add_provenance("n", std::to_string(n));
    report.add_provenance("k", std::to_string(k));
    report.add_provenance("x", x.str());
    report.columns = {"set", "cardinality", "c_set", "path", "advice_bits", "ok"};
    Advice advice = encode_advice(lab, x, set, k);
    bool ok = reconstruct_string(lab, set, advice) == x;
    report.add_row({set.to_bits().str(), std::to_string(set.count()), lab.c_set(set).str(),
                    advice.path == Advice::Path::Omega ? "OMEGA" : "COVER",
                    std::to_string(advice.bit_length()), ok ? "true" : "false"});
    return report;
}

// --- Monte-Carlo code trials ---------------------------------------------

struct CodesTrials {
    unsigned n = 0;
    unsigned k = 0;
    std::uint64_t family_count = 0;
    std::uint64_t member_size = 0;
    unsigned trials = 0;
    std::uint64_t seed = 0;
    unsigned list_bound = 0;

    std::uint64_t successes = 0;
    std::vector<std::uint64_t> per_trial_size;
    std::vector<std::uint64_t> per_trial_max;
    std::map<std::uint64_t, std::uint64_t> pooled_histogram;

    struct TailRow {
        unsigned i;
        double frequency;
        double bound;         // 2^-i
        double standard_error;
        bool within;          // frequency <= bound + 3 SE
    };
    std::vector<TailRow> tail;
    bool tail_ok = false;

    double success_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / trials;
    }
};

inline CodesTrials run_codes_trials(unsigned n, unsigned k, std::uint64_t family_count,
                                    std::uint64_t member_size, unsigned trials,
                                    std::uint64_t seed) {
    CodesTrials result;
    result.n = n;
    result.k = k;
    result.family_count = family_count;
    result.member_size = member_size;
    result.trials = trials;
    result.seed = seed;
    result.list_bound = default_list_bound(family_count);

    for (unsigned t = 0; t < trials; ++t) {
        std::uint64_t codebook_seed = SplitMix64::stream(seed, 2 * t).next();
        std::uint64_t family_seed = SplitMix64::stream(seed, 2 * t + 1).next();
        Codebook codebook = sample_codebook(n, k, codebook_seed);
        LossFamily family = LossFamily::random_subsets(n, member_size, family_count, family_seed);
        VerifyReport verify = verify_codebook(codebook, family, result.list_bound);
        result.per_trial_size.push_back(verify.codebook_size);
        result.per_trial_max.push_back(verify.max_intersection);
        if (verify.size_ok && verify.all_bounded) ++result.successes;
        for (const auto& [size, count] : verify.histogram) result.pooled_histogram[size] += count;
    }

    const double samples = static_cast<double>(trials) * static_cast<double>(family_count);
    result.tail_ok = true;
    for (unsigned i = 1; i <= 10; ++i) {
        std::uint64_t at_least = 0;
        for (const auto& [size, count] : result.pooled_histogram)
            if (size >= i) at_least += count;
        CodesTrials::TailRow row;
        row.i = i;
        row.frequency = samples == 0 ? 0.0 : static_cast<double>(at_least) / samples;
        row.bound = std::ldexp(1.0, -static_cast<int>(i));
        row.standard_error = std::sqrt(row.bound * (1.0 - row.bound) / samples);
        row.within = row.frequency <= row.bound + 3.0 * row.standard_error;
        if (!row.within) result.tail_ok = false;
        result.tail.push_back(row);
    }
    return result;
}

inline Report codes_trials_report(const MachineConfig& cfg, const CodesTrials& trials) {
    Report report;
    report.title = "codes-trials";
    stamp_provenance(report, cfg);
    report.add_provenance("n", std::to_string(trials.n));
    report.add_provenance("k", std::to_string(trials.k));
    report.add_provenance("family_count", std::to_string(trials.family_count));
    report.add_provenance("member_size", std::to_string(trials.member_size));
    report.add_provenance("trials", std::to_string(trials.trials));
    report.add_provenance("seed", std::to_string(trials.seed));
    report.add_provenance("list_bound", std::to_string(trials.list_bound));
    report.add_provenance("successes", std::to_string(trials.successes));
    {
        std::ostringstream rate;
        rate.precision(4);
        rate << std::fixed << trials.success_rate();
        report.add_provenance("success_rate", rate.str());
    }
    report.add_provenance("tail_ok", trials.tail_ok ? "true" : "false");
    report.columns = {"trial", "codebook_size", "max_intersection", "success"};
    for (unsigned t = 0; t < trials.trials; ++t) {
        bool ok = trials.per_trial_size[t] >= (std::uint64_t{1} << trials.k) &&
                  trials.per_trial_max[t] <= trials.list_bound;
        report.add_row({std::to_string(t), std::to_string(trials.per_trial_size[t]),
                        std::to_string(trials.per_trial_max[t]), ok ? "true" : "false"});
    }
    return report;
}

inline Report tail_report(const MachineConfig& cfg, const CodesTrials& trials) {
    Report report;
    report.title = "codes-tail";
    stamp_provenance(report, cfg);
    report.add_provenance("seed", std::to_string(trials.seed));
    report.columns = {"i", "frequency", "bound", "standard_error", "within"};
    for (const auto& row : trials.tail) {
        std::ostringstream freq, se;
        freq.precision(8);
        freq << std::fixed << row.frequency;
        se.precision(8);
        se << std::fixed << row.standard_error;
        std::ostringstream bound;
        bound.precision(8);
        bound << std::fixed << row.bound;
        report.add_row({std::to_string(row.i), freq.str(), bound.str(), se.str(),
                        row.within ? "true" : "false"});
    }
    return report;
}

inline Report bounds_report_render(const MachineConfig& cfg, const BoundsReport& bounds) {
    Report report;
    report.title = "analytic-bounds";
    stamp_provenance(report, cfg);
    report.add_provenance("n", std::to_string(bounds.n));
    report.add_provenance("k", std::to_string(bounds.k));
    report.add_provenance("sigma_sq", bounds.sigma_sq);
    report.add_provenance("sigma_bound", bounds.sigma_bound);
    report.add_provenance("sigma_ok", bounds.sigma_ok ? "true" : "false");
    report.add_provenance("chain_ok", bounds.chain_ok ? "true" : "false");
    report.columns = {"i", "binom_term", "middle_term", "tail_term", "link1_ok", "link2_ok"};
    for (const auto& row : bounds.chain)
        report.add_row({std::to_string(row.i), row.binom_term, row.middle_term, row.tail_term,
                        row.binom_le_middle ? "true" : "false",
                        row.middle_le_tail ? "true" : "false"});
    return report;
}

}  // namespace aslab
