// Command-line front end for the algorithmic statistics laboratory.
//
// Exit codes: 0 success, 1 invariant violation, 2 infeasible or invalid
// parameters, 3 cache error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "aslab/antistochastic.hpp"
#include "aslab/experiments.hpp"

using namespace aslab;

namespace {

struct GlobalOptions {
    MachineConfig machine;
    std::optional<std::string> cache_dir;
    unsigned workers = default_workers();
    std::string out_path;   // empty = stdout
    std::string format = "csv";
};

void apply_config_file(GlobalOptions& opts, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InfeasibleError("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InfeasibleError("config line without '=': " + line);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "l-max") opts.machine.max_program_bits = std::stoul(value);
        else if (key == "step-budget") opts.machine.step_budget = std::stoul(value);
        else if (key == "output-cap") opts.machine.output_cap = std::stoul(value);
        else if (key == "enum-order") {
            if (value == "dovetail") opts.machine.enum_order = EnumOrder::Dovetail;
            else if (value == "length-lex") opts.machine.enum_order = EnumOrder::LengthLex;
            else throw InfeasibleError("unknown enum-order: " + value);
        } else if (key == "cache-dir") opts.cache_dir = value;
        else if (key == "workers") opts.workers = std::stoul(value);
        else throw InfeasibleError("unknown config key: " + key);
    }
}

Lab make_lab(const GlobalOptions& opts) {
    std::optional<std::filesystem::path> cache;
    if (opts.cache_dir) cache = *opts.cache_dir;
    return Lab(opts.machine, cache, opts.workers);
}

void emit(const GlobalOptions& opts, const Report& report) {
    std::string rendered = opts.format == "json" ? report.to_json() : report.to_csv();
    if (opts.out_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(opts.out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw InfeasibleError("cannot write output file " + opts.out_path);
        out << rendered;
    }
}

SetBitmap parse_bitmap_hex(unsigned n, const std::string& hex) {
    std::uint64_t mask = 0;
    for (char ch : hex) {
        unsigned digit;
        if (ch >= '0' && ch <= '9') digit = ch - '0';
        else if (ch >= 'a' && ch <= 'f') digit = 10 + (ch - 'a');
        else if (ch >= 'A' && ch <= 'F') digit = 10 + (ch - 'A');
        else throw InfeasibleError("invalid hex bitmap digit");
        mask = (mask << 4) | digit;
    }
    // hex spells the bitmap string left to right; realign to value order
    const std::uint64_t universe = std::uint64_t{1} << n;
    if (hex.size() * 4 < universe)
        throw InfeasibleError("hex bitmap shorter than the 2^n universe");
    BitString bits = BitString::from_value(mask, static_cast<unsigned>(hex.size() * 4));
    return SetBitmap::from_bits(bits.substr(bits.size() - universe, universe));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aslab: exact desk-scale algorithmic statistics"};
    app.require_subcommand(1);

    GlobalOptions opts;
    if (const char* env = std::getenv("ASLAB_CACHE_DIR")) opts.cache_dir = env;

    std::string config_path;
    app.add_option("--config", config_path, "plain-text config file (key=value lines)");
    auto* lmax_opt =
        app.add_option("--l-max", opts.machine.max_program_bits, "program length ceiling");
    auto* budget_opt =
        app.add_option("--budget", opts.machine.step_budget, "step budget per run");
    auto* cap_opt = app.add_option("--output-cap", opts.machine.output_cap, "output bit cap");
    std::string enum_order = "dovetail";
    auto* order_opt = app.add_option("--enum-order", enum_order, "dovetail or length-lex")
                          ->check(CLI::IsMember({"dovetail", "length-lex"}));
    std::string cache_dir_flag;
    auto* cache_opt = app.add_option("--cache-dir", cache_dir_flag, "result cache directory");
    auto* workers_opt = app.add_option("--workers", opts.workers, "enumeration worker count");
    app.add_option("--out", opts.out_path, "write the report here instead of stdout");
    app.add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // enumerate
    auto* cmd_enum = app.add_subcommand("enumerate", "build tables and print the Omega table");
    std::vector<std::string> conditions;
    cmd_enum->add_option("--condition", conditions, "extra conditions to table (bit strings)");
    unsigned set_universe = 4;
    cmd_enum->add_option("--set-universe", set_universe, "universe exponent for set Omegas");

    // profile
    auto* cmd_profile = app.add_subcommand("profile", "structure function plot data");
    std::string profile_x;
    cmd_profile->add_option("--x", profile_x, "the string to profile")->required();

    // construct-anti
    auto* cmd_construct = app.add_subcommand("construct-anti", "the exclusion construction");
    unsigned arg_n = 4, arg_k = 2;
    cmd_construct->add_option("--n", arg_n, "string length")->required();
    cmd_construct->add_option("--k", arg_k, "complexity parameter")->required();

    // census-anti
    auto* cmd_census = app.add_subcommand("census-anti", "deficiency census over {0,1}^n");
    unsigned census_n = 4;
    cmd_census->add_option("--n", census_n, "string length")->required();

    // reconstruct
    auto* cmd_reconstruct =
        app.add_subcommand("reconstruct", "advice decoder sweep for the constructed string");
    unsigned rec_n = 4, rec_k = 2;
    std::string rec_set_hex;
    bool rec_all = false;
    cmd_reconstruct->add_option("--n", rec_n, "string length")->required();
    cmd_reconstruct->add_option("--k", rec_k, "admissibility parameter")->required();
    cmd_reconstruct->add_flag("--all-sets", rec_all, "sweep every admissible set");
    cmd_reconstruct->add_option("--set", rec_set_hex, "one set as a hex bitmap");

    // holographic
    auto* cmd_holo = app.add_subcommand("holographic", "holographic census");
    unsigned holo_n = 4, holo_k = 4, holo_eps = 13;
    cmd_holo->add_option("--n", holo_n, "string length")->required();
    cmd_holo->add_option("--k", holo_k, "surviving positions")->required();
    cmd_holo->add_option("--eps", holo_eps, "program-length threshold");

    // ct
    auto* cmd_ct = app.add_subcommand("ct", "total conditional complexity experiment");
    unsigned ct_blocks = 2, ct_block_size = 2;
    cmd_ct->add_option("--blocks", ct_blocks, "number of blocks");
    cmd_ct->add_option("--block-size", ct_block_size, "bits per block");

    // codes
    auto* cmd_codes = app.add_subcommand("codes", "codebook experiments");
    cmd_codes->require_subcommand(1);
    unsigned codes_n = 24, codes_k = 10;
    std::uint64_t codes_seed = 1;
    std::uint64_t family_size = std::uint64_t{1} << 12;
    std::uint64_t member_size = 0;  // 0 = 2^(n-k)
    unsigned trials = 100;
    auto add_codes_common = [&](CLI::App* sub) {
        sub->add_option("--n", codes_n, "codeword length");
        sub->add_option("--k", codes_k, "information parameter");
        sub->add_option("--seed", codes_seed, "master seed");
    };
    auto* codes_sample = cmd_codes->add_subcommand("sample", "draw one random codebook");
    add_codes_common(codes_sample);
    auto* codes_verify = cmd_codes->add_subcommand("verify", "verify one codebook against a family");
    add_codes_common(codes_verify);
    codes_verify->add_option("--family-size", family_size, "number of family members");
    codes_verify->add_option("--member-size", member_size, "member cardinality (default 2^(n-k))");
    auto* codes_trial = cmd_codes->add_subcommand("trial", "Monte-Carlo success trials");
    add_codes_common(codes_trial);
    codes_trial->add_option("--family-size", family_size, "number of family members");
    codes_trial->add_option("--member-size", member_size, "member cardinality (default 2^(n-k))");
    codes_trial->add_option("--trials", trials, "number of trials");
    auto* codes_bounds = cmd_codes->add_subcommand("bounds", "exact rational bound report");
    add_codes_common(codes_bounds);

    // cache
    auto* cmd_cache = app.add_subcommand("cache", "cache lifecycle");
    cmd_cache->require_subcommand(1);
    auto* cache_build = cmd_cache->add_subcommand("build", "build and write tables");
    std::vector<std::string> cache_conditions;
    cache_build->add_option("--condition", cache_conditions, "conditions to table");
    auto* cache_verify = cmd_cache->add_subcommand("verify", "re-derive digests, audit witnesses");
    auto* cache_invalidate = cmd_cache->add_subcommand("invalidate", "remove mismatched caches");

    // report
    auto* cmd_report = app.add_subcommand("report", "re-render a report file");
    std::string report_in, report_to = "json";
    cmd_report->add_option("--in", report_in, "input CSV report")->required();
    cmd_report->add_option("--to", report_to, "target format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            GlobalOptions from_file;
            from_file.cache_dir = opts.cache_dir;
            apply_config_file(from_file, config_path);
            // flags win over the config file
            if (lmax_opt->count() == 0) opts.machine.max_program_bits = from_file.machine.max_program_bits;
            if (budget_opt->count() == 0) opts.machine.step_budget = from_file.machine.step_budget;
            if (cap_opt->count() == 0) opts.machine.output_cap = from_file.machine.output_cap;
            if (order_opt->count() == 0) opts.machine.enum_order = from_file.machine.enum_order;
            if (workers_opt->count() == 0) opts.workers = from_file.workers;
            if (cache_opt->count() == 0 && !std::getenv("ASLAB_CACHE_DIR"))
                opts.cache_dir = from_file.cache_dir;
        }
        if (order_opt->count() > 0)
            opts.machine.enum_order =
                enum_order == "dovetail" ? EnumOrder::Dovetail : EnumOrder::LengthLex;
        if (cache_opt->count() > 0) opts.cache_dir = cache_dir_flag;
        opts.machine.validate();

        if (cmd_enum->parsed()) {
            Lab lab = make_lab(opts);
            Report report;
            report.title = "omega-table";
            stamp_provenance(report, lab.config());
            report.columns = {"i", "omega", "omega_set"};
            for (unsigned i = 0; i <= lab.config().max_program_bits; ++i)
                report.add_row({std::to_string(i), std::to_string(lab.omega(i)),
                                std::to_string(lab.omega_set(i, set_universe))});
            for (const auto& cond : conditions) lab.conditional(BitString(cond));
            emit(opts, report);
        } else if (cmd_profile->parsed()) {
            Lab lab = make_lab(opts);
            emit(opts, profile_plotdata(lab, BitString(profile_x)));
        } else if (cmd_construct->parsed()) {
            Lab lab = make_lab(opts);
            ConstructReport rep = construct_report(lab, arg_n, arg_k);
            Report report;
            report.title = "construct-anti";
            stamp_provenance(report, lab.config());
            report.columns = {"x", "k", "epsilon_star", "c_singleton", "c_x",
                              "family_size", "union_size", "lemma3_at_1"};
            report.add_row({rep.x.str(), std::to_string(rep.k),
                            rep.epsilon_star ? std::to_string(*rep.epsilon_star) : "overflow",
                            rep.c_singleton.str(), rep.c_x.str(),
                            std::to_string(rep.family_size), std::to_string(rep.union_size),
                            rep.lemma3_at_one ? "true" : "false"});
            emit(opts, report);
        } else if (cmd_census->parsed()) {
            Lab lab = make_lab(opts);
            auto rows = census(lab, census_n);
            Report report;
            report.title = "census-anti";
            stamp_provenance(report, lab.config());
            report.add_provenance("n", std::to_string(census_n));
            report.columns = {"x", "k", "epsilon_star", "c_singleton", "c_given_omega"};
            for (const auto& row : rows)
                report.add_row({row.x.str(), row.c.str(),
                                row.epsilon_star ? std::to_string(*row.epsilon_star) : "overflow",
                                row.c_singleton.str(), row.c_given_omega.str()});
            emit(opts, report);
        } else if (cmd_reconstruct->parsed()) {
            Lab lab = make_lab(opts);
            if (!rec_set_hex.empty()) {
                emit(opts, reconstruct_single(lab, rec_n, rec_k,
                                              parse_bitmap_hex(rec_n, rec_set_hex)));
            } else {
                ReconstructionSweep sweep = reconstruct_sweep(lab, rec_n, rec_k, /*keep_rows=*/true);
                sweep.rows.add_provenance("cases", std::to_string(sweep.cases));
                sweep.rows.add_provenance("successes", std::to_string(sweep.successes));
                emit(opts, sweep.rows);
            }
        } else if (cmd_holo->parsed()) {
            Lab lab = make_lab(opts);
            Codebook book = census_holographic(lab, holo_n, holo_k, holo_eps);
            Report report;
            report.title = "holographic-census";
            stamp_provenance(report, lab.config());
            report.add_provenance("n", std::to_string(holo_n));
            report.add_provenance("k", std::to_string(holo_k));
            report.add_provenance("eps", std::to_string(holo_eps));
            report.add_provenance("count", std::to_string(book.members.size()));
            report.add_provenance("benchmark_2k", std::to_string(std::uint64_t{1} << holo_k));
            report.columns = {"x"};
            for (std::uint64_t v : book.members)
                report.add_row({BitString::from_value(v, holo_n).str()});
            emit(opts, report);
        } else if (cmd_ct->parsed()) {
            Lab lab = make_lab(opts);
            CtExperiment exp = run_ct_experiment(lab, ct_blocks, ct_block_size);
            emit(opts, ct_experiment_report(lab, exp));
        } else if (cmd_codes->parsed()) {
            if (member_size == 0 && codes_n >= codes_k)
                member_size = std::uint64_t{1} << (codes_n - codes_k);
            if (codes_sample->parsed()) {
                Codebook book = sample_codebook(codes_n, codes_k, codes_seed);
                Report report;
                report.title = "codes-sample";
                stamp_provenance(report, opts.machine);
                report.add_provenance("n", std::to_string(codes_n));
                report.add_provenance("k", std::to_string(codes_k));
                report.add_provenance("seed", std::to_string(codes_seed));
                report.add_provenance("size", std::to_string(book.members.size()));
                report.columns = {"codeword"};
                for (std::uint64_t v : book.members)
                    report.add_row({BitString::from_value(v, codes_n).str()});
                emit(opts, report);
            } else if (codes_verify->parsed()) {
                Codebook book = sample_codebook(codes_n, codes_k, codes_seed);
                LossFamily family = LossFamily::random_subsets(
                    codes_n, member_size, family_size,
                    SplitMix64::stream(codes_seed, 1).next());
                VerifyReport verify = verify_codebook(book, family,
                                                      default_list_bound(family.size()));
                Report report;
                report.title = "codes-verify";
                stamp_provenance(report, opts.machine);
                report.add_provenance("size_ok", verify.size_ok ? "true" : "false");
                report.add_provenance("max_intersection",
                                      std::to_string(verify.max_intersection));
                report.add_provenance("all_bounded", verify.all_bounded ? "true" : "false");
                report.columns = {"intersection_size", "members"};
                for (const auto& [size, count] : verify.histogram)
                    report.add_row({std::to_string(size), std::to_string(count)});
                emit(opts, report);
            } else if (codes_trial->parsed()) {
                CodesTrials result = run_codes_trials(codes_n, codes_k, family_size,
                                                      member_size, trials, codes_seed);
                emit(opts, codes_trials_report(opts.machine, result));
            } else {
                BoundsReport bounds = analytic_bounds(codes_n, codes_k);
                emit(opts, bounds_report_render(opts.machine, bounds));
            }
        } else if (cmd_cache->parsed()) {
            if (!opts.cache_dir)
                throw CacheError("cache commands need --cache-dir or ASLAB_CACHE_DIR");
            std::filesystem::path root = *opts.cache_dir;
            Report report;
            report.title = "cache";
            stamp_provenance(report, opts.machine);
            report.columns = {"event", "detail"};
            if (cache_build->parsed()) {
                Lab lab = make_lab(opts);
                lab.enumeration();
                for (const auto& cond : cache_conditions) lab.conditional(BitString(cond));
                report.add_row({"built", std::to_string(1 + cache_conditions.size())});
            } else if (cache_verify->parsed()) {
                CacheVerifyReport verify = verify_cache_dir(root, opts.machine);
                report.add_row({"tables_checked", std::to_string(verify.tables_checked)});
                report.add_row({"witnesses_audited", std::to_string(verify.witnesses_audited)});
                for (const auto& failure : verify.failures)
                    report.add_row({"corrupt", failure});
                if (!verify.clean()) {
                    emit(opts, report);
                    throw CacheError("cache verification found corrupt files");
                }
            } else if (cache_invalidate->parsed()) {
                auto removed = invalidate_cache_dir(root, opts.machine);
                for (const auto& path : removed) report.add_row({"removed", path});
            }
            emit(opts, report);
        } else if (cmd_report->parsed()) {
            std::ifstream in(report_in, std::ios::binary);
            if (!in) throw InfeasibleError("cannot open report file " + report_in);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            Report parsed = parse_csv_report(text);
            opts.format = report_to;
            emit(opts, parsed);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const CacheError& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
