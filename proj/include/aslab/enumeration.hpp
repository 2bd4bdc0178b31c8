#pragma once

// Exhaustive program enumeration: builds complexity tables and the
// appearance streams ("a string appears when its first program halts")
// that every proof procedure consumes.
//
// Construction is a map-reduce over contiguous program-index ranges; the
// merge is canonical (min / concat-and-prune), so the result is identical
// for every worker partitioning.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "aslab/complexity.hpp"

namespace aslab {

/// One appearance event: the first time an output shows up in the
/// enumeration restricted to programs of length <= the stream budget.
struct AppearanceEvent {
    std::uint32_t steps = 0;
    Program program;
    std::uint32_t output_id = 0;  // index into the table's sorted entries
};

namespace detail {

/// Pareto front of halting events for one output, sorted by program length
/// ascending with strictly decreasing dovetail keys (steps, length, value).
/// The first event within budget L is the last front entry of length <= L.
struct FrontEntry {
    std::uint32_t steps;
    Program program;
};

inline bool dovetail_less(std::uint32_t steps_a, Program a, std::uint32_t steps_b, Program b) {
    if (steps_a != steps_b) return steps_a < steps_b;
    return a < b;
}

}  // namespace detail

/// The unconditional enumeration: complexity table plus appearance order
/// machinery for every budget. Immutable after construction; memoized
/// per-budget streams are guarded by a mutex so concurrent reads are safe.
class Enumeration {
public:
    Enumeration(ComplexityTable table, std::vector<std::vector<detail::FrontEntry>> fronts)
        : table_(std::move(table)), fronts_(std::move(fronts)),
          memo_(std::make_unique<Memo>()) {}

    const ComplexityTable& table() const { return table_; }
    const MachineConfig& config() const { return table_.config(); }

    const BitString& output(std::uint32_t id) const { return table_.entries()[id].output; }

    /// Distinct outputs of complexity <= budget, in appearance order.
    const std::vector<AppearanceEvent>& appearance_stream(unsigned budget) const {
        std::lock_guard lock(memo_->mutex);
        auto it = memo_->streams.find(budget);
        if (it != memo_->streams.end()) return *it->second;
        auto stream = std::make_unique<std::vector<AppearanceEvent>>(build_stream(budget));
        auto [pos, inserted] = memo_->streams.emplace(budget, std::move(stream));
        (void)inserted;
        return *pos->second;
    }

    /// Count of distinct outputs of complexity <= budget (stream side).
    std::uint64_t omega_from_stream(unsigned budget) const {
        return appearance_stream(budget).size();
    }

    /// Count of distinct outputs of complexity <= budget (histogram side).
    std::uint64_t omega(unsigned budget) const { return table_.omega(budget); }

    /// Appearance rank (0-based) of an output within the budget stream.
    std::uint32_t appearance_rank(const BitString& output, unsigned budget) const {
        auto id = table_.entry_index(output);
        if (!id || table_.entries()[*id].complexity > budget)
            throw InvariantViolation("appearance_rank: complexity of " + output.str() +
                                     " exceeds budget " + std::to_string(budget));
        const auto& ranks = rank_vector(budget);
        return ranks[*id];
    }

    /// Number of distinct outputs of complexity <= budget appearing strictly
    /// after x in the enumeration (the proof procedures' N).
    std::uint64_t count_after(const BitString& x, unsigned budget) const {
        std::uint64_t total = omega(budget);
        return total - 1 - appearance_rank(x, budget);
    }

    /// Appearance stream filtered to set outputs: bitmaps of the n-universe,
    /// i.e. outputs of length exactly 2^n.
    std::vector<AppearanceEvent> set_appearance_stream(unsigned budget, unsigned n) const {
        const auto& all = appearance_stream(budget);
        const std::size_t want = std::size_t{1} << n;
        std::vector<AppearanceEvent> out;
        for (const auto& e : all)
            if (output(e.output_id).size() == want) out.push_back(e);
        return out;
    }

    std::uint64_t omega_set(unsigned budget, unsigned n) const {
        return set_appearance_stream(budget, n).size();
    }

private:
    std::vector<AppearanceEvent> build_stream(unsigned budget) const {
        std::vector<AppearanceEvent> events;
        const auto& entries = table_.entries();
        if (config().enum_order == EnumOrder::LengthLex) {
            for (std::uint32_t id = 0; id < entries.size(); ++id) {
                if (entries[id].complexity > budget) continue;
                events.push_back({entries[id].witness_steps, entries[id].witness, id});
            }
            std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
                return a.program < b.program;
            });
        } else {
            for (std::uint32_t id = 0; id < entries.size(); ++id) {
                if (entries[id].complexity > budget) continue;
                const auto& front = fronts_[id];
                // last front entry with program length <= budget
                const detail::FrontEntry* best = nullptr;
                for (const auto& fe : front) {
                    if (fe.program.length > budget) break;
                    best = &fe;
                }
                events.push_back({best->steps, best->program, id});
            }
            std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
                return detail::dovetail_less(a.steps, a.program, b.steps, b.program);
            });
        }
        return events;
    }

    const std::vector<std::uint32_t>& rank_vector(unsigned budget) const {
        // caller holds no lock; appearance_stream takes it, so compute first
        const auto& stream = appearance_stream(budget);
        std::lock_guard lock(memo_->mutex);
        auto it = memo_->ranks.find(budget);
        if (it != memo_->ranks.end()) return *it->second;
        auto ranks = std::make_unique<std::vector<std::uint32_t>>(table_.entries().size(), 0);
        for (std::uint32_t r = 0; r < stream.size(); ++r)
            (*ranks)[stream[r].output_id] = r;
        auto [pos, inserted] = memo_->ranks.emplace(budget, std::move(ranks));
        (void)inserted;
        return *pos->second;
    }

    struct Memo {
        std::mutex mutex;
        std::map<unsigned, std::unique_ptr<std::vector<AppearanceEvent>>> streams;
        std::map<unsigned, std::unique_ptr<std::vector<std::uint32_t>>> ranks;
    };

    ComplexityTable table_;
    std::vector<std::vector<detail::FrontEntry>> fronts_;  // by output id
    std::unique_ptr<Memo> memo_;
};

namespace detail {

struct LocalEntry {
    Program min_program;
    std::uint32_t min_steps = 0;
    std::vector<FrontEntry> front;
};

using LocalMap = std::unordered_map<BitString, LocalEntry, BitStringHash>;

inline LocalMap scan_range(const MachineConfig& cfg, const std::vector<std::uint8_t>& cond,
                           std::uint64_t begin, std::uint64_t end, bool collect_fronts) {
    LocalMap local;
    std::vector<std::uint8_t> out(cfg.output_cap);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
        Program p = program_at_index(idx);
        auto raw = run_raw(cfg, p, cond.data(), static_cast<std::uint32_t>(cond.size()), out.data());
        if (raw.status != RunResult::Status::Halted) continue;
        BitString output = BitString::from_bytes(out.data(), raw.out_len);
        auto [it, fresh] = local.try_emplace(std::move(output));
        LocalEntry& entry = it->second;
        if (fresh) {
            entry.min_program = p;
            entry.min_steps = raw.steps;
        }
        if (collect_fronts) {
            if (entry.front.empty() ||
                dovetail_less(raw.steps, p, entry.front.back().steps, entry.front.back().program))
                entry.front.push_back({raw.steps, p});
        }
    }
    return local;
}

/// Canonical front: sort candidates by program, keep strictly improving
/// dovetail keys. Independent of how candidates were partitioned.
inline std::vector<FrontEntry> prune_front(std::vector<FrontEntry> candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const FrontEntry& a, const FrontEntry& b) {
        return a.program < b.program;
    });
    std::vector<FrontEntry> front;
    for (const auto& c : candidates)
        if (front.empty() || dovetail_less(c.steps, c.program, front.back().steps, front.back().program))
            front.push_back(c);
    return front;
}

struct MergedScan {
    std::vector<TableEntry> entries;                    // sorted by output
    std::vector<std::vector<FrontEntry>> fronts;        // aligned with entries
};

inline MergedScan scan_programs(const MachineConfig& cfg, const BitString& condition,
                                unsigned workers, bool collect_fronts) {
    cfg.validate();
    if (condition.size() > 2 * static_cast<std::size_t>(cfg.output_cap))
        throw InfeasibleError("condition exceeds 2 * output_cap bits");
    const std::uint64_t total = program_count(cfg.max_program_bits);
    if (workers == 0) workers = 1;
    if (workers > total) workers = static_cast<unsigned>(total);
    auto cond = unpack_condition(condition);

    std::vector<LocalMap> locals(workers);
    if (workers == 1) {
        locals[0] = scan_range(cfg, cond, 0, total, collect_fronts);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t begin = total * w / workers;
            std::uint64_t end = total * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                locals[w] = scan_range(cfg, cond, begin, end, collect_fronts);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::unordered_map<BitString, LocalEntry, BitStringHash> merged;
    for (auto& local : locals) {
        for (auto& [output, entry] : local) {
            auto [it, fresh] = merged.try_emplace(output);
            LocalEntry& target = it->second;
            if (fresh) {
                target = std::move(entry);
                continue;
            }
            if (entry.min_program < target.min_program) {
                target.min_program = entry.min_program;
                target.min_steps = entry.min_steps;
            }
            target.front.insert(target.front.end(), entry.front.begin(), entry.front.end());
        }
    }

    MergedScan result;
    result.entries.reserve(merged.size());
    std::vector<std::pair<BitString, LocalEntry>> flat;
    flat.reserve(merged.size());
    for (auto& kv : merged) flat.emplace_back(kv.first, std::move(kv.second));
    std::sort(flat.begin(), flat.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [output, entry] : flat) {
        TableEntry te;
        te.output = output;
        te.complexity = entry.min_program.length;
        te.witness = entry.min_program;
        te.witness_steps = static_cast<std::uint16_t>(entry.min_steps);
        result.entries.push_back(std::move(te));
        if (collect_fronts) result.fronts.push_back(prune_front(std::move(entry.front)));
    }
    return result;
}

}  // namespace detail

inline unsigned default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

/// Builds the complexity table for one condition (no appearance machinery).
inline ComplexityTable build_table(const MachineConfig& cfg, const BitString& condition,
                                   unsigned workers = default_workers()) {
    auto scan = detail::scan_programs(cfg, condition, workers, /*collect_fronts=*/false);
    ComplexityTable table(cfg, condition, std::move(scan.entries));
    table.audit_witnesses();
    return table;
}

/// Builds the unconditional enumeration with appearance streams.
inline Enumeration build_enumeration(const MachineConfig& cfg,
                                     unsigned workers = default_workers()) {
    auto scan = detail::scan_programs(cfg, lambda(), workers, /*collect_fronts=*/true);
    ComplexityTable table(cfg, lambda(), std::move(scan.entries));
    table.audit_witnesses();
    return Enumeration(std::move(table), std::move(scan.fronts));
}

}  // namespace aslab
