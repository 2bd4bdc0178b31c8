#pragma once

// The lab ties one machine config to its enumeration, conditional tables,
// and optional on-disk cache. Tables are built lazily per condition and are
// immutable once built; all accessors are safe for concurrent readers.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "aslab/cache.hpp"
#include "aslab/enumeration.hpp"
#include "aslab/sets.hpp"

namespace aslab {

class Lab {
public:
    explicit Lab(MachineConfig cfg = {},
                 std::optional<std::filesystem::path> cache_root = std::nullopt,
                 unsigned workers = default_workers())
        : cfg_(std::move(cfg)), cache_root_(std::move(cache_root)), workers_(workers) {
        cfg_.validate();
    }

    const MachineConfig& config() const { return cfg_; }
    unsigned workers() const { return workers_; }
    const std::optional<std::filesystem::path>& cache_root() const { return cache_root_; }

    /// The unconditional enumeration (appearance streams included). Always
    /// built in memory; its table is mirrored to the cache when one is set.
    const Enumeration& enumeration() const {
        std::call_once(enum_once_, [this] {
            enum_ = std::make_unique<Enumeration>(build_enumeration(cfg_, workers_));
            if (cache_root_) write_table_cache(*cache_root_, enum_->table());
        });
        return *enum_;
    }

    /// The complexity table for one condition; loaded from cache when a
    /// valid file exists, otherwise built and written back.
    const ComplexityTable& conditional(const BitString& condition) const {
        if (condition.empty()) return enumeration().table();
        {
            std::lock_guard lock(tables_mutex_);
            auto it = tables_.find(condition);
            if (it != tables_.end()) return *it->second;
        }
        std::unique_ptr<ComplexityTable> table;
        if (cache_root_ && std::filesystem::exists(table_cache_path(*cache_root_, cfg_, condition))) {
            table = std::make_unique<ComplexityTable>(read_table_cache(*cache_root_, cfg_, condition));
        } else {
            table = std::make_unique<ComplexityTable>(build_table(cfg_, condition, workers_));
            if (cache_root_) write_table_cache(*cache_root_, *table);
        }
        std::lock_guard lock(tables_mutex_);
        auto [it, inserted] = tables_.emplace(condition, std::move(table));
        (void)inserted;
        return *it->second;
    }

    Complexity c(const BitString& x) const { return enumeration().table().complexity_of(x); }

    Complexity c_cond(const BitString& x, const BitString& y) const {
        return conditional(y).complexity_of(x);
    }

    Complexity c_set(const SetBitmap& set) const {
        return enumeration().table().complexity_of(set.to_bits());
    }

    std::uint64_t omega(unsigned budget) const { return enumeration().omega(budget); }
    std::uint64_t omega_set(unsigned budget, unsigned n) const {
        return enumeration().omega_set(budget, n);
    }

    /// Omega_k rendered as a machine condition: fixed-width k+1 bit numeral,
    /// MSB first (Omega_k <= 2^(k+1) - 1 always fits).
    BitString omega_numeral(unsigned k) const {
        return BitString::from_value(omega(k), k + 1);
    }

    std::uint64_t count_after(const BitString& x, unsigned budget) const {
        return enumeration().count_after(x, budget);
    }

private:
    MachineConfig cfg_;
    std::optional<std::filesystem::path> cache_root_;
    unsigned workers_;
    mutable std::once_flag enum_once_;
    mutable std::unique_ptr<Enumeration> enum_;
    mutable std::mutex tables_mutex_;
    mutable std::map<BitString, std::unique_ptr<ComplexityTable>> tables_;
};

}  // namespace aslab
