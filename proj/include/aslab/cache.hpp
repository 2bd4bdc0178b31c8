#pragma once

// Binary result cache, one table per (machine digest, condition).
//
// Table file layout (all integers little endian):
//   magic "ASLB"
//   machine fields: format version byte, version_id (u8 len + bytes),
//     step budget u32, output cap u32, program-length cap u32, enum-order u8
//   u64 digest of the machine fields
//   condition: u32 bit count + packed MSB-first bytes
//   u64 entry count
//   entries sorted by output: u32 output bit count, packed bytes, u8 complexity
//   u64 whole-file digest (everything before this field)
//
// A sidecar (.wit) with the same header carries the witness program per
// entry so `verify` can spot-audit recorded witnesses without a rebuild.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aslab/complexity.hpp"

namespace aslab {

namespace cachefmt {

inline constexpr char kMagic[4] = {'A', 'S', 'L', 'B'};

inline std::uint64_t fnv1a(const std::uint8_t* data, std::size_t size) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

struct Writer {
    std::vector<std::uint8_t> bytes;

    void put_u8(std::uint8_t v) { bytes.push_back(v); }
    void put_u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) put_u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) put_u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) put_u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_bits(const BitString& s) {
        put_u32(static_cast<std::uint32_t>(s.size()));
        auto packed = s.packed_bytes();
        bytes.insert(bytes.end(), packed.begin(), packed.end());
    }
    void finish_with_digest() { put_u64(fnv1a(bytes.data(), bytes.size())); }
};

struct Reader {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;

    explicit Reader(const std::vector<std::uint8_t>& b) : bytes(b) {}

    void need(std::size_t n) const {
        if (pos + n > bytes.size()) throw CacheError("cache file truncated");
    }
    std::uint8_t get_u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint16_t get_u16() {
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(get_u8()) << (8 * i);
        return v;
    }
    std::uint32_t get_u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(get_u8()) << (8 * i);
        return v;
    }
    std::uint64_t get_u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(get_u8()) << (8 * i);
        return v;
    }
    BitString get_bits() {
        std::uint32_t count = get_u32();
        std::size_t nbytes = (count + 7) / 8;
        need(nbytes);
        std::vector<std::uint8_t> packed(bytes.begin() + pos, bytes.begin() + pos + nbytes);
        pos += nbytes;
        return BitString::from_packed_bytes(packed, count);
    }
};

inline void write_header(Writer& w, const MachineConfig& cfg) {
    w.bytes.insert(w.bytes.end(), kMagic, kMagic + 4);
    auto fields = cfg.serialized_fields();
    w.bytes.insert(w.bytes.end(), fields.begin(), fields.end());
    w.put_u64(cfg.digest());
}

/// Checks magic, field equality against cfg, and the embedded digest.
inline void read_header(Reader& r, const MachineConfig& cfg) {
    r.need(4);
    for (int i = 0; i < 4; ++i)
        if (r.bytes[r.pos + i] != static_cast<std::uint8_t>(kMagic[i]))
            throw CacheError("cache file has wrong magic");
    r.pos += 4;
    auto expected = cfg.serialized_fields();
    r.need(expected.size());
    std::vector<std::uint8_t> got(r.bytes.begin() + r.pos, r.bytes.begin() + r.pos + expected.size());
    std::uint64_t stored_digest_probe = fnv1a(got.data(), got.size());
    std::uint64_t stored = 0;
    {
        Reader peek(r.bytes);
        peek.pos = r.pos + expected.size();
        stored = peek.get_u64();
    }
    if (stored != stored_digest_probe)
        throw CacheError("cache header digest mismatch (corrupt or foreign file)");
    if (got != expected)
        throw CacheError("cache built under a different machine config (version mismatch)");
    r.pos += expected.size() + 8;
}

inline void check_footer(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8) throw CacheError("cache file truncated");
    Reader r(bytes);
    r.pos = bytes.size() - 8;
    std::uint64_t stored = r.get_u64();
    std::uint64_t computed = fnv1a(bytes.data(), bytes.size() - 8);
    if (stored != computed) throw CacheError("cache file digest mismatch");
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open cache file " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace cachefmt

inline std::string condition_key(const BitString& condition) {
    if (condition.empty()) return "uncond";
    std::ostringstream os;
    os << "c" << condition.size() << "_";
    for (std::uint8_t b : condition.packed_bytes()) {
        static const char* hex = "0123456789abcdef";
        os << hex[b >> 4] << hex[b & 15];
    }
    return os.str();
}

inline std::filesystem::path cache_dir_for(const std::filesystem::path& root,
                                           const MachineConfig& cfg) {
    std::ostringstream os;
    os << std::hex << cfg.digest();
    return root / os.str();
}

inline std::filesystem::path table_cache_path(const std::filesystem::path& root,
                                              const MachineConfig& cfg,
                                              const BitString& condition) {
    return cache_dir_for(root, cfg) / (condition_key(condition) + ".tbl");
}

inline std::filesystem::path witness_cache_path(const std::filesystem::path& root,
                                                const MachineConfig& cfg,
                                                const BitString& condition) {
    return cache_dir_for(root, cfg) / (condition_key(condition) + ".wit");
}

inline void write_table_cache(const std::filesystem::path& root, const ComplexityTable& table) {
    const MachineConfig& cfg = table.config();
    std::filesystem::create_directories(cache_dir_for(root, cfg));

    cachefmt::Writer tbl;
    cachefmt::write_header(tbl, cfg);
    tbl.put_bits(table.condition());
    tbl.put_u64(table.entries().size());
    for (const auto& e : table.entries()) {
        tbl.put_bits(e.output);
        tbl.put_u8(e.complexity);
    }
    tbl.finish_with_digest();
    cachefmt::write_file(table_cache_path(root, cfg, table.condition()), tbl.bytes);

    cachefmt::Writer wit;
    cachefmt::write_header(wit, cfg);
    wit.put_bits(table.condition());
    wit.put_u64(table.entries().size());
    for (const auto& e : table.entries()) {
        wit.put_u8(e.witness.length);
        wit.put_u32(e.witness.value);
        wit.put_u16(e.witness_steps);
    }
    wit.finish_with_digest();
    cachefmt::write_file(witness_cache_path(root, cfg, table.condition()), wit.bytes);
}

inline ComplexityTable read_table_cache(const std::filesystem::path& root,
                                        const MachineConfig& cfg, const BitString& condition) {
    auto tbl_bytes = cachefmt::read_file(table_cache_path(root, cfg, condition));
    cachefmt::check_footer(tbl_bytes);
    cachefmt::Reader tbl(tbl_bytes);
    cachefmt::read_header(tbl, cfg);
    BitString stored_condition = tbl.get_bits();
    if (!(stored_condition == condition))
        throw CacheError("cache file stores a different condition");
    std::uint64_t count = tbl.get_u64();
    std::vector<TableEntry> entries(count);
    for (auto& e : entries) {
        e.output = tbl.get_bits();
        e.complexity = tbl.get_u8();
    }

    auto wit_bytes = cachefmt::read_file(witness_cache_path(root, cfg, condition));
    cachefmt::check_footer(wit_bytes);
    cachefmt::Reader wit(wit_bytes);
    cachefmt::read_header(wit, cfg);
    BitString wit_condition = wit.get_bits();
    if (!(wit_condition == condition)) throw CacheError("witness sidecar condition mismatch");
    if (wit.get_u64() != count) throw CacheError("witness sidecar entry count mismatch");
    for (auto& e : entries) {
        e.witness.length = wit.get_u8();
        e.witness.value = wit.get_u32();
        e.witness_steps = wit.get_u16();
        if (e.witness.length != e.complexity)
            throw CacheError("witness length disagrees with recorded complexity");
    }
    return ComplexityTable(cfg, condition, std::move(entries));
}

struct CacheVerifyReport {
    unsigned tables_checked = 0;
    unsigned witnesses_audited = 0;
    std::vector<std::string> failures;  // "path: reason"
    bool clean() const { return failures.empty(); }
};

/// Re-derives digests for every cache file under the config's directory and
/// spot-audits 1% of witnesses (every 100th entry, always including the first).
inline CacheVerifyReport verify_cache_dir(const std::filesystem::path& root,
                                          const MachineConfig& cfg) {
    CacheVerifyReport report;
    auto dir = cache_dir_for(root, cfg);
    if (!std::filesystem::exists(dir)) return report;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".tbl") continue;
        ++report.tables_checked;
        try {
            auto bytes = cachefmt::read_file(entry.path());
            cachefmt::check_footer(bytes);
            cachefmt::Reader r(bytes);
            cachefmt::read_header(r, cfg);
            BitString condition = r.get_bits();
            ComplexityTable table = read_table_cache(root, cfg, condition);
            const auto& entries = table.entries();
            for (std::size_t i = 0; i < entries.size(); i += 100) {
                RunResult run_result = run(cfg, entries[i].witness, condition);
                if (!run_result.halted() || !(run_result.output == entries[i].output) ||
                    run_result.steps != entries[i].witness_steps)
                    throw CacheError("witness audit failed at entry " + std::to_string(i));
                ++report.witnesses_audited;
            }
        } catch (const std::exception& e) {
            report.failures.push_back(entry.path().string() + ": " + e.what());
        }
    }
    return report;
}

/// Removes cache files that fail verification. Returns the removed paths.
inline std::vector<std::string> invalidate_cache_dir(const std::filesystem::path& root,
                                                     const MachineConfig& cfg) {
    std::vector<std::string> removed;
    auto report = verify_cache_dir(root, cfg);
    for (const auto& failure : report.failures) {
        auto colon = failure.find(": ");
        std::filesystem::path tbl = failure.substr(0, colon);
        std::filesystem::path wit = tbl;
        wit.replace_extension(".wit");
        std::error_code ec;
        if (std::filesystem::remove(tbl, ec)) removed.push_back(tbl.string());
        if (std::filesystem::remove(wit, ec)) removed.push_back(wit.string());
    }
    return removed;
}

}  // namespace aslab
