#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "aslab/machine.hpp"
#include "aslab/totality.hpp"

using namespace aslab;

namespace {
const MachineConfig kDefault{};

RunResult run_bits(const std::string& program, const std::string& condition,
                   const MachineConfig& cfg = kDefault) {
    return run(cfg, BitString(program), BitString(condition));
}
}  // namespace

TEST_CASE("opcode table reference runs") {
    SECTION("empty program halts immediately with empty output") {
        auto r = run_bits("", "");
        REQUIRE(r.halted());
        CHECK(r.output.empty());
        CHECK(r.steps == 0);
    }
    SECTION("single OUT1") {
        auto r = run_bits("001", "");
        REQUIRE(r.halted());
        CHECK(r.output.str() == "1");
        CHECK(r.steps == 1);
    }
    SECTION("copy loop READ CEND JBACK reproduces the condition") {
        auto r = run_bits("010100110", "10");
        REQUIRE(r.halted());
        CHECK(r.output.str() == "10");
    }
    SECTION("JBACK at index 0 spins until the step budget") {
        auto r = run_bits("110", "");
        CHECK(r.status == RunResult::Status::StepBudget);
        CHECK(r.steps == kDefault.step_budget);
    }
    SECTION("trailing one or two bits are ignored") {
        auto base = run_bits("001", "");
        CHECK(run_bits("0011", "").output == base.output);
        CHECK(run_bits("00100", "").output == base.output);
    }
    SECTION("DUP doubles the output and diverges past the cap") {
        auto r = run_bits("001111111", "");
        REQUIRE(r.halted());
        CHECK(r.output.str() == "1111");
        MachineConfig tight = kDefault;
        tight.output_cap = 3;
        auto capped = run(tight, BitString("001111111"), lambda());
        CHECK(capped.status == RunResult::Status::OutputCap);
    }
    SECTION("READ past the end of the condition is a no-op") {
        auto r = run_bits("010010", "1");
        REQUIRE(r.halted());
        CHECK(r.output.str() == "1");
    }
}

TEST_CASE("copy loop is a 9-bit self-description for every condition") {
    const BitString copy("010100110");
    std::mt19937_64 rng(11);
    for (unsigned len = 0; len <= 8; ++len) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            BitString x = BitString::from_value(v, len);
            auto r = run(kDefault, copy, x);
            REQUIRE(r.halted());
            CHECK(r.output == x);
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        BitString x;
        for (int i = 0; i < 64; ++i) x.push_back(static_cast<int>(rng() & 1));
        auto r = run(kDefault, copy, x);
        REQUIRE(r.halted());
        CHECK(r.output == x);
    }
}

TEST_CASE("is_total_on") {
    Program cbit_jback = Program::from_bits(BitString("101110"));
    std::vector<BitString> both{BitString("0"), BitString("1")};
    std::vector<BitString> one{BitString("1")};
    CHECK_FALSE(is_total_on(kDefault, cbit_jback, both));
    CHECK(is_total_on(kDefault, cbit_jback, one));

    Program out1 = Program::from_bits(BitString("001"));
    CHECK(is_total_on(kDefault, out1, both));

    Program copy = Program::from_bits(BitString("010100110"));
    auto domain = DomainSpec::up_to_length(4).enumerate();
    CHECK(domain.size() == 31);
    CHECK(is_total_on(kDefault, copy, domain));
}

TEST_CASE("determinism: identical inputs give bit-identical results") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        unsigned len = static_cast<unsigned>(rng() % 19);
        Program p{static_cast<std::uint32_t>(rng() & ((1u << len) - 1)),
                  static_cast<std::uint8_t>(len)};
        BitString y = BitString::from_value(rng(), static_cast<unsigned>(rng() % 12));
        auto a = run(kDefault, p, y);
        auto b = run(kDefault, p, y);
        CHECK(a.status == b.status);
        CHECK(a.steps == b.steps);
        CHECK(a.output == b.output);
    }
}

TEST_CASE("straight-line programs never exhaust the step budget") {
    // Programs without JBACK halt within opcode_count() steps or hit the
    // output cap; the step budget is unreachable.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        unsigned len = static_cast<unsigned>(rng() % 19);
        std::uint32_t value = static_cast<std::uint32_t>(rng()) & ((1u << len) - 1);
        Program p{value, static_cast<std::uint8_t>(len)};
        bool has_jback = false;
        for (int i = 0; i < p.opcode_count(); ++i)
            if (p.opcode(i) == 6) has_jback = true;
        if (has_jback) continue;
        BitString y = BitString::from_value(rng(), static_cast<unsigned>(rng() % 8));
        auto r = run(kDefault, p, y);
        CHECK(r.status != RunResult::Status::StepBudget);
        if (r.halted()) CHECK(r.steps <= static_cast<std::uint32_t>(p.opcode_count()));
    }
}

TEST_CASE("budget monotonicity") {
    std::mt19937_64 rng(9);
    MachineConfig small = kDefault;
    small.step_budget = 16;
    small.output_cap = 8;
    MachineConfig big = kDefault;
    big.step_budget = 64;
    big.output_cap = 32;
    for (int trial = 0; trial < 2000; ++trial) {
        unsigned len = static_cast<unsigned>(rng() % 19);
        Program p{static_cast<std::uint32_t>(rng()) & ((1u << len) - 1),
                  static_cast<std::uint8_t>(len)};
        BitString y = BitString::from_value(rng(), static_cast<unsigned>(rng() % 8));
        auto a = run(small, p, y);
        if (!a.halted()) continue;
        auto b = run(big, p, y);
        REQUIRE(b.halted());
        CHECK(a.output == b.output);
        CHECK(a.steps == b.steps);
    }
}

TEST_CASE("totality is anti-monotone in the domain") {
    std::mt19937_64 rng(13);
    auto d1 = DomainSpec::up_to_length(3).enumerate();
    for (int trial = 0; trial < 500; ++trial) {
        unsigned len = static_cast<unsigned>(rng() % 13);
        Program p{static_cast<std::uint32_t>(rng()) & ((1u << len) - 1),
                  static_cast<std::uint8_t>(len)};
        if (!is_total_on(kDefault, p, d1)) continue;
        std::vector<BitString> d2;
        for (const auto& y : d1)
            if (rng() & 1) d2.push_back(y);
        CHECK(is_total_on(kDefault, p, d2));
    }
}

TEST_CASE("config digest is stable and sensitive to every field") {
    MachineConfig a;
    MachineConfig b;
    CHECK(a.digest() == b.digest());
    b.max_program_bits = 12;
    CHECK(a.digest() != b.digest());
    MachineConfig c;
    c.enum_order = EnumOrder::LengthLex;
    CHECK(a.digest() != c.digest());
    MachineConfig d;
    d.step_budget = 128;
    CHECK(a.digest() != d.digest());
}

TEST_CASE("program index round trip") {
    for (std::uint64_t idx = 0; idx < 2000; ++idx) {
        Program p = program_at_index(idx);
        CHECK(program_index(p) == idx);
    }
    CHECK(program_count(0) == 1);
    CHECK(program_count(3) == 15);
}
