// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cstdint>

#include "doctest.h"
#include "fenn/core.hpp"
#include "fenn/fixedpoint.hpp"
#include "support/rv32_model.hpp"

using namespace fenn;
using isa::Op;

namespace {

// Vector-memory base register used by most programs here.
void load_vmem_base(ProgramBuilder& b, int rd) { b.lui(rd, 0x20000); }

std::array<int16_t, 32> iota_lanes(int16_t base, int16_t step)
{
    std::array<int16_t, 32> lanes{};
    for (int l = 0; l < 32; ++l) lanes[size_t(l)] = int16_t(base + step * l);
    return lanes;
}

} // namespace

TEST_CASE("threshold mask: lanes 0 and 31 set gives 0x80000001")
{
    ProgramBuilder b;
    std::array<int16_t, 32> v1{};
    std::array<int16_t, 32> v2{};
    v2.fill(100);
    v1[0] = -5;   // lane 0: v1 < v2
    v1[31] = 99;  // lane 31: v1 < v2
    for (int l = 1; l < 31; ++l) v1[size_t(l)] = int16_t(100 + l); // not less
    b.set_vector(0, v1);
    b.set_vector(1, v2);
    load_vmem_base(b, 1);
    b.vload(1, 1, 0);
    b.vload(2, 1, 1);
    b.vtlt(5, 1, 2);
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    REQUIRE(m.halted());
    CHECK(m.x(5) == 0x80000001u);
}

TEST_CASE("mask tests: all four comparisons")
{
    Machine m;
    ProgramBuilder b;
    b.vteq(5, 1, 2);
    b.vtne(6, 1, 2);
    b.vtlt(7, 1, 2);
    b.vtge(8, 1, 2);
    b.ecall();
    m.load(b.finalize());
    std::array<int16_t, 32> a{};
    std::array<int16_t, 32> c{};
    a[0] = 5; c[0] = 5;    // equal
    a[1] = -1; c[1] = 0;   // less (signed)
    a[2] = 7;  c[2] = -9;  // greater
    m.set_v(1, a);
    m.set_v(2, c);
    m.run();
    // Lanes 3..31 are all zero pairs: equal.
    const uint32_t eq = m.x(5), ne = m.x(6), lt = m.x(7), ge = m.x(8);
    CHECK(eq == (0xFFFFFFFFu & ~0x6u));
    CHECK(ne == 0x6u);
    CHECK(lt == 0x2u);
    CHECK(ge == ~0x2u);
    CHECK((eq ^ ne) == 0xFFFFFFFFu);
    CHECK((lt ^ ge) == 0xFFFFFFFFu);
}

TEST_CASE("vector add/sub: wrapping and saturating variants")
{
    ProgramBuilder b;
    b.vadd(3, 1, 2);
    b.vadd_s(4, 1, 2);
    b.vsub(5, 1, 2);
    b.vsub_s(6, 1, 2);
    b.ecall();
    Machine m;
    m.load(b.finalize());
    std::array<int16_t, 32> a{};
    std::array<int16_t, 32> c{};
    a[0] = 32767; c[0] = 1;
    a[1] = -32768; c[1] = -1;
    a[2] = -32768; c[2] = 1;
    a[3] = 1000; c[3] = 234;
    m.set_v(1, a);
    m.set_v(2, c);
    m.run();
    CHECK(m.v(3)[0] == -32768); // wrapped
    CHECK(m.v(4)[0] == 32767);  // saturated
    CHECK(m.v(3)[1] == 32767);
    CHECK(m.v(4)[1] == -32768);
    CHECK(m.v(5)[2] == 32767);  // -32768 - 1 wraps
    CHECK(m.v(6)[2] == -32768); // saturates
    CHECK(m.v(3)[3] == 1234);
    CHECK(m.v(5)[3] == 766);
    // Source registers unchanged.
    CHECK(m.v(1)[0] == 32767);
}

TEST_CASE("vector multiply: deterministic modes match the lane primitive")
{
    const auto a = iota_lanes(-16000, 1000);
    const auto c = iota_lanes(31000, -2000);
    for (const int shift : {0, 7, 15}) {
        for (const RoundingMode mode : {RoundingMode::RoundToZero, RoundingMode::RoundToNearest}) {
            ProgramBuilder b;
            b.vmul(3, 1, 2, shift, mode);
            b.ecall();
            Machine m;
            m.load(b.finalize());
            m.set_v(1, a);
            m.set_v(2, c);
            m.run();
            for (int l = 0; l < 32; ++l)
                CHECK(m.v(3)[size_t(l)]
                      == fx_mul_raw(a[size_t(l)], c[size_t(l)], shift, mode));
        }
    }
}

TEST_CASE("rng seeding, generation and stochastic entropy consumption")
{
    const SeedImage image = make_seed_image(123);
    ProgramBuilder b;
    std::array<int16_t, 32> s0{};
    std::array<int16_t, 32> s1{};
    for (int l = 0; l < 32; ++l) {
        s0[size_t(l)] = int16_t(image[0][size_t(l)]);
        s1[size_t(l)] = int16_t(image[1][size_t(l)]);
    }
    b.set_vector(0, s0);
    b.set_vector(1, s1);
    load_vmem_base(b, 1);
    b.vload_r0(1, 0);
    b.vload_r1(1, 1);
    b.vrng(2);                                       // first draw
    b.vmul(3, 2, 2, 15, RoundingMode::RoundToZero);  // must not draw
    b.vmul(4, 2, 2, 15, RoundingMode::Stochastic);   // draws on every lane
    b.vrng(5);                                       // third draw
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    REQUIRE(m.halted());

    VectorRngState host = seed_state(image);
    const auto first = host.next();
    const auto second = host.next();
    const auto third = host.next();
    for (int l = 0; l < 32; ++l) {
        CHECK(m.v(2)[size_t(l)] == int16_t(first[size_t(l)]));
        // Deterministic multiply left the stream untouched; the stochastic
        // one consumed `second` as its per-lane rounding entropy.
        CHECK(m.v(4)[size_t(l)]
              == fx_mul_raw(m.v(2)[size_t(l)], m.v(2)[size_t(l)], 15,
                            RoundingMode::Stochastic, second[size_t(l)]));
        CHECK(m.v(5)[size_t(l)] == int16_t(third[size_t(l)]));
    }
    CHECK(m.rng() == host);
}

TEST_CASE("vbcast, vextract and vsel")
{
    ProgramBuilder b;
    b.li(1, 0x9ABCDEF0);
    b.vbcast(1, 1);            // broadcast low half 0xDEF0
    b.vextract(5, 1, 0);       // sign-extended
    b.li(2, 0x7FFF);
    b.vbcast(2, 2);
    b.vextract(6, 2, 31);
    b.li(3, int32_t(0xF0F0F0F0));
    b.vsel(3, 1, 2, 3);        // v3 = mask ? v1 : v2
    b.vextract(7, 3, 0);       // mask bit 0 clear -> v2
    b.vextract(8, 3, 4);       // mask bit 4 set -> v1
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    CHECK(m.v(1)[0] == int16_t(0xDEF0));
    CHECK(m.x(5) == 0xFFFFDEF0u); // sign extension of 0xDEF0
    CHECK(m.x(6) == 0x7FFFu);
    CHECK(m.x(7) == 0x7FFFu);
    CHECK(m.x(8) == 0xFFFFDEF0u);
}

TEST_CASE("vector load/store round-trip through vector memory")
{
    ProgramBuilder b;
    const auto data = iota_lanes(-100, 7);
    b.set_vector(2, data);
    load_vmem_base(b, 1);
    b.vload(1, 1, 2);   // from vector index 2
    b.vstore(1, 1, 5);  // to vector index 5
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    CHECK(m.v(1) == data);
    CHECK(m.read_vector(kVmemBase + 5 * kVectorBytes) == data);
    // Negative vector offsets address backwards from the base register.
    ProgramBuilder b2;
    b2.set_vector(0, data);
    load_vmem_base(b2, 1);
    b2.addi(1, 1, 3 * 64);
    b2.vload(4, 1, -3);
    b2.ecall();
    Machine m2;
    m2.load(b2.finalize());
    m2.run();
    CHECK(m2.v(4) == data);
}

TEST_CASE("scalar conformance against an independent model")
{
    HostRng rng(20240817);
    for (int prog = 0; prog < 300; ++prog) {
        const auto sample = rv32model::random_conformance_program(rng, 50);
        REQUIRE(rv32model::conformance_agrees(sample));
    }
}

TEST_CASE("x0 is hardwired to zero")
{
    ProgramBuilder b;
    b.addi(0, 0, 55);
    b.li(1, int32_t(kDmemBase));
    b.sw(1, 1, 0);      // park a nonzero word
    b.lw(0, 1, 0);      // load into x0 is discarded
    b.add(0, 1, 1);
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    CHECK(m.x(0) == 0);
    m.set_x(0, 99);
    CHECK(m.x(0) == 0);
}

TEST_CASE("cycle accounting: straight-line base cost")
{
    ProgramBuilder b;
    b.addi(1, 0, 1);
    b.addi(2, 0, 2);
    b.add(3, 1, 2);
    b.ecall();
    Machine m;
    m.load(b.finalize());
    const RunResult r = m.run();
    CHECK(r.retired == 4);
    CHECK(r.cycles == 4);
    CHECK(m.total_stats().cycles == 4);
    CHECK(m.total_stats().retired[size_t(isa::OpClass::ScalarAlu)] == 3);
    CHECK(m.total_stats().retired[size_t(isa::OpClass::Control)] == 1);
}

TEST_CASE("cycle accounting: taken and untaken branches")
{
    // Untaken branch costs the base cycle only.
    ProgramBuilder b;
    const Label skip = b.make_label();
    b.bne(0, 0, skip); // never taken
    b.bind(skip);
    b.ecall();
    Machine m;
    m.load(b.finalize());
    CHECK(m.run().cycles == 2);

    // Taken branch adds two cycles.
    ProgramBuilder t;
    const Label target = t.make_label();
    t.beq(0, 0, target);
    t.bind(target);
    t.ecall();
    m.load(t.finalize());
    CHECK(m.run().cycles == 4);

    // Jumps are always taken.
    ProgramBuilder j;
    const Label jt = j.make_label();
    j.jal(1, jt);
    j.bind(jt);
    j.ecall();
    m.load(j.finalize());
    CHECK(m.run().cycles == 4);

    ProgramBuilder jr;
    jr.addi(1, 0, 8);
    jr.jalr(2, 1, 0);
    jr.ecall();
    m.load(jr.finalize());
    CHECK(m.run().cycles == 5); // addi 1 + jalr 3 + ecall 1
}

TEST_CASE("cycle accounting: vector load-use interlock")
{
    const auto run_cycles = [](ProgramBuilder& b) {
        b.ecall();
        Machine m;
        m.load(b.finalize());
        const RunResult r = m.run();
        REQUIRE(m.halted());
        return r.cycles - r.retired; // extra cycles beyond base
    };

    // Dependent vector ALU op immediately after the load stalls one cycle.
    ProgramBuilder dep;
    load_vmem_base(dep, 1);
    dep.vload(1, 1, 0);
    dep.vadd(3, 1, 2);
    CHECK(run_cycles(dep) == 1);

    // Independent op after the load does not.
    ProgramBuilder indep;
    load_vmem_base(indep, 1);
    indep.vload(1, 1, 0);
    indep.vadd(3, 2, 2);
    CHECK(run_cycles(indep) == 0);

    // One intervening instruction hides the latency.
    ProgramBuilder hidden;
    load_vmem_base(hidden, 1);
    hidden.vload(1, 1, 0);
    hidden.addi(2, 0, 1);
    hidden.vadd(3, 1, 1);
    CHECK(run_cycles(hidden) == 0);

    // The store data register counts as a use.
    ProgramBuilder st;
    load_vmem_base(st, 1);
    st.vload(1, 1, 0);
    st.vstore(1, 1, 1);
    CHECK(run_cycles(st) == 1);

    // A second load of the same register is not a use.
    ProgramBuilder reload;
    load_vmem_base(reload, 1);
    reload.vload(1, 1, 0);
    reload.vload(1, 1, 1);
    CHECK(run_cycles(reload) == 0);

    // Extract reads the loaded register.
    ProgramBuilder ex;
    load_vmem_base(ex, 1);
    ex.vload(1, 1, 0);
    ex.vextract(5, 1, 3);
    CHECK(run_cycles(ex) == 1);

    // Select reads both selected registers, whichever slot names them.
    ProgramBuilder sel1;
    load_vmem_base(sel1, 1);
    sel1.vload(1, 1, 0);
    sel1.vsel(4, 1, 2, 0);
    CHECK(run_cycles(sel1) == 1);

    ProgramBuilder sel2;
    load_vmem_base(sel2, 1);
    sel2.vload(1, 1, 0);
    sel2.vsel(4, 2, 1, 0);
    CHECK(run_cycles(sel2) == 1);

    // Broadcast does not read any vector register.
    ProgramBuilder bc;
    load_vmem_base(bc, 1);
    bc.vload(1, 1, 0);
    bc.vbcast(1, 1);
    CHECK(run_cycles(bc) == 0);
}

TEST_CASE("cycle accounting: rng seed-load interlock")
{
    const auto run_cycles = [](ProgramBuilder& b) {
        b.ecall();
        Machine m;
        m.load(b.finalize());
        const RunResult r = m.run();
        REQUIRE(m.halted());
        return r.cycles - r.retired;
    };

    // VRNG straight after a seed load stalls.
    ProgramBuilder rng_dep;
    load_vmem_base(rng_dep, 1);
    rng_dep.vload_r0(1, 0);
    rng_dep.vrng(2);
    CHECK(run_cycles(rng_dep) == 1);

    // Stochastic multiply consumes the stream, so it stalls too.
    ProgramBuilder mul_dep;
    load_vmem_base(mul_dep, 1);
    mul_dep.vload_r1(1, 1);
    mul_dep.vmul(3, 2, 2, 15, RoundingMode::Stochastic);
    CHECK(run_cycles(mul_dep) == 1);

    // A deterministic multiply does not consume entropy: no stall.
    ProgramBuilder mul_rtz;
    load_vmem_base(mul_rtz, 1);
    mul_rtz.vload_r0(1, 0);
    mul_rtz.vmul(3, 2, 2, 15, RoundingMode::RoundToZero);
    CHECK(run_cycles(mul_rtz) == 0);

    // Unrelated vector work after a seed load is free as well.
    ProgramBuilder other;
    load_vmem_base(other, 1);
    other.vload_r0(1, 0);
    other.vadd(3, 2, 2);
    CHECK(run_cycles(other) == 0);

    // One intervening instruction clears the hazard window.
    ProgramBuilder gap;
    load_vmem_base(gap, 1);
    gap.vload_r0(1, 0);
    gap.addi(2, 0, 1);
    gap.vrng(2);
    CHECK(run_cycles(gap) == 0);
}

TEST_CASE("traps: scalar memory")
{
    const auto expect_trap = [](ProgramBuilder& b, TrapCause cause) {
        b.ecall();
        Machine m;
        m.load(b.finalize());
        const Stats before = m.total_stats();
        const RunResult r = m.run();
        CHECK(!m.halted());
        CHECK(m.trap() == cause);
        CHECK(r.trap == cause);
        // The trapped step cost one cycle but retired nothing.
        CHECK(m.total_stats().retired_total() == r.retired);
        CHECK(before.retired_total() == 0);
    };

    ProgramBuilder lw_mis;
    lw_mis.li(1, int32_t(kDmemBase + 2));
    lw_mis.lw(2, 1, 0);
    expect_trap(lw_mis, TrapCause::LoadMisaligned);

    ProgramBuilder lh_mis;
    lh_mis.li(1, int32_t(kDmemBase + 1));
    lh_mis.lh(2, 1, 0);
    expect_trap(lh_mis, TrapCause::LoadMisaligned);

    ProgramBuilder lw_low;
    lw_low.li(1, 0);
    lw_low.lw(2, 1, 0); // instruction memory is not loadable
    expect_trap(lw_low, TrapCause::LoadAccessFault);

    ProgramBuilder lw_vec;
    lw_vec.li(1, int32_t(kVmemBase));
    lw_vec.lw(2, 1, 0); // vector memory is not scalar-loadable
    expect_trap(lw_vec, TrapCause::LoadAccessFault);

    ProgramBuilder lw_end;
    lw_end.li(1, int32_t(kDmemBase + 128 * 1024));
    lw_end.lw(2, 1, 0);
    expect_trap(lw_end, TrapCause::LoadAccessFault);

    ProgramBuilder lw_span;
    lw_span.li(1, int32_t(kDmemBase + 128 * 1024 - 2));
    lw_span.lh(2, 1, 0); // in range but check the very edge: aligned, fits
    lw_span.lw(3, 1, 0); // misaligned for a word
    expect_trap(lw_span, TrapCause::LoadMisaligned);

    ProgramBuilder sw_mis;
    sw_mis.li(1, int32_t(kDmemBase + 6));
    sw_mis.sw(2, 1, 0);
    expect_trap(sw_mis, TrapCause::StoreMisaligned);

    ProgramBuilder sw_out;
    sw_out.li(1, int32_t(kVmemBase));
    sw_out.sw(2, 1, 0);
    expect_trap(sw_out, TrapCause::StoreAccessFault);

    // Byte accesses never misalign but still respect the range.
    ProgramBuilder sb_out;
    sb_out.li(1, int32_t(kDmemBase - 1));
    sb_out.sb(2, 1, 0);
    expect_trap(sb_out, TrapCause::StoreAccessFault);
}

TEST_CASE("traps: vector memory")
{
    const auto expect_trap = [](ProgramBuilder& b, TrapCause cause) {
        b.ecall();
        Machine m;
        m.load(b.finalize());
        m.run();
        CHECK(!m.halted());
        CHECK(m.trap() == cause);
    };

    ProgramBuilder mis;
    mis.li(1, int32_t(kVmemBase + 4));
    mis.vload(1, 1, 0);
    expect_trap(mis, TrapCause::LoadMisaligned);

    ProgramBuilder below;
    below.li(1, int32_t(kDmemBase));
    below.vload(1, 1, 0); // scalar data memory is not vector-loadable
    expect_trap(below, TrapCause::LoadAccessFault);

    ProgramBuilder past;
    past.li(1, int32_t(kVmemBase + 1024 * 1024));
    past.vload(1, 1, 0); // one vector past the top of 1 MiB
    expect_trap(past, TrapCause::LoadAccessFault);

    ProgramBuilder smis;
    smis.li(1, int32_t(kVmemBase + 32));
    smis.vstore(1, 1, 0);
    expect_trap(smis, TrapCause::StoreMisaligned);

    ProgramBuilder sout;
    sout.li(1, int32_t(kVmemBase + 1024 * 1024));
    sout.vstore(1, 1, 0);
    expect_trap(sout, TrapCause::StoreAccessFault);

    ProgramBuilder rngmis;
    rngmis.li(1, int32_t(kVmemBase + 2));
    rngmis.vload_r0(1, 0);
    expect_trap(rngmis, TrapCause::LoadMisaligned);
}

TEST_CASE("traps: fetch and illegal instruction")
{
    // Jump far outside instruction memory: the jump retires, the fetch traps.
    ProgramBuilder far;
    far.emit(isa::jal(0, 0x40000));
    Machine m;
    m.load(far.finalize());
    const RunResult r = m.run();
    CHECK(r.retired == 1);
    CHECK(r.cycles == 4); // jal 1+2, trapped fetch 1
    CHECK(m.trap() == TrapCause::FetchFault);
    CHECK(m.trap_pc() == 0x40000);

    // Misaligned target through JALR (bit 0 is cleared, bit 1 is not).
    ProgramBuilder odd;
    odd.addi(1, 0, 2);
    odd.jalr(0, 1, 0);
    m.load(odd.finalize());
    m.run();
    CHECK(m.trap() == TrapCause::FetchFault);
    CHECK(m.trap_pc() == 2);

    // An undecodable word traps without retiring.
    Program bad;
    bad.code = {isa::encode(isa::addi(1, 0, 7)), 0xFFFFFFFFu};
    m.load(bad);
    const RunResult rb = m.run();
    CHECK(rb.retired == 1);
    CHECK(m.trap() == TrapCause::IllegalInstruction);
    CHECK(m.trap_pc() == 4);
    CHECK(m.x(1) == 7);

    // Falling off the end of the program hits zero-filled memory, which
    // does not decode.
    Program off;
    off.code = {isa::encode(isa::addi(1, 0, 1))};
    m.load(off);
    m.run();
    CHECK(m.trap() == TrapCause::IllegalInstruction);
    CHECK(m.trap_pc() == 4);
}

TEST_CASE("trapped machine is inert until reset")
{
    ProgramBuilder b;
    b.li(1, int32_t(kDmemBase + 2));
    b.lw(2, 1, 0);
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    REQUIRE(m.trap() == TrapCause::LoadMisaligned);
    const Stats frozen = m.total_stats();
    const uint32_t stuck_pc = m.pc();

    const StepEvent e = m.step();
    CHECK(e.trap == TrapCause::LoadMisaligned);
    CHECK(!e.op.has_value());
    CHECK(e.cycles == 0);
    CHECK(m.total_stats() == frozen);
    CHECK(m.pc() == stuck_pc);
    CHECK(m.run().retired == 0);

    m.reset();
    CHECK(m.trap() == TrapCause::None);
    CHECK(m.total_stats().retired_total() == 0);
}

TEST_CASE("reset restores memory images and architectural state")
{
    ProgramBuilder b;
    b.set_scalar_word(0, 0x1111);
    const auto initial = iota_lanes(5, 0);
    b.set_vector(0, initial);
    b.li(1, int32_t(kDmemBase));
    b.li(2, 0x2222);
    b.sw(2, 1, 0); // overwrite the initial scalar word
    load_vmem_base(b, 3);
    b.vbcast(1, 2);
    b.vstore(1, 3, 0); // overwrite the initial vector
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    REQUIRE(m.halted());
    CHECK(m.read_scalar_word(kDmemBase) == 0x2222);
    CHECK(m.read_vector(kVmemBase)[0] == 0x2222);
    CHECK(m.total_stats().retired_total() > 0);

    m.reset();
    CHECK(m.read_scalar_word(kDmemBase) == 0x1111);
    CHECK(m.read_vector(kVmemBase) == initial);
    CHECK(m.pc() == 0);
    CHECK(m.x(1) == 0);
    CHECK(m.v(1)[0] == 0);
    CHECK(!m.halted());
    CHECK(m.total_stats() == Stats{});
    CHECK(m.rng() == VectorRngState{});

    // And the program runs again identically.
    m.run();
    CHECK(m.halted());
    CHECK(m.read_scalar_word(kDmemBase) == 0x2222);
}

TEST_CASE("entry point and run step limit")
{
    ProgramBuilder b;
    b.addi(5, 0, 1); // skipped by the entry point
    const Label start = b.make_label();
    b.bind(start);
    b.addi(5, 5, 2);
    b.addi(5, 5, 4);
    b.ecall();
    b.set_entry(start);
    Machine m;
    m.load(b.finalize());
    CHECK(m.pc() == 4);

    const RunResult first = m.run(1);
    CHECK(first.retired == 1);
    CHECK(!first.halted);
    CHECK(m.x(5) == 2);
    const RunResult rest = m.run();
    CHECK(rest.retired == 2);
    CHECK(rest.halted);
    CHECK(m.x(5) == 6);
}

TEST_CASE("region statistics attribute work by name")
{
    ProgramBuilder b;
    b.li(1, 3);             // outside any region
    b.begin_region("loop");
    const Label top = b.make_label();
    b.bind(top);
    b.addi(2, 2, 1);
    b.addi(1, 1, -1);
    b.bne(1, 0, top);
    b.end_region();
    b.begin_region("tail");
    b.addi(3, 0, 9);
    b.end_region();
    b.ecall();
    Machine m;
    m.load(b.finalize());
    const RunResult r = m.run();
    REQUIRE(m.halted());

    const auto stats = m.region_stats();
    REQUIRE(stats.count("loop") == 1);
    REQUIRE(stats.count("tail") == 1);
    const Stats& loop = stats.at("loop");
    const Stats& tail = stats.at("tail");
    // Three iterations of three instructions; two taken branches.
    CHECK(loop.retired_total() == 9);
    CHECK(loop.retired[size_t(isa::OpClass::ScalarAlu)] == 6);
    CHECK(loop.retired[size_t(isa::OpClass::Control)] == 3);
    CHECK(loop.cycles == 9 + 2 * 2);
    CHECK(tail.retired_total() == 1);
    CHECK(tail.cycles == 1);
    // Region totals never exceed the machine totals.
    CHECK(loop.cycles + tail.cycles <= m.total_stats().cycles);
    CHECK(r.cycles == m.total_stats().cycles);

    // Per-op counts see through to individual instructions.
    CHECK(m.op_counts()[size_t(Op::Addi)] == 8); // li(3) + 6 in loop + 1 tail
    CHECK(m.op_counts()[size_t(Op::Bne)] == 3);
    CHECK(m.op_counts()[size_t(Op::Ecall)] == 1);
}

TEST_CASE("host memory accessors validate addresses")
{
    Machine m;
    ProgramBuilder b;
    b.ecall();
    m.load(b.finalize());

    m.write_scalar_word(kDmemBase + 8, 0xCAFEF00D);
    CHECK(m.read_scalar_word(kDmemBase + 8) == 0xCAFEF00D);
    CHECK_THROWS_AS(m.read_scalar_word(kDmemBase + 2), OutOfRangeError);
    CHECK_THROWS_AS(m.read_scalar_word(kDmemBase - 4), OutOfRangeError);
    CHECK_THROWS_AS(m.read_scalar_word(kDmemBase + 128 * 1024), OutOfRangeError);
    CHECK_THROWS_AS(m.write_scalar_word(kVmemBase, 1), OutOfRangeError);

    std::array<int16_t, 32> lanes{};
    lanes[0] = 42;
    m.write_vector(kVmemBase + 128, lanes);
    CHECK(m.read_vector(kVmemBase + 128)[0] == 42);
    CHECK_THROWS_AS(m.read_vector(kVmemBase + 32), OutOfRangeError);
    CHECK_THROWS_AS(m.read_vector(kDmemBase), OutOfRangeError);
    CHECK_THROWS_AS(m.write_vector(kVmemBase + 1024 * 1024, lanes), OutOfRangeError);
}

TEST_CASE("program images that do not fit are rejected")
{
    Machine m;

    Program code_big;
    code_big.code.assign(128 * 1024 / 4 + 1, 0x00000073u);
    CHECK_THROWS_AS(m.load(code_big), ImageTooLargeError);

    Program sdata_big;
    sdata_big.code = {0x00000073u};
    sdata_big.scalar_data.assign(128 * 1024 + 1, 0);
    CHECK_THROWS_AS(m.load(sdata_big), ImageTooLargeError);

    Program vdata_big;
    vdata_big.code = {0x00000073u};
    vdata_big.vector_data.assign(1024 * 1024 / 2 + 1, 0);
    CHECK_THROWS_AS(m.load(vdata_big), ImageTooLargeError);

    // Exact fits load fine.
    Program exact;
    exact.code.assign(128 * 1024 / 4, 0x00000073u);
    exact.scalar_data.assign(128 * 1024, 0);
    exact.vector_data.assign(1024 * 1024 / 2, 0);
    CHECK_NOTHROW(m.load(exact));
}

TEST_CASE("bad region tables are rejected at load")
{
    Machine m;
    Program p;
    p.code = {0x00000073u, 0x00000073u, 0x00000073u};

    p.regions = {{"a", 0, 2}, {"b", 1, 3}};
    CHECK_THROWS_AS(m.load(p), RegionOverlapError);

    p.regions = {{"a", 0, 4}};
    CHECK_THROWS_AS(m.load(p), OutOfRangeError);

    p.regions = {{"a", 2, 1}};
    CHECK_THROWS_AS(m.load(p), OutOfRangeError);

    // The same name may own several disjoint ranges.
    p.regions = {{"a", 0, 1}, {"a", 2, 3}};
    CHECK_NOTHROW(m.load(p));
    m.run();
    CHECK(m.region_stats().at("a").retired_total() == 1); // first ecall halts
}

TEST_CASE("step events narrate execution")
{
    ProgramBuilder b;
    b.addi(1, 0, 5);
    b.ecall();
    Machine m;
    m.load(b.finalize());

    const StepEvent e0 = m.step();
    CHECK(e0.pc == 0);
    REQUIRE(e0.op.has_value());
    CHECK(e0.op->op == Op::Addi);
    CHECK(e0.cycles == 1);
    CHECK(!e0.halted);

    const StepEvent e1 = m.step();
    CHECK(e1.pc == 4);
    CHECK(e1.op->op == Op::Ecall);
    CHECK(e1.halted);
    CHECK(m.halted());

    // Further stepping is inert.
    const StepEvent e2 = m.step();
    CHECK(e2.halted);
    CHECK(!e2.op.has_value());
    CHECK(e2.cycles == 0);
}

TEST_CASE("machine configuration validates memory granularity")
{
    MachineConfig bad;
    bad.vmem_bytes = 100; // not a multiple of the 64-byte vector granule
    CHECK_THROWS_AS(Machine{bad}, ConfigError);
    bad = MachineConfig{};
    bad.dmem_bytes = 6;
    CHECK_THROWS_AS(Machine{bad}, ConfigError);

    MachineConfig small;
    small.imem_bytes = 64;
    small.dmem_bytes = 64;
    small.vmem_bytes = 128;
    Machine m{small};
    ProgramBuilder b;
    b.addi(1, 0, 3);
    b.ecall();
    CHECK_NOTHROW(m.load(b.finalize()));
    m.run();
    CHECK(m.x(1) == 3);

    // The shrunken machine rejects images sized for the default one.
    Program big;
    big.code.assign(17, 0x00000073u);
    CHECK_THROWS_AS(m.load(big), ImageTooLargeError);
}

TEST_CASE("32-bit multiply keeps the low word")
{
    ProgramBuilder b;
    b.li(1, 0x10000);
    b.mul(2, 1, 1);      // 2^32 -> low word 0
    b.li(3, 77777);
    b.li(4, -3);
    b.mul(5, 3, 4);
    b.ecall();
    Machine m;
    m.load(b.finalize());
    m.run();
    CHECK(m.x(2) == 0);
    CHECK(m.x(5) == uint32_t(int32_t(77777) * -3));
}
