// SPDX-License-Identifier: Apache-2.0
#include <cstdint>

#include "doctest.h"
#include "fenn/isa.hpp"
#include "fenn/reference.hpp"
#include "support/random_instr.hpp"

using namespace fenn;
using namespace fenn::isa;

TEST_CASE("scalar encodings match hand-assembled words")
{
    // Cross-checked against the standard RV32 encodings.
    CHECK(encode(addi(1, 0, 0)) == 0x00000093u);
    CHECK(encode(addi(2, 1, -1)) == 0xFFF08113u);
    CHECK(encode(add(3, 1, 2)) == 0x002081B3u);
    CHECK(encode(sub(3, 1, 2)) == 0x402081B3u);
    CHECK(encode(mul(5, 6, 7)) == 0x027302B3u);
    CHECK(encode(sra(1, 2, 3)) == 0x403150B3u);
    CHECK(encode(andi(5, 6, 0xFF)) == 0x0FF37293u);
    CHECK(encode(slli(1, 2, 4)) == 0x00411093u);
    CHECK(encode(srai(1, 2, 4)) == 0x40415093u);
    CHECK(encode(lui(5, 0x12345)) == 0x123452B7u);
    CHECK(encode(auipc(1, 1)) == 0x00001097u);
    CHECK(encode(lw(6, 7, 4)) == 0x0043A303u);
    CHECK(encode(lbu(1, 2, -1)) == 0xFFF14083u);
    CHECK(encode(sw(6, 7, 8)) == 0x0063A423u);
    CHECK(encode(sh(1, 2, -2)) == 0xFE111F23u);
    CHECK(encode(beq(1, 2, 8)) == 0x00208463u);
    CHECK(encode(bne(3, 4, -4)) == 0xFE419EE3u);
    CHECK(encode(jal(1, 8)) == 0x008000EFu);
    CHECK(encode(jal(0, -16)) == 0xFF1FF06Fu);
    CHECK(encode(jalr(1, 2, 8)) == 0x008100E7u);
    CHECK(encode(ecall()) == 0x00000073u);
}

TEST_CASE("vector encodings match the documented field layout")
{
    CHECK(encode(vadd(1, 2, 3)) == 0x00310082u);
    CHECK(encode(vadd_s(1, 2, 3)) == 0x00311082u);
    CHECK(encode(vsub(1, 2, 3)) == 0x00312082u);
    CHECK(encode(vsub_s(1, 2, 3)) == 0x00313082u);
    CHECK(encode(vmul(3, 1, 2, 15, RoundingMode::Stochastic)) == 0x5E20C182u);
    CHECK(encode(vmul(1, 2, 3, 0, RoundingMode::RoundToZero)) == 0x00314082u);
    CHECK(encode(vload(2, 5, 1)) == 0x00228106u);
    CHECK(encode(vload(2, 5, -1)) == 0xFFE28106u);
    CHECK(encode(vstore(3, 5, 1)) == 0x00329086u);
    CHECK(encode(vload_r0(5, 0)) == 0x0002A006u);
    CHECK(encode(vload_r1(5, 0)) == 0x0002B006u);
    CHECK(encode(vbcast(4, 6)) == 0x0003020Au);
    CHECK(encode(vextract(7, 9, 31)) == 0x01F4938Au);
    CHECK(encode(vrng(11)) == 0x0000258Au);
    CHECK(encode(vteq(1, 2, 3)) == 0x0031408Au);
    CHECK(encode(vtlt(1, 2, 3)) == 0x0031608Au);
    CHECK(encode(vsel(5, 6, 7, 9)) == 0x3074828Eu);
}

TEST_CASE("factories validate field ranges")
{
    CHECK_THROWS_AS(addi(32, 0, 0), FieldOverflowError);
    CHECK_THROWS_AS(addi(-1, 0, 0), FieldOverflowError);
    CHECK_THROWS_AS(addi(1, 0, 2048), FieldOverflowError);
    CHECK_THROWS_AS(addi(1, 0, -2049), FieldOverflowError);
    CHECK_THROWS_AS(lui(1, -1), FieldOverflowError);
    CHECK_THROWS_AS(lui(1, 0x100000), FieldOverflowError);
    CHECK_THROWS_AS(slli(1, 2, 32), FieldOverflowError);
    CHECK_THROWS_AS(beq(1, 2, 3), FieldOverflowError);    // odd offset
    CHECK_THROWS_AS(beq(1, 2, 4096), FieldOverflowError); // 13-bit range
    CHECK_THROWS_AS(jal(1, 1 << 20), FieldOverflowError);
    CHECK_THROWS_AS(vextract(1, 2, 32), FieldOverflowError);
    CHECK_THROWS_AS(vload(1, 2, 1024), FieldOverflowError);
    CHECK_THROWS_AS(vload(1, 2, -1025), FieldOverflowError);
    CHECK_THROWS_AS(vmul(1, 2, 3, 16, RoundingMode::RoundToZero), FieldOverflowError);
}

TEST_CASE("decode(encode(i)) is the identity on factory-built instructions")
{
    HostRng rng(1234);
    for (int n = 0; n < 10000; ++n) {
        const Instruction i = testsupport::random_instruction(rng);
        const uint32_t word = encode(i);
        const auto back = try_decode(word);
        REQUIRE(back.has_value());
        REQUIRE(*back == i);
    }
}

TEST_CASE("encode(decode(w)) is the identity on decodable words")
{
    HostRng rng(99);
    int decoded = 0;
    for (int n = 0; n < 200000; ++n) {
        const auto word = uint32_t(rng.next_u64());
        const auto i = try_decode(word);
        if (!i) continue;
        ++decoded;
        REQUIRE(encode(*i) == word);
    }
    CHECK(decoded > 1000); // the sample must actually exercise the decoder
}

TEST_CASE("strict decode rejects unused-bit and reserved patterns")
{
    // Scalar space.
    CHECK(!try_decode(0xFFFFFFFFu));
    CHECK(!try_decode(0x00000000u));
    CHECK(!try_decode(0x00000001u)); // 16-bit quadrant
    CHECK(!try_decode(0x00100073u)); // EBREAK is not implemented
    CHECK(!try_decode(0x00000573u)); // ECALL with rd != 0
    CHECK(!try_decode(0x008110E7u)); // JALR with funct3 != 0
    CHECK(!try_decode(0x0020A463u)); // branch funct3 == 2
    CHECK(!try_decode(0x0043B303u)); // load funct3 == 3
    CHECK(!try_decode(0x0063B423u)); // store funct3 == 3
    CHECK(!try_decode(0x202081B3u)); // OP funct7 == 0x10
    CHECK(!try_decode(0x402091B3u)); // funct7 == 0x20 with funct3 == 1
    CHECK(!try_decode(0x022091B3u)); // MUL-family funct3 != 0
    CHECK(!try_decode(0x40411093u)); // SLLI with funct7 == 0x20
    CHECK(!try_decode(0x20415093u)); // SRLI/SRAI with funct7 == 0x10

    // Vector space: every unused bit must be zero.
    CHECK(try_decode(0x00310082u).has_value());
    CHECK(!try_decode(0x80310082u)); // VADD with bit 31 set
    CHECK(!try_decode(0x02310082u)); // VADD with bit 25 set
    CHECK(!try_decode(0x00315082u)); // vector-ALU funct3 == 5
    CHECK(!try_decode(0x7E20C182u)); // VMUL with rounding-mode bits == 3
    const uint32_t vmul_ok = 0x5E20C182u;
    CHECK(try_decode(vmul_ok).has_value());
    CHECK(!try_decode(vmul_ok | 0x80000000u)); // VMUL with bit 31 set
    CHECK(!try_decode(0x00328106u)); // VLOAD with bit 20 set
    CHECK(!try_decode(0x0022A106u)); // VLOAD.R0 with rd != 0
    CHECK(!try_decode(0x0032B006u)); // VLOAD.R1 with bit 20 set
    CHECK(!try_decode(0x02329086u)); // VSTORE with bit 25 set
    CHECK(!try_decode(0x0002C006u)); // vector-memory funct3 == 4
    CHECK(!try_decode(0x8003020Au)); // VBCAST with bit 31 set
    CHECK(!try_decode(0x0013020Au)); // VBCAST with rs2 != 0
    CHECK(!try_decode(0x0000300Au)); // vector-move funct3 == 3
    CHECK(!try_decode(0x0000A58Au)); // VRNG with rs1 != 0
    CHECK(!try_decode(0x0010258Au)); // VRNG with rs2 != 0
    CHECK(!try_decode(0x3274828Eu)); // VSEL with bit 25 set
    CHECK(!try_decode(0x3074928Eu)); // VSEL with funct3 != 0
}

TEST_CASE("decode throws on illegal words, try_decode does not")
{
    CHECK_THROWS_AS(decode(0xFFFFFFFFu), IllegalInstructionError);
    CHECK_NOTHROW(decode(0x00000073u));
    CHECK(decode(0x00000073u).op == Op::Ecall);
}

TEST_CASE("classify covers every op with the right class")
{
    CHECK(classify(Op::Add) == OpClass::ScalarAlu);
    CHECK(classify(Op::Lui) == OpClass::ScalarAlu);
    CHECK(classify(Op::Mul) == OpClass::ScalarAlu);
    CHECK(classify(Op::Lw) == OpClass::ScalarMemory);
    CHECK(classify(Op::Sb) == OpClass::ScalarMemory);
    CHECK(classify(Op::Jal) == OpClass::Control);
    CHECK(classify(Op::Beq) == OpClass::Control);
    CHECK(classify(Op::Ecall) == OpClass::Control);
    CHECK(classify(Op::Vadd) == OpClass::VectorAlu);
    CHECK(classify(Op::Vmul) == OpClass::VectorAlu);
    CHECK(classify(Op::Vsel) == OpClass::VectorAlu);
    CHECK(classify(Op::Vload) == OpClass::VectorMemory);
    CHECK(classify(Op::VloadR0) == OpClass::VectorMemory);
    CHECK(classify(Op::Vstore) == OpClass::VectorMemory);
    CHECK(classify(Op::Vbcast) == OpClass::VectorMoveMaskRng);
    CHECK(classify(Op::Vrng) == OpClass::VectorMoveMaskRng);
    CHECK(classify(Op::Vtlt) == OpClass::VectorMoveMaskRng);

    // Exhaustive: classify must be total over the enum.
    for (int op = 0; op < kOpCount; ++op) CHECK_NOTHROW(classify(Op(op)));

    CHECK(std::string(to_string(OpClass::ScalarAlu)) == "scalar-alu");
    CHECK(std::string(to_string(OpClass::VectorMoveMaskRng)) == "vector-move-mask-rng");
}

TEST_CASE("disassembly spot checks")
{
    CHECK(disassemble(addi(1, 0, 0)) == "addi x1, x0, 0");
    CHECK(disassemble(lw(6, 7, 4)) == "lw x6, 4(x7)");
    CHECK(disassemble(sw(6, 7, -8)) == "sw x6, -8(x7)");
    CHECK(disassemble(lui(5, 0x12345)) == "lui x5, 0x12345");
    CHECK(disassemble(ecall()) == "ecall");
    CHECK(disassemble(vmul(3, 1, 2, 15, RoundingMode::Stochastic))
          == "vmul v3, v1, v2, 15, sr");
    CHECK(disassemble(vload(2, 5, -1)) == "vload v2, -1(x5)");
    CHECK(disassemble(vload_r0(5, 2)) == "vload.r0 2(x5)");
    CHECK(disassemble(vextract(7, 9, 31)) == "vextract x7, v9, 31");
    CHECK(disassemble(vsel(5, 6, 7, 9)) == "vsel v5, v6, v7, x9");
    CHECK(disassemble(vtge(1, 2, 3)) == "vtge x1, v2, v3");
}

TEST_CASE("mnemonics are total and distinct where required")
{
    CHECK(std::string(mnemonic(Op::VaddS)) == "vadd.s");
    CHECK(std::string(mnemonic(Op::VloadR1)) == "vload.r1");
    for (int op = 0; op < kOpCount; ++op)
        CHECK(std::string(mnemonic(Op(op))) != "?");
}
