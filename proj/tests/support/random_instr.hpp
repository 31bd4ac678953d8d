// SPDX-License-Identifier: Apache-2.0
// Uniformly samples well-formed instructions across the whole ISA through
// the validating factories, for round-trip and conformance testing.
#pragma once

#include "fenn/isa.hpp"
#include "fenn/reference.hpp"

namespace testsupport {

inline fenn::isa::Instruction random_instruction(fenn::HostRng& rng)
{
    using namespace fenn::isa;
    const auto reg = [&rng]() { return int(rng.next_u64() % 32); };
    const auto imm12 = [&rng]() { return int32_t(rng.next_u64() % 4096) - 2048; };
    const auto even13 = [&rng]() { return 2 * (int32_t(rng.next_u64() % 4096) - 2048); };
    const auto even21 = [&rng]() { return 2 * (int32_t(rng.next_u64() % 1048576) - 524288); };
    const auto imm20u = [&rng]() { return int32_t(rng.next_u64() & 0xFFFFF); };
    const auto shamt = [&rng]() { return int(rng.next_u64() % 32); };
    const auto vimm = [&rng]() { return int32_t(rng.next_u64() % 2048) - 1024; };
    const auto lane = [&rng]() { return int(rng.next_u64() % 32); };
    const auto rmode = [&rng]() { return fenn::RoundingMode(rng.next_u64() % 3); };
    const auto mshift = [&rng]() { return int(rng.next_u64() % 16); };

    switch (rng.next_u64() % 56) {
    case 0: return lui(reg(), imm20u());
    case 1: return auipc(reg(), imm20u());
    case 2: return jal(reg(), even21());
    case 3: return jalr(reg(), reg(), imm12());
    case 4: return beq(reg(), reg(), even13());
    case 5: return bne(reg(), reg(), even13());
    case 6: return blt(reg(), reg(), even13());
    case 7: return bge(reg(), reg(), even13());
    case 8: return bltu(reg(), reg(), even13());
    case 9: return bgeu(reg(), reg(), even13());
    case 10: return lb(reg(), reg(), imm12());
    case 11: return lh(reg(), reg(), imm12());
    case 12: return lw(reg(), reg(), imm12());
    case 13: return lbu(reg(), reg(), imm12());
    case 14: return lhu(reg(), reg(), imm12());
    case 15: return sb(reg(), reg(), imm12());
    case 16: return sh(reg(), reg(), imm12());
    case 17: return sw(reg(), reg(), imm12());
    case 18: return addi(reg(), reg(), imm12());
    case 19: return slti(reg(), reg(), imm12());
    case 20: return sltiu(reg(), reg(), imm12());
    case 21: return xori(reg(), reg(), imm12());
    case 22: return ori(reg(), reg(), imm12());
    case 23: return andi(reg(), reg(), imm12());
    case 24: return slli(reg(), reg(), shamt());
    case 25: return srli(reg(), reg(), shamt());
    case 26: return srai(reg(), reg(), shamt());
    case 27: return add(reg(), reg(), reg());
    case 28: return sub(reg(), reg(), reg());
    case 29: return sll(reg(), reg(), reg());
    case 30: return slt(reg(), reg(), reg());
    case 31: return sltu(reg(), reg(), reg());
    case 32: return xor_(reg(), reg(), reg());
    case 33: return srl(reg(), reg(), reg());
    case 34: return sra(reg(), reg(), reg());
    case 35: return or_(reg(), reg(), reg());
    case 36: return and_(reg(), reg(), reg());
    case 37: return mul(reg(), reg(), reg());
    case 38: return ecall();
    case 39: return vadd(reg(), reg(), reg());
    case 40: return vadd_s(reg(), reg(), reg());
    case 41: return vsub(reg(), reg(), reg());
    case 42: return vsub_s(reg(), reg(), reg());
    case 43: return vmul(reg(), reg(), reg(), mshift(), rmode());
    case 44: return vload(reg(), reg(), vimm());
    case 45: return vstore(reg(), reg(), vimm());
    case 46: return vload_r0(reg(), vimm());
    case 47: return vload_r1(reg(), vimm());
    case 48: return vbcast(reg(), reg());
    case 49: return vextract(reg(), reg(), lane());
    case 50: return vrng(reg());
    case 51: return vteq(reg(), reg(), reg());
    case 52: return vtne(reg(), reg(), reg());
    case 53: return vtlt(reg(), reg(), reg());
    case 54: return vtge(reg(), reg(), reg());
    default: return vsel(reg(), reg(), reg(), reg());
    }
}

} // namespace testsupport
