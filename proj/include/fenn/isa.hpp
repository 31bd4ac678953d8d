// SPDX-License-Identifier: Apache-2.0
#pragma once

// Instruction set of the soft vector processor: the RV32 scalar subset
// executed by the control core plus the custom 32-lane vector extension.
//
// Encoding overview
// -----------------
// Scalar instructions use the standard RV32I/M encodings and live in the
// standard quadrant (bits [1:0] == 0b11).
//
// Vector instructions occupy the custom quadrant bits [1:0] == 0b10 and
// share the scalar register-field positions so the decoder porch is cheap:
//
//   [1:0]   = 0b10
//   [6:2]   = major opcode: 0 ALU, 1 memory, 2 move/mask/rng, 3 select
//   [11:7]  = vd / rd (mask destination) / store-immediate low bits
//   [14:12] = funct3 (minor opcode)
//   [19:15] = vs1 / scalar rs1 (address base, broadcast source, select mask)
//   [24:20] = vs2 / store data register / extract lane
//
// Per-major specifics:
//   ALU    funct3: 0 VADD, 1 VADD.S, 2 VSUB, 3 VSUB.S, 4 VMUL.
//          VMUL carries shift in [28:25] and rounding mode in [30:29].
//   memory funct3: 0 VLOAD, 1 VSTORE, 2 VLOAD.R0, 3 VLOAD.R1.
//          The immediate counts whole vectors (64-byte units), signed
//          11 bits. Loads keep it in [31:21]; VSTORE splits it S-type
//          style: imm[4:0] in [11:7], imm[10:5] in [31:26].
//   mov    funct3: 0 VBCAST, 1 VEXTRACT (lane in [24:20]), 2 VRNG,
//          4 VTEQ, 5 VTNE, 6 VTLT, 7 VTGE (mask written to scalar rd).
//   select funct3 0: VSEL vd, vs1, vs2, rs1 — vs1 moves to [31:27] because
//          [19:15] carries the scalar mask register.
//
// All unused bits of a valid encoding are zero and the decoder rejects
// words that violate that, so decode(encode(i)) == i for every well-formed
// instruction and random words are overwhelmingly illegal.
//
// Immediate conventions on the Instruction value type:
//   - ADDI/SLTI/.../JALR/loads/stores: signed 12-bit byte offsets.
//   - branches: signed byte offset from the branch, even, |imm| < 4 KiB.
//   - JAL: signed byte offset, even, |imm| < 1 MiB.
//   - LUI/AUIPC: the raw 20-bit field value (the semantic value is imm << 12).
//   - shifts: shamt in [0, 31].
//   - vector load/store: signed vector count in [-1024, 1023].
//   - VEXTRACT: lane in [0, 31].

#include <cstdint>
#include <optional>
#include <string>

#include "fenn/fixedpoint.hpp"

namespace fenn::isa {

enum class Op : uint8_t {
    // Scalar (RV32I subset + MUL + ECALL)
    Lui, Auipc, Jal, Jalr,
    Beq, Bne, Blt, Bge, Bltu, Bgeu,
    Lb, Lh, Lw, Lbu, Lhu,
    Sb, Sh, Sw,
    Addi, Slti, Sltiu, Xori, Ori, Andi, Slli, Srli, Srai,
    Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And,
    Mul, Ecall,
    // Vector
    Vadd, VaddS, Vsub, VsubS, Vmul,
    Vload, Vstore, VloadR0, VloadR1,
    Vbcast, Vextract, Vrng,
    Vteq, Vtne, Vtlt, Vtge,
    Vsel,
};

// Instruction classes used by the retired-instruction accounting.
enum class OpClass : uint8_t {
    ScalarAlu = 0,
    ScalarMemory = 1,
    Control = 2,
    VectorAlu = 3,
    VectorMemory = 4,
    VectorMoveMaskRng = 5,
};

inline constexpr int kOpClassCount = 6;
inline constexpr int kOpCount = int(Op::Vsel) + 1;

const char* to_string(OpClass c);
const char* mnemonic(Op op);

// Decoded instruction value. Fields not used by a given op are zero
// (rmode defaults to RoundToZero == 0), which keeps encode/decode a
// bijection on well-formed values.
struct Instruction {
    Op op = Op::Ecall;
    uint8_t rd = 0;    // destination register (scalar or vector by op)
    uint8_t rs1 = 0;   // first source / address base / select mask
    uint8_t rs2 = 0;   // second source / store data / select vs1
    int32_t imm = 0;   // immediate / shamt / extract lane / select vs2
    uint8_t shift = 0;               // VMUL only
    RoundingMode rmode = RoundingMode::RoundToZero; // VMUL only

    constexpr bool operator==(const Instruction&) const = default;
};

// Map an op to its accounting class. Total: every op has a class.
OpClass classify(Op op);
inline OpClass classify(const Instruction& i) { return classify(i.op); }

// Encode to a 32-bit word; throws FieldOverflowError when a register,
// immediate or shift does not fit its field.
uint32_t encode(const Instruction& i);

// Decode a word; nullopt when the word is not a valid instruction.
std::optional<Instruction> try_decode(uint32_t word);

// Decode a word; throws IllegalInstructionError instead.
Instruction decode(uint32_t word);

// One-line textual form, e.g. "addi x1, x0, 42" or "vmul v3, v1, v2, 15, sr".
std::string disassemble(const Instruction& i);

// --- Instruction factories -------------------------------------------------
// All factories validate their fields (FieldOverflowError on misuse).

Instruction lui(int rd, int32_t imm20);
Instruction auipc(int rd, int32_t imm20);
Instruction jal(int rd, int32_t offset);
Instruction jalr(int rd, int rs1, int32_t offset);
Instruction beq(int rs1, int rs2, int32_t offset);
Instruction bne(int rs1, int rs2, int32_t offset);
Instruction blt(int rs1, int rs2, int32_t offset);
Instruction bge(int rs1, int rs2, int32_t offset);
Instruction bltu(int rs1, int rs2, int32_t offset);
Instruction bgeu(int rs1, int rs2, int32_t offset);
Instruction lb(int rd, int rs1, int32_t offset);
Instruction lh(int rd, int rs1, int32_t offset);
Instruction lw(int rd, int rs1, int32_t offset);
Instruction lbu(int rd, int rs1, int32_t offset);
Instruction lhu(int rd, int rs1, int32_t offset);
Instruction sb(int rs2, int rs1, int32_t offset);
Instruction sh(int rs2, int rs1, int32_t offset);
Instruction sw(int rs2, int rs1, int32_t offset);
Instruction addi(int rd, int rs1, int32_t imm);
Instruction slti(int rd, int rs1, int32_t imm);
Instruction sltiu(int rd, int rs1, int32_t imm);
Instruction xori(int rd, int rs1, int32_t imm);
Instruction ori(int rd, int rs1, int32_t imm);
Instruction andi(int rd, int rs1, int32_t imm);
Instruction slli(int rd, int rs1, int shamt);
Instruction srli(int rd, int rs1, int shamt);
Instruction srai(int rd, int rs1, int shamt);
Instruction add(int rd, int rs1, int rs2);
Instruction sub(int rd, int rs1, int rs2);
Instruction sll(int rd, int rs1, int rs2);
Instruction slt(int rd, int rs1, int rs2);
Instruction sltu(int rd, int rs1, int rs2);
Instruction xor_(int rd, int rs1, int rs2);
Instruction srl(int rd, int rs1, int rs2);
Instruction sra(int rd, int rs1, int rs2);
Instruction or_(int rd, int rs1, int rs2);
Instruction and_(int rd, int rs1, int rs2);
Instruction mul(int rd, int rs1, int rs2);
Instruction ecall();

Instruction vadd(int vd, int vs1, int vs2);
Instruction vadd_s(int vd, int vs1, int vs2);
Instruction vsub(int vd, int vs1, int vs2);
Instruction vsub_s(int vd, int vs1, int vs2);
Instruction vmul(int vd, int vs1, int vs2, int shift, RoundingMode rmode);
Instruction vload(int vd, int rs1, int32_t vec_offset);
Instruction vstore(int vs2, int rs1, int32_t vec_offset);
Instruction vload_r0(int rs1, int32_t vec_offset);
Instruction vload_r1(int rs1, int32_t vec_offset);
Instruction vbcast(int vd, int rs1);
Instruction vextract(int rd, int vs1, int lane);
Instruction vrng(int vd);
Instruction vteq(int rd, int vs1, int vs2);
Instruction vtne(int rd, int vs1, int vs2);
Instruction vtlt(int rd, int vs1, int vs2);
Instruction vtge(int rd, int vs1, int vs2);
Instruction vsel(int vd, int vs1, int vs2, int mask_rs1);

} // namespace fenn::isa
