// SPDX-License-Identifier: Apache-2.0
#include "fenn/isa.hpp"

#include <sstream>

#include "fenn/errors.hpp"

namespace fenn::isa {

namespace {

// --- Field helpers ---------------------------------------------------------

constexpr uint32_t bits(uint32_t w, int hi, int lo)
{
    return (w >> lo) & ((uint32_t(1) << (hi - lo + 1)) - 1);
}

constexpr int32_t sign_extend(uint32_t v, int width)
{
    const int32_t m = int32_t(1) << (width - 1);
    return (int32_t(v) ^ m) - m;
}

[[noreturn]] void field_error(const char* what, int64_t value)
{
    std::ostringstream msg;
    msg << what << " out of range: " << value;
    throw FieldOverflowError(msg.str());
}

void check_reg(const char* what, int r)
{
    if (r < 0 || r > 31) field_error(what, r);
}

void check_simm(const char* what, int64_t v, int width)
{
    const int64_t lim = int64_t(1) << (width - 1);
    if (v < -lim || v >= lim) field_error(what, v);
}

void check_even(const char* what, int32_t v)
{
    if (v & 1) field_error(what, v);
}

// --- Scalar opcode constants ----------------------------------------------

constexpr uint32_t kOpcLui = 0x37, kOpcAuipc = 0x17, kOpcJal = 0x6F, kOpcJalr = 0x67;
constexpr uint32_t kOpcBranch = 0x63, kOpcLoad = 0x03, kOpcStore = 0x23;
constexpr uint32_t kOpcOpImm = 0x13, kOpcOp = 0x33, kOpcSystem = 0x73;

// Vector quadrant: bits [1:0] == 0b10, major opcode in [6:2].
constexpr uint32_t kMajValu = 0, kMajVmem = 1, kMajVmov = 2, kMajVsel = 3;

constexpr uint32_t vec_opcode(uint32_t major) { return (major << 2) | 0x2; }

// --- Scalar encoders -------------------------------------------------------

uint32_t enc_r(uint32_t opc, uint32_t f3, uint32_t f7, const Instruction& i)
{
    return (f7 << 25) | (uint32_t(i.rs2) << 20) | (uint32_t(i.rs1) << 15) | (f3 << 12)
           | (uint32_t(i.rd) << 7) | opc;
}

uint32_t enc_i(uint32_t opc, uint32_t f3, const Instruction& i)
{
    check_simm("I-type immediate", i.imm, 12);
    return (uint32_t(i.imm & 0xFFF) << 20) | (uint32_t(i.rs1) << 15) | (f3 << 12)
           | (uint32_t(i.rd) << 7) | opc;
}

uint32_t enc_shift_imm(uint32_t f3, uint32_t f7, const Instruction& i)
{
    if (i.imm < 0 || i.imm > 31) field_error("shift amount", i.imm);
    return (f7 << 25) | (uint32_t(i.imm) << 20) | (uint32_t(i.rs1) << 15) | (f3 << 12)
           | (uint32_t(i.rd) << 7) | kOpcOpImm;
}

uint32_t enc_s(uint32_t f3, const Instruction& i)
{
    check_simm("store offset", i.imm, 12);
    const uint32_t imm = uint32_t(i.imm & 0xFFF);
    return (bits(imm, 11, 5) << 25) | (uint32_t(i.rs2) << 20) | (uint32_t(i.rs1) << 15)
           | (f3 << 12) | (bits(imm, 4, 0) << 7) | kOpcStore;
}

uint32_t enc_b(uint32_t f3, const Instruction& i)
{
    check_simm("branch offset", i.imm, 13);
    check_even("branch offset", i.imm);
    const uint32_t imm = uint32_t(i.imm) & 0x1FFF;
    return (bits(imm, 12, 12) << 31) | (bits(imm, 10, 5) << 25) | (uint32_t(i.rs2) << 20)
           | (uint32_t(i.rs1) << 15) | (f3 << 12) | (bits(imm, 4, 1) << 8)
           | (bits(imm, 11, 11) << 7) | kOpcBranch;
}

uint32_t enc_u(uint32_t opc, const Instruction& i)
{
    if (i.imm < 0 || i.imm > 0xFFFFF) field_error("upper immediate", i.imm);
    return (uint32_t(i.imm) << 12) | (uint32_t(i.rd) << 7) | opc;
}

uint32_t enc_j(const Instruction& i)
{
    check_simm("jump offset", i.imm, 21);
    check_even("jump offset", i.imm);
    const uint32_t imm = uint32_t(i.imm) & 0x1FFFFF;
    return (bits(imm, 20, 20) << 31) | (bits(imm, 10, 1) << 21) | (bits(imm, 11, 11) << 20)
           | (bits(imm, 19, 12) << 12) | (uint32_t(i.rd) << 7) | kOpcJal;
}

// --- Vector encoders -------------------------------------------------------

uint32_t enc_v3(uint32_t major, uint32_t f3, const Instruction& i)
{
    return (uint32_t(i.rs2) << 20) | (uint32_t(i.rs1) << 15) | (f3 << 12)
           | (uint32_t(i.rd) << 7) | vec_opcode(major);
}

uint32_t enc_vmul(const Instruction& i)
{
    if (i.shift > 15) field_error("multiply shift", i.shift);
    if (uint8_t(i.rmode) > 2) field_error("rounding mode", int(i.rmode));
    return (uint32_t(i.rmode) << 29) | (uint32_t(i.shift) << 25) | (uint32_t(i.rs2) << 20)
           | (uint32_t(i.rs1) << 15) | (4u << 12) | (uint32_t(i.rd) << 7) | vec_opcode(kMajValu);
}

uint32_t enc_vload(uint32_t f3, const Instruction& i)
{
    check_simm("vector load offset", i.imm, 11);
    return (uint32_t(i.imm & 0x7FF) << 21) | (uint32_t(i.rs1) << 15) | (f3 << 12)
           | (uint32_t(i.rd) << 7) | vec_opcode(kMajVmem);
}

uint32_t enc_vstore(const Instruction& i)
{
    check_simm("vector store offset", i.imm, 11);
    const uint32_t imm = uint32_t(i.imm) & 0x7FF;
    return (bits(imm, 10, 5) << 26) | (uint32_t(i.rs2) << 20) | (uint32_t(i.rs1) << 15)
           | (1u << 12) | (bits(imm, 4, 0) << 7) | vec_opcode(kMajVmem);
}

uint32_t enc_vsel(const Instruction& i)
{
    return (uint32_t(i.rs2 /*vs1*/) << 27) | (uint32_t(i.imm /*vs2*/) << 20)
           | (uint32_t(i.rs1) << 15) | (uint32_t(i.rd) << 7) | vec_opcode(kMajVsel);
}

} // namespace

// Field use for VSEL on the value type: rd = vd, rs1 = mask scalar register,
// rs2 = vs1, imm = vs2. (rs2/imm chosen so the common rd/rs1 accessors keep
// their meaning; the factory hides this.)

uint32_t encode(const Instruction& i)
{
    check_reg("rd", i.rd);
    check_reg("rs1", i.rs1);
    check_reg("rs2", i.rs2);
    switch (i.op) {
    case Op::Lui: return enc_u(kOpcLui, i);
    case Op::Auipc: return enc_u(kOpcAuipc, i);
    case Op::Jal: return enc_j(i);
    case Op::Jalr: return enc_i(kOpcJalr, 0, i);
    case Op::Beq: return enc_b(0, i);
    case Op::Bne: return enc_b(1, i);
    case Op::Blt: return enc_b(4, i);
    case Op::Bge: return enc_b(5, i);
    case Op::Bltu: return enc_b(6, i);
    case Op::Bgeu: return enc_b(7, i);
    case Op::Lb: return enc_i(kOpcLoad, 0, i);
    case Op::Lh: return enc_i(kOpcLoad, 1, i);
    case Op::Lw: return enc_i(kOpcLoad, 2, i);
    case Op::Lbu: return enc_i(kOpcLoad, 4, i);
    case Op::Lhu: return enc_i(kOpcLoad, 5, i);
    case Op::Sb: return enc_s(0, i);
    case Op::Sh: return enc_s(1, i);
    case Op::Sw: return enc_s(2, i);
    case Op::Addi: return enc_i(kOpcOpImm, 0, i);
    case Op::Slti: return enc_i(kOpcOpImm, 2, i);
    case Op::Sltiu: return enc_i(kOpcOpImm, 3, i);
    case Op::Xori: return enc_i(kOpcOpImm, 4, i);
    case Op::Ori: return enc_i(kOpcOpImm, 6, i);
    case Op::Andi: return enc_i(kOpcOpImm, 7, i);
    case Op::Slli: return enc_shift_imm(1, 0x00, i);
    case Op::Srli: return enc_shift_imm(5, 0x00, i);
    case Op::Srai: return enc_shift_imm(5, 0x20, i);
    case Op::Add: return enc_r(kOpcOp, 0, 0x00, i);
    case Op::Sub: return enc_r(kOpcOp, 0, 0x20, i);
    case Op::Sll: return enc_r(kOpcOp, 1, 0x00, i);
    case Op::Slt: return enc_r(kOpcOp, 2, 0x00, i);
    case Op::Sltu: return enc_r(kOpcOp, 3, 0x00, i);
    case Op::Xor: return enc_r(kOpcOp, 4, 0x00, i);
    case Op::Srl: return enc_r(kOpcOp, 5, 0x00, i);
    case Op::Sra: return enc_r(kOpcOp, 5, 0x20, i);
    case Op::Or: return enc_r(kOpcOp, 6, 0x00, i);
    case Op::And: return enc_r(kOpcOp, 7, 0x00, i);
    case Op::Mul: return enc_r(kOpcOp, 0, 0x01, i);
    case Op::Ecall: return kOpcSystem;
    case Op::Vadd: return enc_v3(kMajValu, 0, i);
    case Op::VaddS: return enc_v3(kMajValu, 1, i);
    case Op::Vsub: return enc_v3(kMajValu, 2, i);
    case Op::VsubS: return enc_v3(kMajValu, 3, i);
    case Op::Vmul: return enc_vmul(i);
    case Op::Vload: return enc_vload(0, i);
    case Op::Vstore: return enc_vstore(i);
    case Op::VloadR0: return enc_vload(2, i);
    case Op::VloadR1: return enc_vload(3, i);
    case Op::Vbcast: return enc_v3(kMajVmov, 0, i);
    case Op::Vextract:
        if (i.imm < 0 || i.imm > 31) field_error("lane", i.imm);
        return (uint32_t(i.imm) << 20) | (uint32_t(i.rs1) << 15) | (1u << 12)
               | (uint32_t(i.rd) << 7) | vec_opcode(kMajVmov);
    case Op::Vrng: return enc_v3(kMajVmov, 2, i);
    case Op::Vteq: return enc_v3(kMajVmov, 4, i);
    case Op::Vtne: return enc_v3(kMajVmov, 5, i);
    case Op::Vtlt: return enc_v3(kMajVmov, 6, i);
    case Op::Vtge: return enc_v3(kMajVmov, 7, i);
    case Op::Vsel:
        if (i.imm < 0 || i.imm > 31) field_error("vs2", i.imm);
        return enc_vsel(i);
    }
    throw IllegalInstructionError("encode of unknown op");
}

namespace {

std::optional<Instruction> decode_scalar(uint32_t w)
{
    Instruction i;
    const uint32_t opc = bits(w, 6, 0);
    const uint32_t rd = bits(w, 11, 7), f3 = bits(w, 14, 12);
    const uint32_t rs1 = bits(w, 19, 15), rs2 = bits(w, 24, 20), f7 = bits(w, 31, 25);
    i.rd = uint8_t(rd);
    i.rs1 = uint8_t(rs1);
    i.rs2 = uint8_t(rs2);

    const auto i_imm = [&] { return sign_extend(bits(w, 31, 20), 12); };
    const auto s_imm = [&] { return sign_extend((bits(w, 31, 25) << 5) | bits(w, 11, 7), 12); };
    const auto b_imm = [&] {
        const uint32_t v = (bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11)
                           | (bits(w, 30, 25) << 5) | (bits(w, 11, 8) << 1);
        return sign_extend(v, 13);
    };
    const auto j_imm = [&] {
        const uint32_t v = (bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12)
                           | (bits(w, 20, 20) << 11) | (bits(w, 30, 21) << 1);
        return sign_extend(v, 21);
    };

    switch (opc) {
    case kOpcLui:
        i.op = Op::Lui;
        i.rs1 = i.rs2 = 0;
        i.imm = int32_t(bits(w, 31, 12));
        return i;
    case kOpcAuipc:
        i.op = Op::Auipc;
        i.rs1 = i.rs2 = 0;
        i.imm = int32_t(bits(w, 31, 12));
        return i;
    case kOpcJal:
        i.op = Op::Jal;
        i.rs1 = i.rs2 = 0;
        i.imm = j_imm();
        return i;
    case kOpcJalr:
        if (f3 != 0) return std::nullopt;
        i.op = Op::Jalr;
        i.rs2 = 0;
        i.imm = i_imm();
        return i;
    case kOpcBranch: {
        static constexpr Op ops[8] = {Op::Beq, Op::Bne, Op::Ecall, Op::Ecall,
                                      Op::Blt, Op::Bge, Op::Bltu, Op::Bgeu};
        if (f3 == 2 || f3 == 3) return std::nullopt;
        i.op = ops[f3];
        i.rd = 0;
        i.imm = b_imm();
        return i;
    }
    case kOpcLoad: {
        switch (f3) {
        case 0: i.op = Op::Lb; break;
        case 1: i.op = Op::Lh; break;
        case 2: i.op = Op::Lw; break;
        case 4: i.op = Op::Lbu; break;
        case 5: i.op = Op::Lhu; break;
        default: return std::nullopt;
        }
        i.rs2 = 0;
        i.imm = i_imm();
        return i;
    }
    case kOpcStore: {
        switch (f3) {
        case 0: i.op = Op::Sb; break;
        case 1: i.op = Op::Sh; break;
        case 2: i.op = Op::Sw; break;
        default: return std::nullopt;
        }
        i.rd = 0;
        i.imm = s_imm();
        return i;
    }
    case kOpcOpImm: {
        switch (f3) {
        case 0: i.op = Op::Addi; break;
        case 2: i.op = Op::Slti; break;
        case 3: i.op = Op::Sltiu; break;
        case 4: i.op = Op::Xori; break;
        case 6: i.op = Op::Ori; break;
        case 7: i.op = Op::Andi; break;
        case 1:
            if (f7 != 0x00) return std::nullopt;
            i.op = Op::Slli;
            i.rs2 = 0;
            i.imm = int32_t(rs2);
            return i;
        case 5:
            if (f7 == 0x00) i.op = Op::Srli;
            else if (f7 == 0x20) i.op = Op::Srai;
            else return std::nullopt;
            i.rs2 = 0;
            i.imm = int32_t(rs2);
            return i;
        default: return std::nullopt;
        }
        i.rs2 = 0;
        i.imm = i_imm();
        return i;
    }
    case kOpcOp: {
        if (f7 == 0x00) {
            static constexpr Op ops[8] = {Op::Add, Op::Sll, Op::Slt, Op::Sltu,
                                          Op::Xor, Op::Srl, Op::Or, Op::And};
            i.op = ops[f3];
        } else if (f7 == 0x20) {
            if (f3 == 0) i.op = Op::Sub;
            else if (f3 == 5) i.op = Op::Sra;
            else return std::nullopt;
        } else if (f7 == 0x01) {
            if (f3 != 0) return std::nullopt;
            i.op = Op::Mul;
        } else {
            return std::nullopt;
        }
        return i;
    }
    case kOpcSystem:
        if (w != kOpcSystem) return std::nullopt; // ECALL only
        return Instruction{};                     // defaults are Op::Ecall, all zero
    default:
        return std::nullopt;
    }
}

std::optional<Instruction> decode_vector(uint32_t w)
{
    Instruction i;
    const uint32_t major = bits(w, 6, 2), f3 = bits(w, 14, 12);
    const uint32_t rd = bits(w, 11, 7), rs1 = bits(w, 19, 15), rs2 = bits(w, 24, 20);
    i.rd = uint8_t(rd);
    i.rs1 = uint8_t(rs1);
    i.rs2 = uint8_t(rs2);
    const uint32_t high7 = bits(w, 31, 25);

    switch (major) {
    case kMajValu:
        if (f3 <= 3) {
            if (high7 != 0) return std::nullopt;
            static constexpr Op ops[4] = {Op::Vadd, Op::VaddS, Op::Vsub, Op::VsubS};
            i.op = ops[f3];
            return i;
        }
        if (f3 == 4) {
            if (bits(w, 31, 31) != 0) return std::nullopt;
            const uint32_t rm = bits(w, 30, 29);
            if (rm > 2) return std::nullopt;
            i.op = Op::Vmul;
            i.shift = uint8_t(bits(w, 28, 25));
            i.rmode = RoundingMode(rm);
            return i;
        }
        return std::nullopt;
    case kMajVmem:
        switch (f3) {
        case 0:
        case 2:
        case 3:
            if (bits(w, 20, 20) != 0) return std::nullopt;
            if (f3 != 0 && rd != 0) return std::nullopt;
            i.op = (f3 == 0) ? Op::Vload : (f3 == 2 ? Op::VloadR0 : Op::VloadR1);
            i.rs2 = 0;
            i.imm = sign_extend(bits(w, 31, 21), 11);
            return i;
        case 1:
            if (bits(w, 25, 25) != 0) return std::nullopt;
            i.op = Op::Vstore;
            i.rd = 0;
            i.imm = sign_extend((bits(w, 31, 26) << 5) | rd, 11);
            return i;
        default:
            return std::nullopt;
        }
    case kMajVmov:
        if (high7 != 0) return std::nullopt;
        switch (f3) {
        case 0:
            if (rs2 != 0) return std::nullopt;
            i.op = Op::Vbcast;
            return i;
        case 1:
            i.op = Op::Vextract;
            i.rs2 = 0;
            i.imm = int32_t(rs2);
            return i;
        case 2:
            if (rs1 != 0 || rs2 != 0) return std::nullopt;
            i.op = Op::Vrng;
            return i;
        case 4: i.op = Op::Vteq; return i;
        case 5: i.op = Op::Vtne; return i;
        case 6: i.op = Op::Vtlt; return i;
        case 7: i.op = Op::Vtge; return i;
        default: return std::nullopt;
        }
    case kMajVsel:
        if (f3 != 0) return std::nullopt;
        if (bits(w, 26, 25) != 0) return std::nullopt;
        i.op = Op::Vsel;
        i.rs2 = uint8_t(bits(w, 31, 27)); // vs1
        i.imm = int32_t(rs2);             // vs2
        return i;
    default:
        return std::nullopt;
    }
}

} // namespace

std::optional<Instruction> try_decode(uint32_t word)
{
    switch (word & 0x3) {
    case 0x3: return decode_scalar(word);
    case 0x2: return decode_vector(word);
    default: return std::nullopt; // 16-bit quadrants are not implemented
    }
}

Instruction decode(uint32_t word)
{
    if (auto i = try_decode(word)) return *i;
    std::ostringstream msg;
    msg << "illegal instruction word 0x" << std::hex << word;
    throw IllegalInstructionError(msg.str());
}

OpClass classify(Op op)
{
    switch (op) {
    case Op::Lui: case Op::Auipc:
    case Op::Addi: case Op::Slti: case Op::Sltiu: case Op::Xori: case Op::Ori:
    case Op::Andi: case Op::Slli: case Op::Srli: case Op::Srai:
    case Op::Add: case Op::Sub: case Op::Sll: case Op::Slt: case Op::Sltu:
    case Op::Xor: case Op::Srl: case Op::Sra: case Op::Or: case Op::And:
    case Op::Mul:
        return OpClass::ScalarAlu;
    case Op::Lb: case Op::Lh: case Op::Lw: case Op::Lbu: case Op::Lhu:
    case Op::Sb: case Op::Sh: case Op::Sw:
        return OpClass::ScalarMemory;
    case Op::Jal: case Op::Jalr:
    case Op::Beq: case Op::Bne: case Op::Blt: case Op::Bge: case Op::Bltu: case Op::Bgeu:
    case Op::Ecall:
        return OpClass::Control;
    case Op::Vadd: case Op::VaddS: case Op::Vsub: case Op::VsubS: case Op::Vmul:
    case Op::Vsel:
        return OpClass::VectorAlu;
    case Op::Vload: case Op::Vstore: case Op::VloadR0: case Op::VloadR1:
        return OpClass::VectorMemory;
    case Op::Vbcast: case Op::Vextract: case Op::Vrng:
    case Op::Vteq: case Op::Vtne: case Op::Vtlt: case Op::Vtge:
        return OpClass::VectorMoveMaskRng;
    }
    throw IllegalInstructionError("classify of unknown op");
}

const char* to_string(OpClass c)
{
    switch (c) {
    case OpClass::ScalarAlu: return "scalar-alu";
    case OpClass::ScalarMemory: return "scalar-memory";
    case OpClass::Control: return "control";
    case OpClass::VectorAlu: return "vector-alu";
    case OpClass::VectorMemory: return "vector-memory";
    case OpClass::VectorMoveMaskRng: return "vector-move-mask-rng";
    }
    return "?";
}

const char* mnemonic(Op op)
{
    switch (op) {
    case Op::Lui: return "lui";
    case Op::Auipc: return "auipc";
    case Op::Jal: return "jal";
    case Op::Jalr: return "jalr";
    case Op::Beq: return "beq";
    case Op::Bne: return "bne";
    case Op::Blt: return "blt";
    case Op::Bge: return "bge";
    case Op::Bltu: return "bltu";
    case Op::Bgeu: return "bgeu";
    case Op::Lb: return "lb";
    case Op::Lh: return "lh";
    case Op::Lw: return "lw";
    case Op::Lbu: return "lbu";
    case Op::Lhu: return "lhu";
    case Op::Sb: return "sb";
    case Op::Sh: return "sh";
    case Op::Sw: return "sw";
    case Op::Addi: return "addi";
    case Op::Slti: return "slti";
    case Op::Sltiu: return "sltiu";
    case Op::Xori: return "xori";
    case Op::Ori: return "ori";
    case Op::Andi: return "andi";
    case Op::Slli: return "slli";
    case Op::Srli: return "srli";
    case Op::Srai: return "srai";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Sll: return "sll";
    case Op::Slt: return "slt";
    case Op::Sltu: return "sltu";
    case Op::Xor: return "xor";
    case Op::Srl: return "srl";
    case Op::Sra: return "sra";
    case Op::Or: return "or";
    case Op::And: return "and";
    case Op::Mul: return "mul";
    case Op::Ecall: return "ecall";
    case Op::Vadd: return "vadd";
    case Op::VaddS: return "vadd.s";
    case Op::Vsub: return "vsub";
    case Op::VsubS: return "vsub.s";
    case Op::Vmul: return "vmul";
    case Op::Vload: return "vload";
    case Op::Vstore: return "vstore";
    case Op::VloadR0: return "vload.r0";
    case Op::VloadR1: return "vload.r1";
    case Op::Vbcast: return "vbcast";
    case Op::Vextract: return "vextract";
    case Op::Vrng: return "vrng";
    case Op::Vteq: return "vteq";
    case Op::Vtne: return "vtne";
    case Op::Vtlt: return "vtlt";
    case Op::Vtge: return "vtge";
    case Op::Vsel: return "vsel";
    }
    return "?";
}

std::string disassemble(const Instruction& i)
{
    std::ostringstream s;
    const auto x = [](int r) { return "x" + std::to_string(r); };
    const auto v = [](int r) { return "v" + std::to_string(r); };
    s << mnemonic(i.op);
    switch (i.op) {
    case Op::Lui:
    case Op::Auipc:
        s << " " << x(i.rd) << ", 0x" << std::hex << i.imm;
        break;
    case Op::Jal:
        s << " " << x(i.rd) << ", " << i.imm;
        break;
    case Op::Jalr:
    case Op::Lb: case Op::Lh: case Op::Lw: case Op::Lbu: case Op::Lhu:
        s << " " << x(i.rd) << ", " << i.imm << "(" << x(i.rs1) << ")";
        break;
    case Op::Sb: case Op::Sh: case Op::Sw:
        s << " " << x(i.rs2) << ", " << i.imm << "(" << x(i.rs1) << ")";
        break;
    case Op::Beq: case Op::Bne: case Op::Blt: case Op::Bge: case Op::Bltu: case Op::Bgeu:
        s << " " << x(i.rs1) << ", " << x(i.rs2) << ", " << i.imm;
        break;
    case Op::Addi: case Op::Slti: case Op::Sltiu: case Op::Xori: case Op::Ori:
    case Op::Andi: case Op::Slli: case Op::Srli: case Op::Srai:
        s << " " << x(i.rd) << ", " << x(i.rs1) << ", " << i.imm;
        break;
    case Op::Add: case Op::Sub: case Op::Sll: case Op::Slt: case Op::Sltu:
    case Op::Xor: case Op::Srl: case Op::Sra: case Op::Or: case Op::And: case Op::Mul:
        s << " " << x(i.rd) << ", " << x(i.rs1) << ", " << x(i.rs2);
        break;
    case Op::Ecall:
        break;
    case Op::Vadd: case Op::VaddS: case Op::Vsub: case Op::VsubS:
        s << " " << v(i.rd) << ", " << v(i.rs1) << ", " << v(i.rs2);
        break;
    case Op::Vmul: {
        const char* rm = i.rmode == RoundingMode::RoundToZero ? "rtz"
                         : i.rmode == RoundingMode::RoundToNearest ? "rtn" : "sr";
        s << " " << v(i.rd) << ", " << v(i.rs1) << ", " << v(i.rs2) << ", "
          << int(i.shift) << ", " << rm;
        break;
    }
    case Op::Vload:
        s << " " << v(i.rd) << ", " << i.imm << "(" << x(i.rs1) << ")";
        break;
    case Op::Vstore:
        s << " " << v(i.rs2) << ", " << i.imm << "(" << x(i.rs1) << ")";
        break;
    case Op::VloadR0: case Op::VloadR1:
        s << " " << i.imm << "(" << x(i.rs1) << ")";
        break;
    case Op::Vbcast:
        s << " " << v(i.rd) << ", " << x(i.rs1);
        break;
    case Op::Vextract:
        s << " " << x(i.rd) << ", " << v(i.rs1) << ", " << i.imm;
        break;
    case Op::Vrng:
        s << " " << v(i.rd);
        break;
    case Op::Vteq: case Op::Vtne: case Op::Vtlt: case Op::Vtge:
        s << " " << x(i.rd) << ", " << v(i.rs1) << ", " << v(i.rs2);
        break;
    case Op::Vsel:
        s << " " << v(i.rd) << ", " << v(i.rs2) << ", " << v(i.imm) << ", " << x(i.rs1);
        break;
    }
    return s.str();
}

namespace {

Instruction make_r(Op op, int rd, int rs1, int rs2)
{
    check_reg("rd", rd);
    check_reg("rs1", rs1);
    check_reg("rs2", rs2);
    Instruction i;
    i.op = op;
    i.rd = uint8_t(rd);
    i.rs1 = uint8_t(rs1);
    i.rs2 = uint8_t(rs2);
    return i;
}

Instruction make_i(Op op, int rd, int rs1, int32_t imm, int width)
{
    check_reg("rd", rd);
    check_reg("rs1", rs1);
    check_simm("immediate", imm, width);
    Instruction i;
    i.op = op;
    i.rd = uint8_t(rd);
    i.rs1 = uint8_t(rs1);
    i.imm = imm;
    return i;
}

Instruction make_branch(Op op, int rs1, int rs2, int32_t offset)
{
    check_reg("rs1", rs1);
    check_reg("rs2", rs2);
    check_simm("branch offset", offset, 13);
    check_even("branch offset", offset);
    Instruction i;
    i.op = op;
    i.rs1 = uint8_t(rs1);
    i.rs2 = uint8_t(rs2);
    i.imm = offset;
    return i;
}

Instruction make_shift(Op op, int rd, int rs1, int shamt)
{
    check_reg("rd", rd);
    check_reg("rs1", rs1);
    if (shamt < 0 || shamt > 31) field_error("shift amount", shamt);
    Instruction i;
    i.op = op;
    i.rd = uint8_t(rd);
    i.rs1 = uint8_t(rs1);
    i.imm = shamt;
    return i;
}

} // namespace

Instruction lui(int rd, int32_t imm20)
{
    check_reg("rd", rd);
    if (imm20 < 0 || imm20 > 0xFFFFF) field_error("upper immediate", imm20);
    Instruction i;
    i.op = Op::Lui;
    i.rd = uint8_t(rd);
    i.imm = imm20;
    return i;
}

Instruction auipc(int rd, int32_t imm20)
{
    Instruction i = lui(rd, imm20);
    i.op = Op::Auipc;
    return i;
}

Instruction jal(int rd, int32_t offset)
{
    check_reg("rd", rd);
    check_simm("jump offset", offset, 21);
    check_even("jump offset", offset);
    Instruction i;
    i.op = Op::Jal;
    i.rd = uint8_t(rd);
    i.imm = offset;
    return i;
}

Instruction jalr(int rd, int rs1, int32_t offset) { return make_i(Op::Jalr, rd, rs1, offset, 12); }
Instruction beq(int rs1, int rs2, int32_t o) { return make_branch(Op::Beq, rs1, rs2, o); }
Instruction bne(int rs1, int rs2, int32_t o) { return make_branch(Op::Bne, rs1, rs2, o); }
Instruction blt(int rs1, int rs2, int32_t o) { return make_branch(Op::Blt, rs1, rs2, o); }
Instruction bge(int rs1, int rs2, int32_t o) { return make_branch(Op::Bge, rs1, rs2, o); }
Instruction bltu(int rs1, int rs2, int32_t o) { return make_branch(Op::Bltu, rs1, rs2, o); }
Instruction bgeu(int rs1, int rs2, int32_t o) { return make_branch(Op::Bgeu, rs1, rs2, o); }
Instruction lb(int rd, int rs1, int32_t o) { return make_i(Op::Lb, rd, rs1, o, 12); }
Instruction lh(int rd, int rs1, int32_t o) { return make_i(Op::Lh, rd, rs1, o, 12); }
Instruction lw(int rd, int rs1, int32_t o) { return make_i(Op::Lw, rd, rs1, o, 12); }
Instruction lbu(int rd, int rs1, int32_t o) { return make_i(Op::Lbu, rd, rs1, o, 12); }
Instruction lhu(int rd, int rs1, int32_t o) { return make_i(Op::Lhu, rd, rs1, o, 12); }

namespace {
Instruction make_store(Op op, int rs2, int rs1, int32_t offset)
{
    check_reg("rs1", rs1);
    check_reg("rs2", rs2);
    check_simm("store offset", offset, 12);
    Instruction i;
    i.op = op;
    i.rs1 = uint8_t(rs1);
    i.rs2 = uint8_t(rs2);
    i.imm = offset;
    return i;
}
} // namespace

Instruction sb(int rs2, int rs1, int32_t o) { return make_store(Op::Sb, rs2, rs1, o); }
Instruction sh(int rs2, int rs1, int32_t o) { return make_store(Op::Sh, rs2, rs1, o); }
Instruction sw(int rs2, int rs1, int32_t o) { return make_store(Op::Sw, rs2, rs1, o); }

Instruction addi(int rd, int rs1, int32_t imm) { return make_i(Op::Addi, rd, rs1, imm, 12); }
Instruction slti(int rd, int rs1, int32_t imm) { return make_i(Op::Slti, rd, rs1, imm, 12); }
Instruction sltiu(int rd, int rs1, int32_t imm) { return make_i(Op::Sltiu, rd, rs1, imm, 12); }
Instruction xori(int rd, int rs1, int32_t imm) { return make_i(Op::Xori, rd, rs1, imm, 12); }
Instruction ori(int rd, int rs1, int32_t imm) { return make_i(Op::Ori, rd, rs1, imm, 12); }
Instruction andi(int rd, int rs1, int32_t imm) { return make_i(Op::Andi, rd, rs1, imm, 12); }
Instruction slli(int rd, int rs1, int shamt) { return make_shift(Op::Slli, rd, rs1, shamt); }
Instruction srli(int rd, int rs1, int shamt) { return make_shift(Op::Srli, rd, rs1, shamt); }
Instruction srai(int rd, int rs1, int shamt) { return make_shift(Op::Srai, rd, rs1, shamt); }
Instruction add(int rd, int rs1, int rs2) { return make_r(Op::Add, rd, rs1, rs2); }
Instruction sub(int rd, int rs1, int rs2) { return make_r(Op::Sub, rd, rs1, rs2); }
Instruction sll(int rd, int rs1, int rs2) { return make_r(Op::Sll, rd, rs1, rs2); }
Instruction slt(int rd, int rs1, int rs2) { return make_r(Op::Slt, rd, rs1, rs2); }
Instruction sltu(int rd, int rs1, int rs2) { return make_r(Op::Sltu, rd, rs1, rs2); }
Instruction xor_(int rd, int rs1, int rs2) { return make_r(Op::Xor, rd, rs1, rs2); }
Instruction srl(int rd, int rs1, int rs2) { return make_r(Op::Srl, rd, rs1, rs2); }
Instruction sra(int rd, int rs1, int rs2) { return make_r(Op::Sra, rd, rs1, rs2); }
Instruction or_(int rd, int rs1, int rs2) { return make_r(Op::Or, rd, rs1, rs2); }
Instruction and_(int rd, int rs1, int rs2) { return make_r(Op::And, rd, rs1, rs2); }
Instruction mul(int rd, int rs1, int rs2) { return make_r(Op::Mul, rd, rs1, rs2); }
Instruction ecall() { return Instruction{}; }

Instruction vadd(int vd, int vs1, int vs2) { return make_r(Op::Vadd, vd, vs1, vs2); }
Instruction vadd_s(int vd, int vs1, int vs2) { return make_r(Op::VaddS, vd, vs1, vs2); }
Instruction vsub(int vd, int vs1, int vs2) { return make_r(Op::Vsub, vd, vs1, vs2); }
Instruction vsub_s(int vd, int vs1, int vs2) { return make_r(Op::VsubS, vd, vs1, vs2); }

Instruction vmul(int vd, int vs1, int vs2, int shift, RoundingMode rmode)
{
    Instruction i = make_r(Op::Vmul, vd, vs1, vs2);
    if (shift < 0 || shift > 15) field_error("multiply shift", shift);
    i.shift = uint8_t(shift);
    i.rmode = rmode;
    return i;
}

Instruction vload(int vd, int rs1, int32_t vec_offset)
{
    return make_i(Op::Vload, vd, rs1, vec_offset, 11);
}

Instruction vstore(int vs2, int rs1, int32_t vec_offset)
{
    check_reg("rs1", rs1);
    check_reg("vs2", vs2);
    check_simm("vector store offset", vec_offset, 11);
    Instruction i;
    i.op = Op::Vstore;
    i.rs1 = uint8_t(rs1);
    i.rs2 = uint8_t(vs2);
    i.imm = vec_offset;
    return i;
}

Instruction vload_r0(int rs1, int32_t vec_offset)
{
    return make_i(Op::VloadR0, 0, rs1, vec_offset, 11);
}

Instruction vload_r1(int rs1, int32_t vec_offset)
{
    return make_i(Op::VloadR1, 0, rs1, vec_offset, 11);
}

Instruction vbcast(int vd, int rs1) { return make_r(Op::Vbcast, vd, rs1, 0); }

Instruction vextract(int rd, int vs1, int lane)
{
    if (lane < 0 || lane > 31) field_error("lane", lane);
    Instruction i = make_r(Op::Vextract, rd, vs1, 0);
    i.imm = lane;
    return i;
}

Instruction vrng(int vd) { return make_r(Op::Vrng, vd, 0, 0); }
Instruction vteq(int rd, int vs1, int vs2) { return make_r(Op::Vteq, rd, vs1, vs2); }
Instruction vtne(int rd, int vs1, int vs2) { return make_r(Op::Vtne, rd, vs1, vs2); }
Instruction vtlt(int rd, int vs1, int vs2) { return make_r(Op::Vtlt, rd, vs1, vs2); }
Instruction vtge(int rd, int vs1, int vs2) { return make_r(Op::Vtge, rd, vs1, vs2); }

Instruction vsel(int vd, int vs1, int vs2, int mask_rs1)
{
    check_reg("vd", vd);
    check_reg("vs1", vs1);
    check_reg("vs2", vs2);
    check_reg("mask rs1", mask_rs1);
    Instruction i;
    i.op = Op::Vsel;
    i.rd = uint8_t(vd);
    i.rs1 = uint8_t(mask_rs1);
    i.rs2 = uint8_t(vs1);
    i.imm = vs2;
    return i;
}

} // namespace fenn::isa
