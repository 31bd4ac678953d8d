// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fenn/isa.hpp"

namespace fenn {

// Named half-open range of instruction indices, used to attribute retired
// instructions and cycles to program phases. The same name may appear in
// several ranges; statistics accumulate per name.
struct Region {
    std::string name;
    uint32_t begin = 0; // first instruction index
    uint32_t end = 0;   // one past the last instruction index

    bool operator==(const Region&) const = default;
};

// A linked program plus its initial memory images.
//
// `code` is the instruction memory image (one encoded word per instruction,
// word n at byte address 4n). `scalar_data` is the initial scalar data
// memory image, `vector_data` the initial vector memory image (32 lanes per
// vector, lane 0 first; vector n starts at byte address 64n). Both images
// may be shorter than their memories; the remainder is zero.
struct Program {
    std::vector<uint32_t> code;
    std::vector<uint8_t> scalar_data;
    std::vector<int16_t> vector_data;
    uint32_t entry = 0; // byte offset into code of the first instruction
    std::vector<Region> regions;

    bool operator==(const Program&) const = default;

    // Binary container round-trip; throws IoError on malformed input or
    // filesystem failure.
    void save(const std::string& path) const;
    static Program load(const std::string& path);
};

// Forward-reference label for branch/jump targets. Obtain from
// ProgramBuilder::make_label, bind with ProgramBuilder::bind.
struct Label {
    uint32_t id = 0;
};

// Programmatic assembler. Instructions are appended with emit() or the
// per-mnemonic convenience methods; control flow uses labels, fixed up in
// finalize(). Misuse throws: DuplicateBindError (label bound twice),
// UnboundLabelError (label used but never bound), BranchOutOfRangeError
// (resolved displacement does not fit the branch/jump immediate),
// RegionOverlapError (region opened while one is open, or closed with none
// open).
class ProgramBuilder {
public:
    // Appends an instruction, returns its index.
    size_t emit(const isa::Instruction& instruction);

    size_t size() const { return m_instructions.size(); }

    Label make_label();
    void bind(Label label);

    // --- Control flow via labels ------------------------------------------
    void beq(int rs1, int rs2, Label target);
    void bne(int rs1, int rs2, Label target);
    void blt(int rs1, int rs2, Label target);
    void bge(int rs1, int rs2, Label target);
    void bltu(int rs1, int rs2, Label target);
    void bgeu(int rs1, int rs2, Label target);
    void jal(int rd, Label target);
    void jump(Label target) { jal(0, target); }

    // --- Pseudo-instructions ----------------------------------------------
    // Loads an arbitrary 32-bit constant (ADDI, or LUI+ADDI).
    void li(int rd, int32_t value);

    // --- Scalar convenience emitters --------------------------------------
    void lui(int rd, int32_t imm20) { emit(isa::lui(rd, imm20)); }
    void auipc(int rd, int32_t imm20) { emit(isa::auipc(rd, imm20)); }
    void jalr(int rd, int rs1, int32_t offset) { emit(isa::jalr(rd, rs1, offset)); }
    void lb(int rd, int rs1, int32_t offset) { emit(isa::lb(rd, rs1, offset)); }
    void lh(int rd, int rs1, int32_t offset) { emit(isa::lh(rd, rs1, offset)); }
    void lw(int rd, int rs1, int32_t offset) { emit(isa::lw(rd, rs1, offset)); }
    void lbu(int rd, int rs1, int32_t offset) { emit(isa::lbu(rd, rs1, offset)); }
    void lhu(int rd, int rs1, int32_t offset) { emit(isa::lhu(rd, rs1, offset)); }
    void sb(int rs2, int rs1, int32_t offset) { emit(isa::sb(rs2, rs1, offset)); }
    void sh(int rs2, int rs1, int32_t offset) { emit(isa::sh(rs2, rs1, offset)); }
    void sw(int rs2, int rs1, int32_t offset) { emit(isa::sw(rs2, rs1, offset)); }
    void addi(int rd, int rs1, int32_t imm) { emit(isa::addi(rd, rs1, imm)); }
    void slti(int rd, int rs1, int32_t imm) { emit(isa::slti(rd, rs1, imm)); }
    void sltiu(int rd, int rs1, int32_t imm) { emit(isa::sltiu(rd, rs1, imm)); }
    void xori(int rd, int rs1, int32_t imm) { emit(isa::xori(rd, rs1, imm)); }
    void ori(int rd, int rs1, int32_t imm) { emit(isa::ori(rd, rs1, imm)); }
    void andi(int rd, int rs1, int32_t imm) { emit(isa::andi(rd, rs1, imm)); }
    void slli(int rd, int rs1, int shamt) { emit(isa::slli(rd, rs1, shamt)); }
    void srli(int rd, int rs1, int shamt) { emit(isa::srli(rd, rs1, shamt)); }
    void srai(int rd, int rs1, int shamt) { emit(isa::srai(rd, rs1, shamt)); }
    void add(int rd, int rs1, int rs2) { emit(isa::add(rd, rs1, rs2)); }
    void sub(int rd, int rs1, int rs2) { emit(isa::sub(rd, rs1, rs2)); }
    void sll(int rd, int rs1, int rs2) { emit(isa::sll(rd, rs1, rs2)); }
    void slt(int rd, int rs1, int rs2) { emit(isa::slt(rd, rs1, rs2)); }
    void sltu(int rd, int rs1, int rs2) { emit(isa::sltu(rd, rs1, rs2)); }
    void xor_(int rd, int rs1, int rs2) { emit(isa::xor_(rd, rs1, rs2)); }
    void srl(int rd, int rs1, int rs2) { emit(isa::srl(rd, rs1, rs2)); }
    void sra(int rd, int rs1, int rs2) { emit(isa::sra(rd, rs1, rs2)); }
    void or_(int rd, int rs1, int rs2) { emit(isa::or_(rd, rs1, rs2)); }
    void and_(int rd, int rs1, int rs2) { emit(isa::and_(rd, rs1, rs2)); }
    void mul(int rd, int rs1, int rs2) { emit(isa::mul(rd, rs1, rs2)); }
    void ecall() { emit(isa::ecall()); }

    // --- Vector convenience emitters --------------------------------------
    void vadd(int vd, int vs1, int vs2) { emit(isa::vadd(vd, vs1, vs2)); }
    void vadd_s(int vd, int vs1, int vs2) { emit(isa::vadd_s(vd, vs1, vs2)); }
    void vsub(int vd, int vs1, int vs2) { emit(isa::vsub(vd, vs1, vs2)); }
    void vsub_s(int vd, int vs1, int vs2) { emit(isa::vsub_s(vd, vs1, vs2)); }
    void vmul(int vd, int vs1, int vs2, int shift, RoundingMode rmode)
    {
        emit(isa::vmul(vd, vs1, vs2, shift, rmode));
    }
    void vload(int vd, int rs1, int32_t vec_offset) { emit(isa::vload(vd, rs1, vec_offset)); }
    void vstore(int vs2, int rs1, int32_t vec_offset)
    {
        emit(isa::vstore(vs2, rs1, vec_offset));
    }
    void vload_r0(int rs1, int32_t vec_offset) { emit(isa::vload_r0(rs1, vec_offset)); }
    void vload_r1(int rs1, int32_t vec_offset) { emit(isa::vload_r1(rs1, vec_offset)); }
    void vbcast(int vd, int rs1) { emit(isa::vbcast(vd, rs1)); }
    void vextract(int rd, int vs1, int lane) { emit(isa::vextract(rd, vs1, lane)); }
    void vrng(int vd) { emit(isa::vrng(vd)); }
    void vteq(int rd, int vs1, int vs2) { emit(isa::vteq(rd, vs1, vs2)); }
    void vtne(int rd, int vs1, int vs2) { emit(isa::vtne(rd, vs1, vs2)); }
    void vtlt(int rd, int vs1, int vs2) { emit(isa::vtlt(rd, vs1, vs2)); }
    void vtge(int rd, int vs1, int vs2) { emit(isa::vtge(rd, vs1, vs2)); }
    void vsel(int vd, int vs1, int vs2, int mask_rs1)
    {
        emit(isa::vsel(vd, vs1, vs2, mask_rs1));
    }

    // --- Regions ----------------------------------------------------------
    void begin_region(const std::string& name);
    void end_region();

    // --- Initial memory images --------------------------------------------
    // Word write at a byte offset into scalar data memory (little-endian;
    // the image grows as needed).
    void set_scalar_word(uint32_t byte_offset, uint32_t value);
    // Full 32-lane vector write at a vector index into vector memory.
    void set_vector(uint32_t vec_index, const std::array<int16_t, 32>& lanes);

    void set_entry(Label label);

    // Resolves labels, closes regions, encodes, and returns the program.
    Program finalize() const;

private:
    enum class FixupKind : uint8_t { Branch, Jump };
    struct Fixup {
        size_t instruction;
        uint32_t label;
        FixupKind kind;
    };

    std::vector<isa::Instruction> m_instructions;
    std::vector<int64_t> m_label_positions; // -1 while unbound
    std::vector<Fixup> m_fixups;
    std::vector<Region> m_regions;
    bool m_region_open = false;
    std::vector<uint8_t> m_scalar_data;
    std::vector<int16_t> m_vector_data;
    int64_t m_entry_label = -1;
};

} // namespace fenn
