// SPDX-License-Identifier: Apache-2.0
#include "fenn/assembler.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "fenn/errors.hpp"

namespace fenn {

namespace {

constexpr uint32_t kMagic = 0x4E4E4546; // "FENN" little-endian
constexpr uint32_t kVersion = 1;

constexpr uint32_t fourcc(const char (&t)[5])
{
    return uint32_t(uint8_t(t[0])) | (uint32_t(uint8_t(t[1])) << 8)
           | (uint32_t(uint8_t(t[2])) << 16) | (uint32_t(uint8_t(t[3])) << 24);
}

constexpr uint32_t kTagCode = fourcc("CODE");
constexpr uint32_t kTagScalarData = fourcc("SDAT");
constexpr uint32_t kTagVectorData = fourcc("VDAT");
constexpr uint32_t kTagEntry = fourcc("ENTR");
constexpr uint32_t kTagRegions = fourcc("REGN");

void put_u32(std::ostream& out, uint32_t v)
{
    const uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& in)
{
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("truncated program file");
    return uint32_t(b[0]) | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16)
           | (uint32_t(b[3]) << 24);
}

} // namespace

void Program::save(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    put_u32(out, kMagic);
    put_u32(out, kVersion);

    put_u32(out, kTagCode);
    put_u32(out, uint32_t(code.size() * 4));
    for (uint32_t w : code) put_u32(out, w);

    put_u32(out, kTagScalarData);
    put_u32(out, uint32_t(scalar_data.size()));
    out.write(reinterpret_cast<const char*>(scalar_data.data()),
              std::streamsize(scalar_data.size()));

    put_u32(out, kTagVectorData);
    put_u32(out, uint32_t(vector_data.size() * 2));
    for (int16_t h : vector_data) {
        const uint8_t b[2] = {uint8_t(uint16_t(h)), uint8_t(uint16_t(h) >> 8)};
        out.write(reinterpret_cast<const char*>(b), 2);
    }

    put_u32(out, kTagEntry);
    put_u32(out, 4);
    put_u32(out, entry);

    uint32_t regions_bytes = 4;
    for (const Region& r : regions) regions_bytes += 12 + uint32_t(r.name.size());
    put_u32(out, kTagRegions);
    put_u32(out, regions_bytes);
    put_u32(out, uint32_t(regions.size()));
    for (const Region& r : regions) {
        put_u32(out, uint32_t(r.name.size()));
        out.write(r.name.data(), std::streamsize(r.name.size()));
        put_u32(out, r.begin);
        put_u32(out, r.end);
    }

    if (!out) throw IoError("write failed: " + path);
}

Program Program::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    in.seekg(0, std::ios::end);
    const uint64_t file_size = uint64_t(in.tellg());
    in.seekg(0);
    if (get_u32(in) != kMagic) throw IoError("bad magic in " + path);
    if (get_u32(in) != kVersion) throw IoError("unsupported program version in " + path);

    Program p;
    while (true) {
        in.peek();
        if (in.eof()) break;
        const uint32_t tag = get_u32(in);
        const uint32_t length = get_u32(in);
        if (uint64_t(length) > file_size - uint64_t(in.tellg()))
            throw IoError("section length exceeds file in " + path);
        switch (tag) {
        case kTagCode: {
            if (length % 4) throw IoError("misaligned code section");
            p.code.resize(length / 4);
            for (uint32_t& w : p.code) w = get_u32(in);
            break;
        }
        case kTagScalarData: {
            p.scalar_data.resize(length);
            in.read(reinterpret_cast<char*>(p.scalar_data.data()), std::streamsize(length));
            if (!in) throw IoError("truncated scalar data section");
            break;
        }
        case kTagVectorData: {
            if (length % 2) throw IoError("misaligned vector data section");
            p.vector_data.resize(length / 2);
            for (int16_t& h : p.vector_data) {
                uint8_t b[2];
                in.read(reinterpret_cast<char*>(b), 2);
                if (!in) throw IoError("truncated vector data section");
                h = int16_t(uint16_t(b[0]) | (uint16_t(b[1]) << 8));
            }
            break;
        }
        case kTagEntry: {
            if (length != 4) throw IoError("bad entry section length");
            p.entry = get_u32(in);
            break;
        }
        case kTagRegions: {
            const uint32_t count = get_u32(in);
            if (length < 4 || count > (length - 4) / 12)
                throw IoError("bad region count in " + path);
            p.regions.resize(count);
            for (Region& r : p.regions) {
                const uint32_t name_length = get_u32(in);
                if (name_length > length) throw IoError("bad region name length in " + path);
                r.name.resize(name_length);
                in.read(r.name.data(), std::streamsize(name_length));
                if (!in) throw IoError("truncated region section");
                r.begin = get_u32(in);
                r.end = get_u32(in);
            }
            break;
        }
        default: {
            std::ostringstream msg;
            msg << "unknown section tag 0x" << std::hex << tag << " in " << path;
            throw IoError(msg.str());
        }
        }
    }
    return p;
}

size_t ProgramBuilder::emit(const isa::Instruction& instruction)
{
    m_instructions.push_back(instruction);
    return m_instructions.size() - 1;
}

Label ProgramBuilder::make_label()
{
    m_label_positions.push_back(-1);
    return Label{uint32_t(m_label_positions.size() - 1)};
}

void ProgramBuilder::bind(Label label)
{
    if (label.id >= m_label_positions.size())
        throw UnboundLabelError("bind of unknown label " + std::to_string(label.id));
    if (m_label_positions[label.id] >= 0)
        throw DuplicateBindError("label " + std::to_string(label.id) + " bound twice");
    m_label_positions[label.id] = int64_t(m_instructions.size());
}

namespace {
isa::Instruction branch_stub(isa::Op op, int rs1, int rs2)
{
    isa::Instruction i;
    i.op = op;
    i.rs1 = uint8_t(rs1);
    i.rs2 = uint8_t(rs2);
    return i;
}
} // namespace

void ProgramBuilder::beq(int rs1, int rs2, Label t) { m_fixups.push_back({emit(branch_stub(isa::Op::Beq, rs1, rs2)), t.id, FixupKind::Branch}); }
void ProgramBuilder::bne(int rs1, int rs2, Label t) { m_fixups.push_back({emit(branch_stub(isa::Op::Bne, rs1, rs2)), t.id, FixupKind::Branch}); }
void ProgramBuilder::blt(int rs1, int rs2, Label t) { m_fixups.push_back({emit(branch_stub(isa::Op::Blt, rs1, rs2)), t.id, FixupKind::Branch}); }
void ProgramBuilder::bge(int rs1, int rs2, Label t) { m_fixups.push_back({emit(branch_stub(isa::Op::Bge, rs1, rs2)), t.id, FixupKind::Branch}); }
void ProgramBuilder::bltu(int rs1, int rs2, Label t) { m_fixups.push_back({emit(branch_stub(isa::Op::Bltu, rs1, rs2)), t.id, FixupKind::Branch}); }
void ProgramBuilder::bgeu(int rs1, int rs2, Label t) { m_fixups.push_back({emit(branch_stub(isa::Op::Bgeu, rs1, rs2)), t.id, FixupKind::Branch}); }

void ProgramBuilder::jal(int rd, Label target)
{
    isa::Instruction i;
    i.op = isa::Op::Jal;
    i.rd = uint8_t(rd);
    m_fixups.push_back({emit(i), target.id, FixupKind::Jump});
}

void ProgramBuilder::li(int rd, int32_t value)
{
    if (value >= -2048 && value < 2048) {
        addi(rd, 0, value);
        return;
    }
    const uint32_t hi = (uint32_t(value) + 0x800u) >> 12;
    const int32_t lo = value - int32_t(hi << 12);
    lui(rd, int32_t(hi & 0xFFFFF));
    if (lo != 0) addi(rd, rd, lo);
}

void ProgramBuilder::begin_region(const std::string& name)
{
    if (m_region_open) throw RegionOverlapError("region opened inside region " + m_regions.back().name);
    m_regions.push_back({name, uint32_t(m_instructions.size()), 0});
    m_region_open = true;
}

void ProgramBuilder::end_region()
{
    if (!m_region_open) throw RegionOverlapError("end_region with no region open");
    m_regions.back().end = uint32_t(m_instructions.size());
    m_region_open = false;
}

void ProgramBuilder::set_scalar_word(uint32_t byte_offset, uint32_t value)
{
    if (m_scalar_data.size() < byte_offset + 4) m_scalar_data.resize(byte_offset + 4);
    m_scalar_data[byte_offset + 0] = uint8_t(value);
    m_scalar_data[byte_offset + 1] = uint8_t(value >> 8);
    m_scalar_data[byte_offset + 2] = uint8_t(value >> 16);
    m_scalar_data[byte_offset + 3] = uint8_t(value >> 24);
}

void ProgramBuilder::set_vector(uint32_t vec_index, const std::array<int16_t, 32>& lanes)
{
    const size_t end = size_t(vec_index + 1) * lanes.size();
    if (m_vector_data.size() < end) m_vector_data.resize(end);
    std::memcpy(m_vector_data.data() + size_t(vec_index) * lanes.size(), lanes.data(),
                lanes.size() * sizeof(int16_t));
}

void ProgramBuilder::set_entry(Label label)
{
    if (label.id >= m_label_positions.size())
        throw UnboundLabelError("entry set to unknown label " + std::to_string(label.id));
    m_entry_label = int64_t(label.id);
}

Program ProgramBuilder::finalize() const
{
    if (m_region_open)
        throw RegionOverlapError("region " + m_regions.back().name + " left open");

    std::vector<isa::Instruction> instructions = m_instructions;
    for (const Fixup& f : m_fixups) {
        const int64_t position = m_label_positions[f.label];
        if (position < 0)
            throw UnboundLabelError("label " + std::to_string(f.label) + " never bound");
        const int64_t displacement = (position - int64_t(f.instruction)) * 4;
        const int64_t limit = (f.kind == FixupKind::Branch) ? 4096 : 1048576;
        if (displacement < -limit || displacement >= limit) {
            std::ostringstream msg;
            msg << "displacement " << displacement << " does not fit "
                << (f.kind == FixupKind::Branch ? "branch" : "jump") << " at instruction "
                << f.instruction;
            throw BranchOutOfRangeError(msg.str());
        }
        instructions[f.instruction].imm = int32_t(displacement);
    }

    Program p;
    p.code.reserve(instructions.size());
    for (const isa::Instruction& i : instructions) p.code.push_back(isa::encode(i));
    p.scalar_data = m_scalar_data;
    p.vector_data = m_vector_data;
    if (m_entry_label >= 0) {
        const int64_t position = m_label_positions[size_t(m_entry_label)];
        if (position < 0)
            throw UnboundLabelError("entry label " + std::to_string(m_entry_label)
                                    + " never bound");
        p.entry = uint32_t(position) * 4;
    }
    p.regions = m_regions;
    return p;
}

} // namespace fenn
