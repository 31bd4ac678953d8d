// SPDX-License-Identifier: Apache-2.0
#include "fenn/core.hpp"

#include <algorithm>
#include <sstream>

#include "fenn/errors.hpp"
#include "fenn/fixedpoint.hpp"

namespace fenn {

using isa::Instruction;
using isa::Op;

const char* to_string(TrapCause cause)
{
    switch (cause) {
    case TrapCause::None: return "none";
    case TrapCause::FetchFault: return "fetch-fault";
    case TrapCause::IllegalInstruction: return "illegal-instruction";
    case TrapCause::LoadAccessFault: return "load-access-fault";
    case TrapCause::LoadMisaligned: return "load-misaligned";
    case TrapCause::StoreAccessFault: return "store-access-fault";
    case TrapCause::StoreMisaligned: return "store-misaligned";
    }
    return "?";
}

Machine::Machine(MachineConfig config) : m_config(config)
{
    if (m_config.imem_bytes % 4 || m_config.dmem_bytes % 4 || m_config.vmem_bytes % kVectorBytes)
        throw ConfigError("memory sizes must be multiples of their access granules");
    m_imem.resize(m_config.imem_bytes / 4);
    m_dmem.resize(m_config.dmem_bytes);
    m_vmem.resize(m_config.vmem_bytes / 2);
    m_region_slot.assign(m_imem.size(), -1);
}

void Machine::load(const Program& program)
{
    if (program.code.size() * 4 > m_config.imem_bytes)
        throw ImageTooLargeError("code image exceeds instruction memory");
    if (program.scalar_data.size() > m_config.dmem_bytes)
        throw ImageTooLargeError("scalar data image exceeds data memory");
    if (program.vector_data.size() * 2 > m_config.vmem_bytes)
        throw ImageTooLargeError("vector data image exceeds vector memory");

    std::vector<int32_t> slot(m_imem.size(), -1);
    std::vector<std::string> names;
    for (const Region& r : program.regions) {
        if (r.begin > r.end || r.end > program.code.size())
            throw OutOfRangeError("region " + r.name + " outside the program");
        const auto found = std::find(names.begin(), names.end(), r.name);
        const int32_t index = int32_t(found - names.begin());
        if (found == names.end()) names.push_back(r.name);
        for (uint32_t i = r.begin; i < r.end; ++i) {
            if (slot[i] != -1)
                throw RegionOverlapError("instruction " + std::to_string(i)
                                         + " claimed by two regions");
            slot[i] = index;
        }
    }

    m_program = program;
    m_region_slot = std::move(slot);
    m_region_names = std::move(names);
    reset();
}

void Machine::reset()
{
    std::fill(m_imem.begin(), m_imem.end(), 0);
    std::copy(m_program.code.begin(), m_program.code.end(), m_imem.begin());
    std::fill(m_dmem.begin(), m_dmem.end(), uint8_t(0));
    std::copy(m_program.scalar_data.begin(), m_program.scalar_data.end(), m_dmem.begin());
    std::fill(m_vmem.begin(), m_vmem.end(), int16_t(0));
    std::copy(m_program.vector_data.begin(), m_program.vector_data.end(), m_vmem.begin());

    m_pc = m_program.entry;
    m_x.fill(0);
    for (auto& v : m_v) v.fill(0);
    m_rng = VectorRngState{};
    m_halted = false;
    m_trap = TrapCause::None;
    m_trap_pc = 0;
    m_pending_load_vd = -1;
    m_pending_load_rng = false;
    m_total_stats = Stats{};
    m_region_stats.assign(m_region_names.size(), Stats{});
    m_op_counts.fill(0);
}

namespace {

// Vector source registers of an instruction, for load-use detection.
bool reads_vector_register(const Instruction& i, int vd)
{
    switch (i.op) {
    case Op::Vadd: case Op::VaddS: case Op::Vsub: case Op::VsubS: case Op::Vmul:
    case Op::Vteq: case Op::Vtne: case Op::Vtlt: case Op::Vtge:
        return i.rs1 == vd || i.rs2 == vd;
    case Op::Vsel:
        return i.rs2 == vd || i.imm == vd;
    case Op::Vstore:
        return i.rs2 == vd;
    case Op::Vextract:
        return i.rs1 == vd;
    default:
        return false;
    }
}

} // namespace

bool Machine::consumes_pending_load(const Instruction& i) const
{
    if (m_pending_load_rng) {
        if (i.op == Op::Vrng) return true;
        if (i.op == Op::Vmul && i.rmode == RoundingMode::Stochastic) return true;
    }
    return m_pending_load_vd >= 0 && reads_vector_register(i, m_pending_load_vd);
}

StepEvent Machine::step()
{
    StepEvent event;
    event.pc = m_pc;
    if (m_halted || m_trap != TrapCause::None) {
        event.trap = m_trap;
        event.halted = m_halted;
        return event;
    }

    const auto take_trap = [&](TrapCause cause) {
        m_trap = cause;
        m_trap_pc = event.pc;
        event.trap = cause;
        event.cycles = m_config.cycle_model.base;
        m_total_stats.cycles += event.cycles;
    };

    if ((m_pc & 3u) || m_pc >= m_config.imem_bytes) {
        take_trap(TrapCause::FetchFault);
        return event;
    }
    const auto decoded = isa::try_decode(m_imem[m_pc / 4]);
    if (!decoded) {
        take_trap(TrapCause::IllegalInstruction);
        return event;
    }
    return execute(m_pc, *decoded);
}

StepEvent Machine::execute(uint32_t pc, const Instruction& i)
{
    StepEvent event;
    event.pc = pc;

    const auto write_x = [&](int rd, uint32_t value) {
        if (rd != 0) m_x[size_t(rd)] = value;
    };
    const auto trap = [&](TrapCause cause) {
        m_trap = cause;
        m_trap_pc = pc;
        event.trap = cause;
        event.op.reset();
        event.cycles = m_config.cycle_model.base;
        m_total_stats.cycles += event.cycles;
    };

    // Machine-side scalar data access; false = trapped.
    const auto dmem_check = [&](uint32_t address, uint32_t size, bool store) {
        if (address % size != 0) {
            trap(store ? TrapCause::StoreMisaligned : TrapCause::LoadMisaligned);
            return false;
        }
        if (address < kDmemBase || uint64_t(address) - kDmemBase + size > m_config.dmem_bytes) {
            trap(store ? TrapCause::StoreAccessFault : TrapCause::LoadAccessFault);
            return false;
        }
        return true;
    };
    const auto vmem_check = [&](uint32_t address, bool store) {
        if (address % kVectorBytes != 0) {
            trap(store ? TrapCause::StoreMisaligned : TrapCause::LoadMisaligned);
            return false;
        }
        if (address < kVmemBase
            || uint64_t(address) - kVmemBase + kVectorBytes > m_config.vmem_bytes) {
            trap(store ? TrapCause::StoreAccessFault : TrapCause::LoadAccessFault);
            return false;
        }
        return true;
    };
    const auto dmem_read = [&](uint32_t address, uint32_t size) {
        uint32_t value = 0;
        for (uint32_t b = 0; b < size; ++b)
            value |= uint32_t(m_dmem[address - kDmemBase + b]) << (8 * b);
        return value;
    };
    const auto dmem_write = [&](uint32_t address, uint32_t size, uint32_t value) {
        for (uint32_t b = 0; b < size; ++b)
            m_dmem[address - kDmemBase + b] = uint8_t(value >> (8 * b));
    };
    // Vector memory indices are in halfwords.
    const auto vmem_index = [&](uint32_t address) { return (address - kVmemBase) / 2; };
    const auto vector_address = [&] {
        return uint32_t(m_x[i.rs1] + uint32_t(i.imm) * kVectorBytes);
    };

    const bool load_use = consumes_pending_load(i);

    uint32_t next_pc = pc + 4;
    bool taken = false;

    switch (i.op) {
    case Op::Lui: write_x(i.rd, uint32_t(i.imm) << 12); break;
    case Op::Auipc: write_x(i.rd, pc + (uint32_t(i.imm) << 12)); break;
    case Op::Jal:
        write_x(i.rd, pc + 4);
        next_pc = pc + uint32_t(i.imm);
        taken = true;
        break;
    case Op::Jalr:
        next_pc = (m_x[i.rs1] + uint32_t(i.imm)) & ~uint32_t(1);
        write_x(i.rd, pc + 4);
        taken = true;
        break;
    case Op::Beq: taken = m_x[i.rs1] == m_x[i.rs2]; break;
    case Op::Bne: taken = m_x[i.rs1] != m_x[i.rs2]; break;
    case Op::Blt: taken = int32_t(m_x[i.rs1]) < int32_t(m_x[i.rs2]); break;
    case Op::Bge: taken = int32_t(m_x[i.rs1]) >= int32_t(m_x[i.rs2]); break;
    case Op::Bltu: taken = m_x[i.rs1] < m_x[i.rs2]; break;
    case Op::Bgeu: taken = m_x[i.rs1] >= m_x[i.rs2]; break;

    case Op::Lb: case Op::Lh: case Op::Lw: case Op::Lbu: case Op::Lhu: {
        const uint32_t size = (i.op == Op::Lb || i.op == Op::Lbu) ? 1
                              : (i.op == Op::Lh || i.op == Op::Lhu) ? 2 : 4;
        const uint32_t address = m_x[i.rs1] + uint32_t(i.imm);
        if (!dmem_check(address, size, false)) return event;
        uint32_t value = dmem_read(address, size);
        if (i.op == Op::Lb) value = uint32_t(int32_t(int8_t(value)));
        else if (i.op == Op::Lh) value = uint32_t(int32_t(int16_t(value)));
        write_x(i.rd, value);
        break;
    }
    case Op::Sb: case Op::Sh: case Op::Sw: {
        const uint32_t size = (i.op == Op::Sb) ? 1 : (i.op == Op::Sh) ? 2 : 4;
        const uint32_t address = m_x[i.rs1] + uint32_t(i.imm);
        if (!dmem_check(address, size, true)) return event;
        dmem_write(address, size, m_x[i.rs2]);
        break;
    }

    case Op::Addi: write_x(i.rd, m_x[i.rs1] + uint32_t(i.imm)); break;
    case Op::Slti: write_x(i.rd, int32_t(m_x[i.rs1]) < i.imm ? 1 : 0); break;
    case Op::Sltiu: write_x(i.rd, m_x[i.rs1] < uint32_t(i.imm) ? 1 : 0); break;
    case Op::Xori: write_x(i.rd, m_x[i.rs1] ^ uint32_t(i.imm)); break;
    case Op::Ori: write_x(i.rd, m_x[i.rs1] | uint32_t(i.imm)); break;
    case Op::Andi: write_x(i.rd, m_x[i.rs1] & uint32_t(i.imm)); break;
    case Op::Slli: write_x(i.rd, m_x[i.rs1] << i.imm); break;
    case Op::Srli: write_x(i.rd, m_x[i.rs1] >> i.imm); break;
    case Op::Srai: write_x(i.rd, uint32_t(int32_t(m_x[i.rs1]) >> i.imm)); break;
    case Op::Add: write_x(i.rd, m_x[i.rs1] + m_x[i.rs2]); break;
    case Op::Sub: write_x(i.rd, m_x[i.rs1] - m_x[i.rs2]); break;
    case Op::Sll: write_x(i.rd, m_x[i.rs1] << (m_x[i.rs2] & 31)); break;
    case Op::Slt: write_x(i.rd, int32_t(m_x[i.rs1]) < int32_t(m_x[i.rs2]) ? 1 : 0); break;
    case Op::Sltu: write_x(i.rd, m_x[i.rs1] < m_x[i.rs2] ? 1 : 0); break;
    case Op::Xor: write_x(i.rd, m_x[i.rs1] ^ m_x[i.rs2]); break;
    case Op::Srl: write_x(i.rd, m_x[i.rs1] >> (m_x[i.rs2] & 31)); break;
    case Op::Sra: write_x(i.rd, uint32_t(int32_t(m_x[i.rs1]) >> (m_x[i.rs2] & 31))); break;
    case Op::Or: write_x(i.rd, m_x[i.rs1] | m_x[i.rs2]); break;
    case Op::And: write_x(i.rd, m_x[i.rs1] & m_x[i.rs2]); break;
    case Op::Mul: write_x(i.rd, m_x[i.rs1] * m_x[i.rs2]); break;

    case Op::Ecall:
        m_halted = true;
        event.halted = true;
        break;

    case Op::Vadd: case Op::VaddS: case Op::Vsub: case Op::VsubS: {
        const auto& a = m_v[i.rs1];
        const auto& b = m_v[i.rs2];
        auto& d = m_v[i.rd];
        for (int l = 0; l < kLanes; ++l) {
            switch (i.op) {
            case Op::Vadd: d[size_t(l)] = wrap_add_raw(a[size_t(l)], b[size_t(l)]); break;
            case Op::VaddS: d[size_t(l)] = sat_add_raw(a[size_t(l)], b[size_t(l)]); break;
            case Op::Vsub: d[size_t(l)] = wrap_sub_raw(a[size_t(l)], b[size_t(l)]); break;
            default: d[size_t(l)] = sat_sub_raw(a[size_t(l)], b[size_t(l)]); break;
            }
        }
        break;
    }
    case Op::Vmul: {
        const auto& a = m_v[i.rs1];
        const auto& b = m_v[i.rs2];
        auto& d = m_v[i.rd];
        const bool stochastic = i.rmode == RoundingMode::Stochastic;
        for (int l = 0; l < kLanes; ++l) {
            const uint16_t entropy = stochastic ? next16(m_rng.lanes[size_t(l)]) : 0;
            d[size_t(l)] = fx_mul_raw(a[size_t(l)], b[size_t(l)], i.shift, i.rmode, entropy);
        }
        break;
    }
    case Op::Vsel: {
        const uint32_t mask = m_x[i.rs1];
        const auto a = m_v[i.rs2];        // taken where the mask bit is set
        const auto b = m_v[size_t(i.imm)];
        auto& d = m_v[i.rd];
        for (int l = 0; l < kLanes; ++l)
            d[size_t(l)] = (mask >> l) & 1 ? a[size_t(l)] : b[size_t(l)];
        break;
    }

    case Op::Vload: {
        const uint32_t address = vector_address();
        if (!vmem_check(address, false)) return event;
        const uint32_t base = vmem_index(address);
        for (int l = 0; l < kLanes; ++l) m_v[i.rd][size_t(l)] = m_vmem[base + uint32_t(l)];
        break;
    }
    case Op::Vstore: {
        const uint32_t address = vector_address();
        if (!vmem_check(address, true)) return event;
        const uint32_t base = vmem_index(address);
        for (int l = 0; l < kLanes; ++l) m_vmem[base + uint32_t(l)] = m_v[i.rs2][size_t(l)];
        break;
    }
    case Op::VloadR0: case Op::VloadR1: {
        const uint32_t address = vector_address();
        if (!vmem_check(address, false)) return event;
        const uint32_t base = vmem_index(address);
        for (int l = 0; l < kLanes; ++l) {
            const uint16_t half = uint16_t(m_vmem[base + uint32_t(l)]);
            if (i.op == Op::VloadR0) m_rng.lanes[size_t(l)].s0 = half;
            else m_rng.lanes[size_t(l)].s1 = half;
        }
        break;
    }

    case Op::Vbcast: {
        const int16_t value = int16_t(uint16_t(m_x[i.rs1]));
        m_v[i.rd].fill(value);
        break;
    }
    case Op::Vextract:
        write_x(i.rd, uint32_t(int32_t(m_v[i.rs1][size_t(i.imm)])));
        break;
    case Op::Vrng: {
        auto& d = m_v[i.rd];
        for (int l = 0; l < kLanes; ++l)
            d[size_t(l)] = int16_t(next16(m_rng.lanes[size_t(l)]));
        break;
    }
    case Op::Vteq: case Op::Vtne: case Op::Vtlt: case Op::Vtge: {
        const auto& a = m_v[i.rs1];
        const auto& b = m_v[i.rs2];
        uint32_t mask = 0;
        for (int l = 0; l < kLanes; ++l) {
            bool hit = false;
            switch (i.op) {
            case Op::Vteq: hit = a[size_t(l)] == b[size_t(l)]; break;
            case Op::Vtne: hit = a[size_t(l)] != b[size_t(l)]; break;
            case Op::Vtlt: hit = a[size_t(l)] < b[size_t(l)]; break;
            default: hit = a[size_t(l)] >= b[size_t(l)]; break;
            }
            mask |= uint32_t(hit) << l;
        }
        write_x(i.rd, mask);
        break;
    }
    }

    if (taken && i.op != Op::Jalr) next_pc = pc + uint32_t(i.imm);
    m_pc = next_pc;

    event.op = i;
    event.cycles = m_config.cycle_model.base;
    if (taken) event.cycles += m_config.cycle_model.taken_branch_penalty;
    if (load_use) event.cycles += m_config.cycle_model.load_use_penalty;

    m_pending_load_vd = (i.op == Op::Vload) ? i.rd : -1;
    m_pending_load_rng = (i.op == Op::VloadR0 || i.op == Op::VloadR1);

    const int op_class = int(isa::classify(i.op));
    m_total_stats.retired[size_t(op_class)]++;
    m_total_stats.cycles += event.cycles;
    m_op_counts[size_t(i.op)]++;
    const uint32_t index = pc / 4;
    const int32_t slot = index < m_region_slot.size() ? m_region_slot[index] : -1;
    if (slot >= 0) {
        m_region_stats[size_t(slot)].retired[size_t(op_class)]++;
        m_region_stats[size_t(slot)].cycles += event.cycles;
    }
    return event;
}

RunResult Machine::run(uint64_t max_steps)
{
    RunResult result;
    while (!m_halted && m_trap == TrapCause::None && result.retired < max_steps) {
        const StepEvent event = step();
        result.cycles += event.cycles;
        if (event.op) result.retired++;
        if (event.trap != TrapCause::None || event.halted) break;
    }
    result.halted = m_halted;
    result.trap = m_trap;
    result.trap_pc = m_trap_pc;
    return result;
}

uint32_t Machine::read_scalar_word(uint32_t address) const
{
    if (address % 4 || address < kDmemBase
        || uint64_t(address) - kDmemBase + 4 > m_config.dmem_bytes)
        throw OutOfRangeError("scalar word read outside data memory");
    uint32_t value = 0;
    for (uint32_t b = 0; b < 4; ++b)
        value |= uint32_t(m_dmem[address - kDmemBase + b]) << (8 * b);
    return value;
}

void Machine::write_scalar_word(uint32_t address, uint32_t value)
{
    if (address % 4 || address < kDmemBase
        || uint64_t(address) - kDmemBase + 4 > m_config.dmem_bytes)
        throw OutOfRangeError("scalar word write outside data memory");
    for (uint32_t b = 0; b < 4; ++b)
        m_dmem[address - kDmemBase + b] = uint8_t(value >> (8 * b));
}

std::array<int16_t, kLanes> Machine::read_vector(uint32_t address) const
{
    if (address % kVectorBytes || address < kVmemBase
        || uint64_t(address) - kVmemBase + kVectorBytes > m_config.vmem_bytes)
        throw OutOfRangeError("vector read outside vector memory");
    std::array<int16_t, kLanes> lanes{};
    const uint32_t base = (address - kVmemBase) / 2;
    for (int l = 0; l < kLanes; ++l) lanes[size_t(l)] = m_vmem[base + uint32_t(l)];
    return lanes;
}

void Machine::write_vector(uint32_t address, const std::array<int16_t, kLanes>& lanes)
{
    if (address % kVectorBytes || address < kVmemBase
        || uint64_t(address) - kVmemBase + kVectorBytes > m_config.vmem_bytes)
        throw OutOfRangeError("vector write outside vector memory");
    const uint32_t base = (address - kVmemBase) / 2;
    for (int l = 0; l < kLanes; ++l) m_vmem[base + uint32_t(l)] = lanes[size_t(l)];
}

std::map<std::string, Stats> Machine::region_stats() const
{
    std::map<std::string, Stats> stats;
    for (size_t s = 0; s < m_region_names.size(); ++s) stats[m_region_names[s]] = m_region_stats[s];
    return stats;
}

} // namespace fenn
