// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fenn/assembler.hpp"
#include "fenn/isa.hpp"
#include "fenn/rng.hpp"

namespace fenn {

// Memory map. The scalar core fetches from instruction memory and
// loads/stores data memory only; vector memory is reachable only through
// vector loads/stores, 64-byte-aligned, a full 32-lane vector at a time.
inline constexpr uint32_t kImemBase = 0x0000'0000;
inline constexpr uint32_t kDmemBase = 0x1000'0000;
inline constexpr uint32_t kVmemBase = 0x2000'0000;
inline constexpr uint32_t kVectorBytes = 64;

// Cycle accounting knobs. Every retired instruction costs `base`; a taken
// branch or jump adds `taken_branch_penalty`; a vector load immediately
// followed by an instruction consuming its result (the loaded register, or
// the lane RNG state for the seed-loading variants) adds `load_use_penalty`.
// A trapped step costs `base` and does not retire.
struct CycleModel {
    uint32_t base = 1;
    uint32_t taken_branch_penalty = 2;
    uint32_t load_use_penalty = 1;

    bool operator==(const CycleModel&) const = default;
};

struct MachineConfig {
    uint32_t imem_bytes = 128 * 1024;
    uint32_t dmem_bytes = 128 * 1024;
    uint32_t vmem_bytes = 1024 * 1024;
    CycleModel cycle_model;

    bool operator==(const MachineConfig&) const = default;
};

enum class TrapCause : uint8_t {
    None = 0,
    FetchFault,         // pc misaligned or outside instruction memory
    IllegalInstruction, // word does not decode
    LoadAccessFault,    // load outside its memory
    LoadMisaligned,
    StoreAccessFault, // store outside its memory
    StoreMisaligned,
};

const char* to_string(TrapCause cause);

// Per-class retired-instruction counts plus cycles.
struct Stats {
    std::array<uint64_t, isa::kOpClassCount> retired{};
    uint64_t cycles = 0;

    uint64_t retired_total() const
    {
        uint64_t n = 0;
        for (uint64_t c : retired) n += c;
        return n;
    }

    bool operator==(const Stats&) const = default;
};

// What one step() did.
struct StepEvent {
    uint32_t pc = 0;
    std::optional<isa::Instruction> op; // nullopt when the step trapped
    uint32_t cycles = 0;                // cycles charged for this step
    TrapCause trap = TrapCause::None;
    bool halted = false; // true once the halt call has retired
};

struct RunResult {
    uint64_t retired = 0;
    uint64_t cycles = 0;
    bool halted = false;
    TrapCause trap = TrapCause::None;
    uint32_t trap_pc = 0;
};

// Functional, cycle-approximate model of the processor: an in-order scalar
// core executing one instruction per cycle plus a 32-lane 16-bit vector
// unit, with the penalties in CycleModel layered on top.
class Machine {
public:
    explicit Machine(MachineConfig config = {});

    const MachineConfig& config() const { return m_config; }

    // Copies the program images into the memories (ImageTooLargeError when
    // one does not fit, RegionOverlapError when two regions claim the same
    // instruction) and resets all architectural state and statistics.
    void load(const Program& program);

    // Back to the state immediately after the last load().
    void reset();

    StepEvent step();
    RunResult run(uint64_t max_steps = UINT64_MAX);

    bool halted() const { return m_halted; }
    TrapCause trap() const { return m_trap; }
    uint32_t trap_pc() const { return m_trap_pc; }

    uint32_t pc() const { return m_pc; }
    void set_pc(uint32_t pc) { m_pc = pc; }
    uint32_t x(int index) const { return m_x[size_t(index)]; }
    void set_x(int index, uint32_t value)
    {
        if (index != 0) m_x[size_t(index)] = value;
    }
    const std::array<int16_t, kLanes>& v(int index) const { return m_v[size_t(index)]; }
    void set_v(int index, const std::array<int16_t, kLanes>& value)
    {
        m_v[size_t(index)] = value;
    }
    const VectorRngState& rng() const { return m_rng; }
    void set_rng(const VectorRngState& state) { m_rng = state; }

    // Host access to the data memories; absolute addresses, host misuse
    // throws OutOfRangeError (machine-program misuse traps instead).
    uint32_t read_scalar_word(uint32_t address) const;
    void write_scalar_word(uint32_t address, uint32_t value);
    std::array<int16_t, kLanes> read_vector(uint32_t address) const;
    void write_vector(uint32_t address, const std::array<int16_t, kLanes>& lanes);

    const Stats& total_stats() const { return m_total_stats; }
    std::map<std::string, Stats> region_stats() const;
    const std::array<uint64_t, isa::kOpCount>& op_counts() const { return m_op_counts; }

private:
    uint32_t fetch_word(uint32_t pc) const;
    StepEvent execute(uint32_t pc, const isa::Instruction& instruction);
    bool consumes_pending_load(const isa::Instruction& instruction) const;

    MachineConfig m_config;
    Program m_program;

    std::vector<uint32_t> m_imem;
    std::vector<uint8_t> m_dmem;
    std::vector<int16_t> m_vmem;
    std::vector<int32_t> m_region_slot; // per instruction index, -1 = none
    std::vector<std::string> m_region_names;

    uint32_t m_pc = 0;
    std::array<uint32_t, 32> m_x{};
    std::array<std::array<int16_t, kLanes>, 32> m_v{};
    VectorRngState m_rng;
    bool m_halted = false;
    TrapCause m_trap = TrapCause::None;
    uint32_t m_trap_pc = 0;

    // Load-use tracking: the vector register written by the previous
    // instruction when it was a vector load (-1 otherwise), and whether the
    // previous instruction replaced the lane RNG state.
    int m_pending_load_vd = -1;
    bool m_pending_load_rng = false;

    Stats m_total_stats;
    std::vector<Stats> m_region_stats;
    std::array<uint64_t, isa::kOpCount> m_op_counts{};
};

} // namespace fenn
