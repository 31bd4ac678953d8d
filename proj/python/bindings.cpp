// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fenn/assembler.hpp"
#include "fenn/core.hpp"
#include "fenn/errors.hpp"
#include "fenn/fixedpoint.hpp"
#include "fenn/harness.hpp"
#include "fenn/isa.hpp"
#include "fenn/kernels.hpp"
#include "fenn/reference.hpp"
#include "fenn/rng.hpp"

namespace py = pybind11;
using namespace fenn;

namespace {

void check_scalar_reg(int index)
{
    if (index < 0 || index >= 32) throw OutOfRangeError("scalar register index out of range");
}

void check_vector_reg(int index)
{
    if (index < 0 || index >= 32) throw OutOfRangeError("vector register index out of range");
}

} // namespace

PYBIND11_MODULE(_fenn, m)
{
    m.doc() = "Bit-exact simulator of a RISC-V scalar core with a 32-lane "
              "16-bit SIMD co-processor, plus assembler, fixed-point SNN "
              "kernels and experiment harness";

    // --- Exceptions --------------------------------------------------------
    // The base class is registered first so the later, more specific
    // translators take precedence.
    static py::exception<Error> base_exc(m, "FennError", PyExc_RuntimeError);
    py::register_exception<FormatMismatchError>(m, "FormatMismatchError", base_exc);
    py::register_exception<OutOfRangeError>(m, "OutOfRangeError", base_exc);
    py::register_exception<FieldOverflowError>(m, "FieldOverflowError", base_exc);
    py::register_exception<IllegalInstructionError>(m, "IllegalInstructionError", base_exc);
    py::register_exception<UnboundLabelError>(m, "UnboundLabelError", base_exc);
    py::register_exception<DuplicateBindError>(m, "DuplicateBindError", base_exc);
    py::register_exception<BranchOutOfRangeError>(m, "BranchOutOfRangeError", base_exc);
    py::register_exception<RegionOverlapError>(m, "RegionOverlapError", base_exc);
    py::register_exception<ZeroLaneSeedError>(m, "ZeroLaneSeedError", base_exc);
    py::register_exception<ImageTooLargeError>(m, "ImageTooLargeError", base_exc);
    py::register_exception<ConfigError>(m, "ConfigError", base_exc);
    py::register_exception<DegenerateRangeError>(m, "DegenerateRangeError", base_exc);
    py::register_exception<IoError>(m, "IoError", base_exc);

    // --- Constants ---------------------------------------------------------
    m.attr("LANES") = int(kLanes);
    m.attr("IMEM_BASE") = kImemBase;
    m.attr("DMEM_BASE") = kDmemBase;
    m.attr("VMEM_BASE") = kVmemBase;
    m.attr("VECTOR_BYTES") = kVectorBytes;

    // --- Fixed point -------------------------------------------------------
    py::enum_<RoundingMode>(m, "RoundingMode")
        .value("ROUND_TO_ZERO", RoundingMode::RoundToZero)
        .value("ROUND_TO_NEAREST", RoundingMode::RoundToNearest)
        .value("STOCHASTIC", RoundingMode::Stochastic);

    py::class_<QFormat>(m, "QFormat")
        .def(py::init([](int frac_bits) { return qformat(frac_bits); }), py::arg("frac_bits"))
        .def_readonly("frac_bits", &QFormat::frac_bits)
        .def("ulp", &QFormat::ulp)
        .def("min_value", &QFormat::min_value)
        .def("max_value", &QFormat::max_value)
        .def("__eq__", [](const QFormat& a, const QFormat& b) { return a == b; })
        .def("__repr__", [](const QFormat& f) { return to_string(f); });

    py::class_<Fix16>(m, "Fix16")
        .def(py::init([](int16_t raw, QFormat format) { return Fix16{raw, format}; }),
             py::arg("raw"), py::arg("format"))
        .def_readonly("raw", &Fix16::raw)
        .def_readonly("format", &Fix16::format)
        .def("to_real", &Fix16::to_real)
        .def("__repr__", [](const Fix16& v) {
            return "Fix16(raw=" + std::to_string(v.raw) + ", format=" + to_string(v.format)
                   + ", value=" + std::to_string(v.to_real()) + ")";
        });

    m.def("quantize", &quantize, py::arg("value"), py::arg("format"),
          py::arg("mode") = RoundingMode::RoundToNearest, py::arg("entropy") = 0,
          "Convert a real value to fixed point; raises OutOfRangeError if it "
          "does not fit");
    m.def("fx_mul_raw", &fx_mul_raw, py::arg("a"), py::arg("b"), py::arg("shift"),
          py::arg("mode"), py::arg("entropy") = 0,
          "Raw 16x16 lane multiply with post-shift rounding");
    m.def("fx_mul", &fx_mul, py::arg("a"), py::arg("b"), py::arg("shift"), py::arg("mode"),
          py::arg("entropy") = 0);
    m.def("sat_add", &sat_add);
    m.def("sat_sub", &sat_sub);
    m.def("wrap_add", &wrap_add);
    m.def("wrap_sub", &wrap_sub);

    // --- Instructions ------------------------------------------------------
    py::class_<isa::Instruction>(m, "Instruction")
        .def_property_readonly("mnemonic",
                               [](const isa::Instruction& i) { return isa::mnemonic(i.op); })
        .def_readonly("rd", &isa::Instruction::rd)
        .def_readonly("rs1", &isa::Instruction::rs1)
        .def_readonly("rs2", &isa::Instruction::rs2)
        .def_readonly("imm", &isa::Instruction::imm)
        .def_readonly("shift", &isa::Instruction::shift)
        .def_readonly("rmode", &isa::Instruction::rmode)
        .def("__eq__", [](const isa::Instruction& a, const isa::Instruction& b) { return a == b; })
        .def("__repr__", [](const isa::Instruction& i) { return isa::disassemble(i); });

    m.def("encode", &isa::encode, py::arg("instruction"));
    m.def("decode", &isa::decode, py::arg("word"),
          "Decode a 32-bit word; raises IllegalInstructionError if no "
          "instruction matches");
    m.def("try_decode", &isa::try_decode, py::arg("word"),
          "Decode a 32-bit word, or None if no instruction matches");
    m.def("disassemble",
          [](uint32_t word) { return isa::disassemble(isa::decode(word)); }, py::arg("word"));
    m.def("mnemonics", [] {
        std::vector<std::string> names;
        for (int op = 0; op < isa::kOpCount; ++op)
            names.push_back(isa::mnemonic(isa::Op(op)));
        return names;
    });
    m.def("op_class_names", [] {
        std::vector<std::string> names;
        for (int c = 0; c < isa::kOpClassCount; ++c)
            names.push_back(to_string(isa::OpClass(c)));
        return names;
    });

    // --- Assembler ---------------------------------------------------------
    py::class_<Region>(m, "Region")
        .def(py::init([](std::string name, uint32_t begin, uint32_t end) {
                 return Region{std::move(name), begin, end};
             }),
             py::arg("name"), py::arg("begin"), py::arg("end"))
        .def_readwrite("name", &Region::name)
        .def_readwrite("begin", &Region::begin)
        .def_readwrite("end", &Region::end)
        .def("__eq__", [](const Region& a, const Region& b) { return a == b; });

    py::class_<Program>(m, "Program")
        .def(py::init<>())
        .def_readwrite("code", &Program::code)
        .def_readwrite("scalar_data", &Program::scalar_data)
        .def_readwrite("vector_data", &Program::vector_data)
        .def_readwrite("entry", &Program::entry)
        .def_readwrite("regions", &Program::regions)
        .def("__eq__", [](const Program& a, const Program& b) { return a == b; })
        .def("save", &Program::save, py::arg("path"))
        .def_static("load", &Program::load, py::arg("path"));

    py::class_<Label>(m, "Label").def_readonly("id", &Label::id);

    py::class_<ProgramBuilder>(m, "ProgramBuilder")
        .def(py::init<>())
        .def("emit", &ProgramBuilder::emit)
        .def("size", &ProgramBuilder::size)
        .def("make_label", &ProgramBuilder::make_label)
        .def("bind", &ProgramBuilder::bind)
        .def("beq", &ProgramBuilder::beq)
        .def("bne", &ProgramBuilder::bne)
        .def("blt", &ProgramBuilder::blt)
        .def("bge", &ProgramBuilder::bge)
        .def("bltu", &ProgramBuilder::bltu)
        .def("bgeu", &ProgramBuilder::bgeu)
        .def("jal", &ProgramBuilder::jal)
        .def("jump", &ProgramBuilder::jump)
        .def("li", &ProgramBuilder::li)
        .def("lui", &ProgramBuilder::lui)
        .def("auipc", &ProgramBuilder::auipc)
        .def("jalr", &ProgramBuilder::jalr)
        .def("lb", &ProgramBuilder::lb)
        .def("lh", &ProgramBuilder::lh)
        .def("lw", &ProgramBuilder::lw)
        .def("lbu", &ProgramBuilder::lbu)
        .def("lhu", &ProgramBuilder::lhu)
        .def("sb", &ProgramBuilder::sb)
        .def("sh", &ProgramBuilder::sh)
        .def("sw", &ProgramBuilder::sw)
        .def("addi", &ProgramBuilder::addi)
        .def("slti", &ProgramBuilder::slti)
        .def("sltiu", &ProgramBuilder::sltiu)
        .def("xori", &ProgramBuilder::xori)
        .def("ori", &ProgramBuilder::ori)
        .def("andi", &ProgramBuilder::andi)
        .def("slli", &ProgramBuilder::slli)
        .def("srli", &ProgramBuilder::srli)
        .def("srai", &ProgramBuilder::srai)
        .def("add", &ProgramBuilder::add)
        .def("sub", &ProgramBuilder::sub)
        .def("sll", &ProgramBuilder::sll)
        .def("slt", &ProgramBuilder::slt)
        .def("sltu", &ProgramBuilder::sltu)
        .def("xor_", &ProgramBuilder::xor_)
        .def("srl", &ProgramBuilder::srl)
        .def("sra", &ProgramBuilder::sra)
        .def("or_", &ProgramBuilder::or_)
        .def("and_", &ProgramBuilder::and_)
        .def("mul", &ProgramBuilder::mul)
        .def("ecall", &ProgramBuilder::ecall)
        .def("vadd", &ProgramBuilder::vadd)
        .def("vadd_s", &ProgramBuilder::vadd_s)
        .def("vsub", &ProgramBuilder::vsub)
        .def("vsub_s", &ProgramBuilder::vsub_s)
        .def("vmul", &ProgramBuilder::vmul)
        .def("vload", &ProgramBuilder::vload)
        .def("vstore", &ProgramBuilder::vstore)
        .def("vload_r0", &ProgramBuilder::vload_r0)
        .def("vload_r1", &ProgramBuilder::vload_r1)
        .def("vbcast", &ProgramBuilder::vbcast)
        .def("vextract", &ProgramBuilder::vextract)
        .def("vrng", &ProgramBuilder::vrng)
        .def("vteq", &ProgramBuilder::vteq)
        .def("vtne", &ProgramBuilder::vtne)
        .def("vtlt", &ProgramBuilder::vtlt)
        .def("vtge", &ProgramBuilder::vtge)
        .def("vsel", &ProgramBuilder::vsel)
        .def("begin_region", &ProgramBuilder::begin_region)
        .def("end_region", &ProgramBuilder::end_region)
        .def("set_scalar_word", &ProgramBuilder::set_scalar_word)
        .def("set_vector", &ProgramBuilder::set_vector)
        .def("set_entry", &ProgramBuilder::set_entry)
        .def("finalize", &ProgramBuilder::finalize);

    // --- RNG ---------------------------------------------------------------
    py::class_<VectorRngState>(m, "VectorRngState")
        .def("next", &VectorRngState::next)
        .def("__eq__",
             [](const VectorRngState& a, const VectorRngState& b) { return a == b; });
    m.def("seed_state", &seed_state, py::arg("image"));
    m.def("make_seed_image", &make_seed_image, py::arg("seed"));
    m.def("splitmix64", &splitmix64, py::arg("state"));

    py::class_<HostRng>(m, "HostRng")
        .def(py::init<uint64_t>(), py::arg("seed"))
        .def("next_u64", &HostRng::next_u64)
        .def("next_double", &HostRng::next_double)
        .def("next_poisson", &HostRng::next_poisson, py::arg("lam"));

    // --- Machine -----------------------------------------------------------
    py::class_<CycleModel>(m, "CycleModel")
        .def(py::init<>())
        .def_readwrite("base", &CycleModel::base)
        .def_readwrite("taken_branch_penalty", &CycleModel::taken_branch_penalty)
        .def_readwrite("load_use_penalty", &CycleModel::load_use_penalty);

    py::class_<MachineConfig>(m, "MachineConfig")
        .def(py::init<>())
        .def_readwrite("imem_bytes", &MachineConfig::imem_bytes)
        .def_readwrite("dmem_bytes", &MachineConfig::dmem_bytes)
        .def_readwrite("vmem_bytes", &MachineConfig::vmem_bytes)
        .def_readwrite("cycle_model", &MachineConfig::cycle_model);

    py::class_<Stats>(m, "Stats")
        .def_readonly("cycles", &Stats::cycles)
        .def_property_readonly(
            "retired", [](const Stats& s) {
                return std::vector<uint64_t>(s.retired.begin(), s.retired.end());
            })
        .def("retired_total", &Stats::retired_total);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("retired", &RunResult::retired)
        .def_readonly("cycles", &RunResult::cycles)
        .def_readonly("halted", &RunResult::halted)
        .def_property_readonly("trap",
                               [](const RunResult& r) { return to_string(r.trap); })
        .def_readonly("trap_pc", &RunResult::trap_pc);

    py::class_<StepEvent>(m, "StepEvent")
        .def_readonly("pc", &StepEvent::pc)
        .def_readonly("op", &StepEvent::op)
        .def_readonly("cycles", &StepEvent::cycles)
        .def_property_readonly("trap",
                               [](const StepEvent& e) { return to_string(e.trap); })
        .def_readonly("halted", &StepEvent::halted);

    py::class_<Machine>(m, "Machine")
        .def(py::init<>())
        .def(py::init<MachineConfig>(), py::arg("config"))
        .def("load", &Machine::load, py::arg("program"))
        .def("reset", &Machine::reset)
        .def("step", &Machine::step)
        .def("run", &Machine::run, py::arg("max_steps") = UINT64_MAX)
        .def_property_readonly("halted", &Machine::halted)
        .def_property_readonly("trap", [](const Machine& m_) { return to_string(m_.trap()); })
        .def_property_readonly("trap_pc", &Machine::trap_pc)
        .def_property_readonly("pc", &Machine::pc)
        .def("set_pc", &Machine::set_pc)
        .def("x",
             [](const Machine& m_, int index) {
                 check_scalar_reg(index);
                 return m_.x(index);
             })
        .def("set_x",
             [](Machine& m_, int index, uint32_t value) {
                 check_scalar_reg(index);
                 m_.set_x(index, value);
             })
        .def("v",
             [](const Machine& m_, int index) {
                 check_vector_reg(index);
                 return m_.v(index);
             })
        .def("set_v",
             [](Machine& m_, int index, const std::array<int16_t, kLanes>& value) {
                 check_vector_reg(index);
                 m_.set_v(index, value);
             })
        .def("rng", &Machine::rng)
        .def("set_rng", &Machine::set_rng)
        .def("read_scalar_word", &Machine::read_scalar_word, py::arg("address"))
        .def("write_scalar_word", &Machine::write_scalar_word, py::arg("address"),
             py::arg("value"))
        .def("read_vector", &Machine::read_vector, py::arg("address"))
        .def("write_vector", &Machine::write_vector, py::arg("address"), py::arg("lanes"))
        .def("total_stats", &Machine::total_stats)
        .def("region_stats", &Machine::region_stats)
        .def("op_counts", [](const Machine& m_) {
            const auto& counts = m_.op_counts();
            return std::vector<uint64_t>(counts.begin(), counts.end());
        });

    // --- Reference models --------------------------------------------------
    py::class_<AlifParams>(m, "AlifParams")
        .def(py::init<>())
        .def_readwrite("tau_m", &AlifParams::tau_m)
        .def_readwrite("tau_a", &AlifParams::tau_a)
        .def_readwrite("v_th", &AlifParams::v_th)
        .def_readwrite("beta", &AlifParams::beta)
        .def("alpha", &AlifParams::alpha)
        .def("rho", &AlifParams::rho);

    py::class_<AlifTrace>(m, "AlifTrace")
        .def_readonly("v", &AlifTrace::v)
        .def_readonly("a", &AlifTrace::a)
        .def_readonly("s", &AlifTrace::s);

    m.def("alif_reference", &alif_reference, py::arg("params"), py::arg("input"));
    m.def("nrmse", &nrmse, py::arg("reference"), py::arg("test"));
    m.def("poisson_pmf", &poisson_pmf, py::arg("k"), py::arg("lam"));

    py::class_<ChiSquareResult>(m, "ChiSquareResult")
        .def_readonly("statistic", &ChiSquareResult::statistic)
        .def_readonly("dof", &ChiSquareResult::dof)
        .def_readonly("critical", &ChiSquareResult::critical)
        .def_readonly("reject", &ChiSquareResult::reject);

    m.def("chi_square_gof_poisson", &chi_square_gof_poisson, py::arg("counts"),
          py::arg("lam"), py::arg("significance"));
    m.def("chi_square_gof_uniform", &chi_square_gof_uniform, py::arg("counts"),
          py::arg("significance"));

    // --- Kernels -----------------------------------------------------------
    py::class_<PoissonKernelConfig>(m, "PoissonKernelConfig")
        .def(py::init<>())
        .def_readwrite("lambda_", &PoissonKernelConfig::lambda)
        .def_readwrite("n_variates", &PoissonKernelConfig::n_variates)
        .def_readwrite("seed", &PoissonKernelConfig::seed);

    py::class_<PoissonOracleResult>(m, "PoissonOracleResult")
        .def_readonly("variates", &PoissonOracleResult::variates)
        .def_readonly("final_rng", &PoissonOracleResult::final_rng)
        .def_readonly("iterations", &PoissonOracleResult::iterations);

    m.def("poisson_level", &poisson_level, py::arg("lam"));
    m.def("build_poisson", &build_poisson, py::arg("config"));
    m.def("poisson_fixed_oracle", &poisson_fixed_oracle, py::arg("config"));
    m.def("read_poisson_variates", &read_poisson_variates, py::arg("machine"),
          py::arg("n_variates"));

    py::class_<AlifKernelConfig>(m, "AlifKernelConfig")
        .def(py::init<>())
        .def_readwrite("params", &AlifKernelConfig::params)
        .def_readwrite("state_format", &AlifKernelConfig::state_format)
        .def_readwrite("rmode", &AlifKernelConfig::rmode)
        .def_readwrite("saturate", &AlifKernelConfig::saturate)
        .def_readwrite("input", &AlifKernelConfig::input)
        .def_readwrite("seed", &AlifKernelConfig::seed);

    py::class_<AlifFixedTrace>(m, "AlifFixedTrace")
        .def_readonly("v", &AlifFixedTrace::v)
        .def_readonly("a", &AlifFixedTrace::a)
        .def_readonly("s", &AlifFixedTrace::s)
        .def_readonly("final_rng", &AlifFixedTrace::final_rng);

    m.def("build_alif", &build_alif, py::arg("config"));
    m.def("alif_fixed_oracle", &alif_fixed_oracle, py::arg("config"));
    m.def("read_alif_trace", &read_alif_trace, py::arg("machine"), py::arg("t_steps"));

    py::class_<RsnnKernelConfig>(m, "RsnnKernelConfig")
        .def(py::init<>())
        .def_readwrite("n_input", &RsnnKernelConfig::n_input)
        .def_readwrite("n_hidden", &RsnnKernelConfig::n_hidden)
        .def_readwrite("n_output", &RsnnKernelConfig::n_output)
        .def_readwrite("params", &RsnnKernelConfig::params)
        .def_readwrite("state_format", &RsnnKernelConfig::state_format)
        .def_readwrite("rmode", &RsnnKernelConfig::rmode)
        .def_readwrite("saturate", &RsnnKernelConfig::saturate)
        .def_readwrite("record_trajectory", &RsnnKernelConfig::record_trajectory)
        .def_readwrite("events", &RsnnKernelConfig::events)
        .def_readwrite("w_in", &RsnnKernelConfig::w_in)
        .def_readwrite("w_rec", &RsnnKernelConfig::w_rec)
        .def_readwrite("w_out", &RsnnKernelConfig::w_out)
        .def_readwrite("seed", &RsnnKernelConfig::seed);

    py::class_<RsnnLayout>(m, "RsnnLayout")
        .def_readonly("h", &RsnnLayout::h)
        .def_readonly("state_vec", &RsnnLayout::state_vec)
        .def_readonly("y_vec", &RsnnLayout::y_vec)
        .def_readonly("iout_vec", &RsnnLayout::iout_vec)
        .def_readonly("w_in_vec", &RsnnLayout::w_in_vec)
        .def_readonly("w_rec_vec", &RsnnLayout::w_rec_vec)
        .def_readonly("w_out_vec", &RsnnLayout::w_out_vec)
        .def_readonly("traj_vec", &RsnnLayout::traj_vec)
        .def_readonly("traj_frame_vectors", &RsnnLayout::traj_frame_vectors)
        .def_readonly("total_vectors", &RsnnLayout::total_vectors)
        .def_readonly("raster_base", &RsnnLayout::raster_base)
        .def_readonly("events_base", &RsnnLayout::events_base)
        .def_readonly("dmem_bytes", &RsnnLayout::dmem_bytes);

    py::class_<RsnnTrace>(m, "RsnnTrace")
        .def_readonly("v", &RsnnTrace::v)
        .def_readonly("a", &RsnnTrace::a)
        .def_readonly("s", &RsnnTrace::s)
        .def_readonly("y", &RsnnTrace::y)
        .def_readonly("final_y", &RsnnTrace::final_y)
        .def_readonly("final_rng", &RsnnTrace::final_rng);

    m.def("rsnn_layout", &rsnn_layout, py::arg("config"));
    m.def("build_rsnn", &build_rsnn, py::arg("config"));
    m.def("rsnn_fixed_oracle", &rsnn_fixed_oracle, py::arg("config"));
    m.def("read_rsnn_trace", &read_rsnn_trace, py::arg("machine"), py::arg("config"));

    m.def("random_weight_matrix", &random_weight_matrix, py::arg("rows"), py::arg("cols"),
          py::arg("format"), py::arg("scale"), py::arg("rng"));
    m.def("random_event_list", &random_event_list, py::arg("n_input"), py::arg("t_steps"),
          py::arg("rate"), py::arg("rng"));

    py::class_<Matrix16>(m, "Matrix16")
        .def(py::init<>())
        .def_readwrite("rows", &Matrix16::rows)
        .def_readwrite("cols", &Matrix16::cols)
        .def_readwrite("values", &Matrix16::values);

    m.def("save_events", &save_events, py::arg("path"), py::arg("events"));
    m.def("load_events", &load_events, py::arg("path"));
    m.def("save_matrix", &save_matrix, py::arg("path"), py::arg("matrix"));
    m.def("load_matrix", &load_matrix, py::arg("path"));

    // --- Harness -----------------------------------------------------------
    py::class_<RoundingErrorStats>(m, "RoundingErrorStats")
        .def_property_readonly("mode",
                               [](const RoundingErrorStats& s) { return to_string(s.mode); })
        .def_readonly("n", &RoundingErrorStats::n)
        .def_readonly("mean_ulps", &RoundingErrorStats::mean_ulps)
        .def_readonly("stddev_ulps", &RoundingErrorStats::stddev_ulps)
        .def_readonly("standard_error", &RoundingErrorStats::standard_error)
        .def_readonly("min_ulps", &RoundingErrorStats::min_ulps)
        .def_readonly("max_ulps", &RoundingErrorStats::max_ulps)
        .def_property_readonly("histogram", [](const RoundingErrorStats& s) {
            return std::vector<uint64_t>(s.histogram.begin(), s.histogram.end());
        });

    py::class_<RoundingHistResult>(m, "RoundingHistResult")
        .def_readonly("n_pairs", &RoundingHistResult::n_pairs)
        .def_readonly("seed", &RoundingHistResult::seed)
        .def_property_readonly("modes", [](const RoundingHistResult& r) {
            return std::vector<RoundingErrorStats>(r.modes.begin(), r.modes.end());
        });

    m.def("run_rounding_hist", &run_rounding_hist, py::arg("n_pairs") = 21760,
          py::arg("seed") = 1);

    py::class_<PoissonRunResult>(m, "PoissonRunResult")
        .def_readonly("config", &PoissonRunResult::config)
        .def_readonly("variates", &PoissonRunResult::variates)
        .def_readonly("matches_oracle", &PoissonRunResult::matches_oracle)
        .def_readonly("sample_mean", &PoissonRunResult::sample_mean)
        .def_readonly("chi_square", &PoissonRunResult::chi_square)
        .def_readonly("histogram", &PoissonRunResult::histogram)
        .def_readonly("region_cycles", &PoissonRunResult::region_cycles)
        .def_readonly("groups", &PoissonRunResult::groups)
        .def_readonly("cycles_per_group", &PoissonRunResult::cycles_per_group);

    m.def("run_poisson", &run_poisson, py::arg("lam") = 5.0, py::arg("n_variates") = 3200,
          py::arg("seed") = 1);

    py::enum_<AlifRegime>(m, "AlifRegime")
        .value("PAUSE", AlifRegime::Pause)
        .value("STAIRCASE", AlifRegime::Staircase);

    py::class_<NrmseSummary>(m, "NrmseSummary")
        .def_readonly("label", &NrmseSummary::label)
        .def_readonly("v", &NrmseSummary::v)
        .def_readonly("a", &NrmseSummary::a)
        .def_readonly("mean_v", &NrmseSummary::mean_v)
        .def_readonly("sd_v", &NrmseSummary::sd_v)
        .def_readonly("mean_a", &NrmseSummary::mean_a)
        .def_readonly("sd_a", &NrmseSummary::sd_a);

    py::class_<AlifCompareResult>(m, "AlifCompareResult")
        .def_property_readonly("regime",
                               [](const AlifCompareResult& r) { return to_string(r.regime); })
        .def_readonly("repeats", &AlifCompareResult::repeats)
        .def_readonly("seed", &AlifCompareResult::seed)
        .def_readonly("state_format", &AlifCompareResult::state_format)
        .def_readonly("baseline", &AlifCompareResult::baseline)
        .def_readonly("variant", &AlifCompareResult::variant)
        .def_readonly("ratio_v", &AlifCompareResult::ratio_v)
        .def_readonly("ratio_a", &AlifCompareResult::ratio_a);

    m.def("run_alif_compare", &run_alif_compare, py::arg("regime"), py::arg("repeats") = 32,
          py::arg("seed") = 1);

    py::class_<RsnnBenchmarkConfig>(m, "RsnnBenchmarkConfig")
        .def(py::init<>())
        .def_readwrite("n_input", &RsnnBenchmarkConfig::n_input)
        .def_readwrite("n_hidden", &RsnnBenchmarkConfig::n_hidden)
        .def_readwrite("n_output", &RsnnBenchmarkConfig::n_output)
        .def_readwrite("t_steps", &RsnnBenchmarkConfig::t_steps)
        .def_readwrite("input_rate", &RsnnBenchmarkConfig::input_rate)
        .def_readwrite("w_in_scale", &RsnnBenchmarkConfig::w_in_scale)
        .def_readwrite("w_rec_scale", &RsnnBenchmarkConfig::w_rec_scale)
        .def_readwrite("w_out_scale", &RsnnBenchmarkConfig::w_out_scale)
        .def_readwrite("state_format", &RsnnBenchmarkConfig::state_format)
        .def_readwrite("rmode", &RsnnBenchmarkConfig::rmode)
        .def_readwrite("saturate", &RsnnBenchmarkConfig::saturate)
        .def_readwrite("params", &RsnnBenchmarkConfig::params)
        .def_readwrite("seed", &RsnnBenchmarkConfig::seed);

    py::class_<RsnnBenchmarkResult>(m, "RsnnBenchmarkResult")
        .def_readonly("config", &RsnnBenchmarkResult::config)
        .def_readonly("matches_oracle", &RsnnBenchmarkResult::matches_oracle)
        .def_readonly("total_cycles", &RsnnBenchmarkResult::total_cycles)
        .def_readonly("cycles_per_step", &RsnnBenchmarkResult::cycles_per_step)
        .def_readonly("spike_stats", &RsnnBenchmarkResult::spike_stats)
        .def_readonly("update_stats", &RsnnBenchmarkResult::update_stats)
        .def_readonly("update_cycles_per_vector",
                      &RsnnBenchmarkResult::update_cycles_per_vector)
        .def_readonly("spike_mem_alu_ratio", &RsnnBenchmarkResult::spike_mem_alu_ratio)
        .def_readonly("total_events", &RsnnBenchmarkResult::total_events)
        .def_readonly("total_hidden_spikes", &RsnnBenchmarkResult::total_hidden_spikes)
        .def_readonly("hidden_spike_rate", &RsnnBenchmarkResult::hidden_spike_rate)
        .def_readonly("raster", &RsnnBenchmarkResult::raster)
        .def_readonly("final_y", &RsnnBenchmarkResult::final_y)
        .def_property_readonly("op_counts",
                               [](const RsnnBenchmarkResult& r) {
                                   return std::vector<uint64_t>(r.op_counts.begin(),
                                                                r.op_counts.end());
                               })
        .def_readonly("total_stats", &RsnnBenchmarkResult::total_stats);

    m.def("run_rsnn", &run_rsnn, py::arg("config") = RsnnBenchmarkConfig{});

    py::class_<ReportResult>(m, "ReportResult")
        .def_readonly("rounding", &ReportResult::rounding)
        .def_readonly("poisson", &ReportResult::poisson)
        .def_readonly("pause", &ReportResult::pause)
        .def_readonly("staircase", &ReportResult::staircase)
        .def_readonly("rsnn", &ReportResult::rsnn);

    m.def("run_report", &run_report, py::arg("seed") = 1, py::arg("repeats") = 32);
    m.def("report_text", &report_text, py::arg("report"));
    m.def("write_report", &write_report, py::arg("out_dir"), py::arg("report"));
}
