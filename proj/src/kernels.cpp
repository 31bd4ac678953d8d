// SPDX-License-Identifier: Apache-2.0
#include "fenn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fenn/errors.hpp"

namespace fenn {

namespace {

// --- Small helpers shared by the builders and oracles ----------------------

std::array<int16_t, kLanes> seed_row(const SeedImage& seeds, int row)
{
    std::array<int16_t, kLanes> lanes{};
    for (int l = 0; l < kLanes; ++l) lanes[size_t(l)] = int16_t(seeds[size_t(row)][size_t(l)]);
    return lanes;
}

void place_seeds(ProgramBuilder& b, uint64_t seed)
{
    const SeedImage seeds = make_seed_image(seed);
    b.set_vector(0, seed_row(seeds, 0));
    b.set_vector(1, seed_row(seeds, 1));
}

using RawBinOp = int16_t (*)(int16_t, int16_t);

RawBinOp add_op(bool saturate) { return saturate ? sat_add_raw : wrap_add_raw; }
RawBinOp sub_op(bool saturate) { return saturate ? sat_sub_raw : wrap_sub_raw; }

// Quantized neuron coefficients: gains in S0.15, levels in the state format.
struct NeuronQuant {
    int16_t alpha = 0, rho = 0, beta = 0; // S0.15
    int16_t vth = 0, one = 0;             // state format
};

NeuronQuant quantize_neuron(const AlifParams& params, QFormat state_format)
{
    if (state_format.frac_bits > 14)
        throw ConfigError("state format cannot represent the spike increment 1.0");
    NeuronQuant q;
    q.alpha = quantize(params.alpha(), QFormat{15}).raw;
    q.rho = quantize(params.rho(), QFormat{15}).raw;
    q.beta = quantize(params.beta, QFormat{15}).raw;
    q.vth = quantize(params.v_th, state_format).raw;
    q.one = quantize(1.0, state_format).raw;
    return q;
}

// --- Binary container helpers ----------------------------------------------

void put_u32(std::ostream& out, uint32_t v)
{
    const uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& in)
{
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("truncated file");
    return uint32_t(b[0]) | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16)
           | (uint32_t(b[3]) << 24);
}

constexpr uint32_t kEventsMagic = 0x56454E46; // "FNEV"
constexpr uint32_t kMatrixMagic = 0x54574E46; // "FNWT"

} // namespace

// ---------------------------------------------------------------------------
// Poisson
// ---------------------------------------------------------------------------

int16_t poisson_level(double lambda)
{
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    const int16_t level = quantize(std::exp(-lambda), QFormat{15}).raw;
    if (level < 1)
        throw ConfigError("lambda too large: the stopping level quantizes to zero");
    return level;
}

namespace {

void check_poisson(const PoissonKernelConfig& config)
{
    if (config.n_variates == 0 || config.n_variates % uint32_t(kLanes))
        throw ConfigError("n_variates must be a positive multiple of the lane count");
}

uint32_t poisson_passes(const PoissonKernelConfig& config)
{
    const uint32_t groups = config.n_variates / uint32_t(kLanes);
    return (groups + kPoissonGroupsPerPass - 1) / kPoissonGroupsPerPass;
}

} // namespace

Program build_poisson(const PoissonKernelConfig& config)
{
    check_poisson(config);
    const int16_t level = poisson_level(config.lambda);
    const uint32_t passes = poisson_passes(config);

    // Scalar: x1 scratch/base, x2 output pointer, x3 pass counter, x4 mask.
    constexpr int xTmp = 1, xOut = 2, xPasses = 3, xMask = 4;
    // Vector: the 16384 constant doubles as the multiplier and the offset
    // in u = (w >> 1) + 1/2.
    constexpr int vC = 1, vOne = 2, vZero = 3, vL = 4, vW = 5, vU = 6, vP = 7, vInd = 8,
                  vT = 9;

    ProgramBuilder b;
    place_seeds(b, config.seed);

    b.li(xTmp, int32_t(kVmemBase));
    b.vload_r0(xTmp, 0);
    b.vload_r1(xTmp, 1);
    b.li(xTmp, 16384);
    b.vbcast(vC, xTmp);
    b.li(xTmp, 1);
    b.vbcast(vOne, xTmp);
    b.vbcast(vZero, 0);
    b.li(xTmp, level);
    b.vbcast(vL, xTmp);
    b.li(xOut, int32_t(kVmemBase + kPoissonOutputVector * kVectorBytes));
    b.li(xPasses, int32_t(passes));

    const auto iteration = [&](bool first) {
        b.vrng(vW);
        if (first) {
            b.vmul(vP, vW, vC, 15, RoundingMode::RoundToZero);
            b.vadd(vP, vP, vC);
        } else {
            b.vmul(vU, vW, vC, 15, RoundingMode::RoundToZero);
            b.vadd(vU, vU, vC);
            b.vmul(vP, vP, vU, 15, RoundingMode::RoundToZero);
        }
        b.vtlt(xMask, vL, vP);
        b.vsel(vT, vOne, vZero, xMask);
        b.vadd(vInd, vInd, vT);
    };

    const Label pass_loop = b.make_label();
    b.begin_region(kPoissonRegion);
    b.bind(pass_loop);
    for (uint32_t g = 0; g < kPoissonGroupsPerPass; ++g) {
        b.vbcast(vInd, 0);
        iteration(true);
        for (uint32_t w = 0; w < kPoissonWarmQuads * kPoissonQuad; ++w) iteration(false);
        const Label quad_loop = b.make_label();
        b.bind(quad_loop);
        for (uint32_t q = 0; q < kPoissonQuad; ++q) iteration(false);
        b.bne(xMask, 0, quad_loop);
        b.vstore(vInd, xOut, int32_t(g));
    }
    b.addi(xOut, xOut, int32_t(kPoissonGroupsPerPass * kVectorBytes));
    b.addi(xPasses, xPasses, -1);
    b.bne(xPasses, 0, pass_loop);
    b.end_region();
    b.ecall();
    return b.finalize();
}

PoissonOracleResult poisson_fixed_oracle(const PoissonKernelConfig& config)
{
    check_poisson(config);
    const int16_t level = poisson_level(config.lambda);
    const uint32_t passes = poisson_passes(config);

    PoissonOracleResult result;
    result.final_rng = seed_state(make_seed_image(config.seed));
    auto& rng = result.final_rng;

    std::vector<int16_t> variates;
    variates.reserve(size_t(passes) * kPoissonGroupsPerPass * kLanes);
    for (uint32_t pass = 0; pass < passes; ++pass) {
        for (uint32_t g = 0; g < kPoissonGroupsPerPass; ++g) {
            std::array<int16_t, kLanes> ind{};
            std::array<int16_t, kLanes> p{};
            uint32_t mask = 0;
            const auto iteration = [&](bool first) {
                mask = 0;
                for (int l = 0; l < kLanes; ++l) {
                    const int16_t w = int16_t(next16(rng.lanes[size_t(l)]));
                    int16_t u = fx_mul_raw(w, 16384, 15, RoundingMode::RoundToZero);
                    u = wrap_add_raw(u, 16384);
                    p[size_t(l)] = first
                                       ? u
                                       : fx_mul_raw(p[size_t(l)], u, 15,
                                                    RoundingMode::RoundToZero);
                    if (level < p[size_t(l)]) {
                        mask |= uint32_t(1) << l;
                        ind[size_t(l)] = wrap_add_raw(ind[size_t(l)], 1);
                    }
                }
                result.iterations++;
            };
            iteration(true);
            for (uint32_t w = 0; w < kPoissonWarmQuads * kPoissonQuad; ++w) iteration(false);
            do {
                for (uint32_t q = 0; q < kPoissonQuad; ++q) iteration(false);
            } while (mask != 0);
            variates.insert(variates.end(), ind.begin(), ind.end());
        }
    }
    variates.resize(config.n_variates);
    result.variates = std::move(variates);
    return result;
}

std::vector<int16_t> read_poisson_variates(const Machine& machine, uint32_t n_variates)
{
    std::vector<int16_t> variates;
    variates.reserve(n_variates + kLanes);
    for (uint32_t vec = 0; variates.size() < n_variates; ++vec) {
        const auto lanes = machine.read_vector(
            kVmemBase + (kPoissonOutputVector + vec) * kVectorBytes);
        variates.insert(variates.end(), lanes.begin(), lanes.end());
    }
    variates.resize(n_variates);
    return variates;
}

// ---------------------------------------------------------------------------
// Adaptive LIF layer
// ---------------------------------------------------------------------------

Program build_alif(const AlifKernelConfig& config)
{
    if (config.input.empty()) throw ConfigError("input must span at least one step");
    const NeuronQuant q = quantize_neuron(config.params, config.state_format);
    const uint32_t t_steps = uint32_t(config.input.size());

    constexpr int xFrame = 1, xMaskPtr = 2, xSteps = 3, xMask = 4, xTmp = 5;
    constexpr int vAlpha = 1, vRho = 2, vBeta = 3, vVth = 4, vOne = 5, vV = 6, vA = 7,
                  vI = 8, vT1 = 9, vT2 = 10;

    ProgramBuilder b;
    place_seeds(b, config.seed);
    for (uint32_t t = 0; t < t_steps; ++t)
        b.set_vector(kAlifFirstFrameVector + kAlifFrameVectors * t, config.input[t]);

    b.li(xTmp, int32_t(kVmemBase));
    b.vload_r0(xTmp, 0);
    b.vload_r1(xTmp, 1);
    b.li(xTmp, q.alpha);
    b.vbcast(vAlpha, xTmp);
    b.li(xTmp, q.rho);
    b.vbcast(vRho, xTmp);
    b.li(xTmp, q.beta);
    b.vbcast(vBeta, xTmp);
    b.li(xTmp, q.vth);
    b.vbcast(vVth, xTmp);
    b.li(xTmp, q.one);
    b.vbcast(vOne, xTmp);
    b.vbcast(vV, 0);
    b.vbcast(vA, 0);
    b.li(xFrame, int32_t(kVmemBase + kAlifFirstFrameVector * kVectorBytes));
    b.li(xMaskPtr, int32_t(kDmemBase + kAlifMaskBase));
    b.li(xSteps, int32_t(t_steps));

    const auto add = [&](int vd, int vs1, int vs2) {
        config.saturate ? b.vadd_s(vd, vs1, vs2) : b.vadd(vd, vs1, vs2);
    };
    const auto sub = [&](int vd, int vs1, int vs2) {
        config.saturate ? b.vsub_s(vd, vs1, vs2) : b.vsub(vd, vs1, vs2);
    };

    const Label loop = b.make_label();
    b.begin_region(kRsnnUpdateRegion);
    b.bind(loop);
    b.vload(vI, xFrame, 0);
    b.vmul(vT1, vBeta, vA, 15, config.rmode);
    add(vT1, vVth, vT1);
    b.vtge(xMask, vV, vT1);
    b.vmul(vV, vAlpha, vV, 15, config.rmode);
    add(vV, vV, vI);
    sub(vT2, vV, vVth);
    b.vsel(vV, vT2, vV, xMask);
    b.vmul(vA, vRho, vA, 15, config.rmode);
    add(vT2, vA, vOne);
    b.vsel(vA, vT2, vA, xMask);
    b.vstore(vV, xFrame, 1);
    b.vstore(vA, xFrame, 2);
    b.sw(xMask, xMaskPtr, 0);
    b.addi(xMaskPtr, xMaskPtr, 4);
    b.addi(xFrame, xFrame, int32_t(kAlifFrameVectors * kVectorBytes));
    b.addi(xSteps, xSteps, -1);
    b.bne(xSteps, 0, loop);
    b.end_region();
    b.ecall();
    return b.finalize();
}

AlifFixedTrace alif_fixed_oracle(const AlifKernelConfig& config)
{
    if (config.input.empty()) throw ConfigError("input must span at least one step");
    const NeuronQuant q = quantize_neuron(config.params, config.state_format);
    const RawBinOp add = add_op(config.saturate);
    const RawBinOp sub = sub_op(config.saturate);
    const bool stochastic = config.rmode == RoundingMode::Stochastic;

    AlifFixedTrace trace;
    trace.final_rng = seed_state(make_seed_image(config.seed));
    auto& rng = trace.final_rng;
    const auto entropy = [&](int lane) {
        return stochastic ? next16(rng.lanes[size_t(lane)]) : uint16_t(0);
    };

    std::array<int16_t, kLanes> v{};
    std::array<int16_t, kLanes> a{};
    for (const auto& input : config.input) {
        std::array<int16_t, kLanes> threshold{};
        for (int l = 0; l < kLanes; ++l) {
            const int16_t ba = fx_mul_raw(q.beta, a[size_t(l)], 15, config.rmode, entropy(l));
            threshold[size_t(l)] = add(q.vth, ba);
        }
        uint32_t mask = 0;
        for (int l = 0; l < kLanes; ++l)
            mask |= uint32_t(v[size_t(l)] >= threshold[size_t(l)]) << l;
        for (int l = 0; l < kLanes; ++l) {
            const int16_t av = fx_mul_raw(q.alpha, v[size_t(l)], 15, config.rmode, entropy(l));
            const int16_t vi = add(av, input[size_t(l)]);
            v[size_t(l)] = (mask >> l) & 1 ? sub(vi, q.vth) : vi;
        }
        for (int l = 0; l < kLanes; ++l) {
            const int16_t ra = fx_mul_raw(q.rho, a[size_t(l)], 15, config.rmode, entropy(l));
            a[size_t(l)] = (mask >> l) & 1 ? add(ra, q.one) : ra;
        }
        trace.v.push_back(v);
        trace.a.push_back(a);
        trace.s.push_back(mask);
    }
    return trace;
}

AlifFixedTrace read_alif_trace(const Machine& machine, uint32_t t_steps)
{
    AlifFixedTrace trace;
    for (uint32_t t = 0; t < t_steps; ++t) {
        const uint32_t frame = kVmemBase
                               + (kAlifFirstFrameVector + kAlifFrameVectors * t) * kVectorBytes;
        trace.v.push_back(machine.read_vector(frame + kVectorBytes));
        trace.a.push_back(machine.read_vector(frame + 2 * kVectorBytes));
        trace.s.push_back(machine.read_scalar_word(kDmemBase + kAlifMaskBase + 4 * t));
    }
    trace.final_rng = machine.rng();
    return trace;
}

// ---------------------------------------------------------------------------
// Recurrent spiking network
// ---------------------------------------------------------------------------

namespace {

void check_rsnn(const RsnnKernelConfig& c)
{
    if (c.n_hidden == 0 || c.n_hidden % uint32_t(kLanes))
        throw ConfigError("n_hidden must be a positive multiple of the lane count");
    if (c.n_output == 0 || c.n_output > uint32_t(kLanes))
        throw ConfigError("n_output must be between 1 and the lane count");
    if (c.n_input == 0) throw ConfigError("n_input must be positive");
    if (c.events.empty()) throw ConfigError("events must span at least one step");
    if (c.w_in.size() != size_t(c.n_input) * c.n_hidden)
        throw ConfigError("w_in size does not match n_input x n_hidden");
    if (c.w_rec.size() != size_t(c.n_hidden) * c.n_hidden)
        throw ConfigError("w_rec size does not match n_hidden x n_hidden");
    if (c.w_out.size() != size_t(c.n_hidden) * c.n_output)
        throw ConfigError("w_out size does not match n_hidden x n_output");
    for (const auto& step : c.events)
        for (uint32_t j : step)
            if (j >= c.n_input) throw ConfigError("event index outside n_input");
}

} // namespace

RsnnLayout rsnn_layout(const RsnnKernelConfig& c)
{
    check_rsnn(c);
    const uint32_t t_steps = uint32_t(c.events.size());
    RsnnLayout layout;
    layout.h = c.n_hidden / uint32_t(kLanes);
    layout.state_vec = 2;
    layout.iout_vec = layout.state_vec + 3 * layout.h;
    layout.y_vec = layout.iout_vec + 1;
    layout.w_in_vec = layout.y_vec + 1;
    layout.w_rec_vec = layout.w_in_vec + c.n_input * layout.h;
    layout.w_out_vec = layout.w_rec_vec + c.n_hidden * layout.h;
    layout.traj_vec = layout.w_out_vec + c.n_hidden;
    layout.traj_frame_vectors = c.record_trajectory ? 2 * layout.h + 1 : 0;
    layout.total_vectors = layout.traj_vec + t_steps * layout.traj_frame_vectors;
    layout.raster_base = 0;
    layout.events_base = layout.raster_base + (t_steps + 1) * layout.h * 4;
    uint32_t event_words = 0;
    for (const auto& step : c.events) event_words += uint32_t(step.size()) + 1;
    layout.dmem_bytes = layout.events_base + event_words * 4;
    return layout;
}

Program build_rsnn(const RsnnKernelConfig& c)
{
    const RsnnLayout L = rsnn_layout(c);
    const NeuronQuant q = quantize_neuron(c.params, c.state_format);
    const uint32_t t_steps = uint32_t(c.events.size());
    const int h = int(L.h);

    ProgramBuilder b;
    place_seeds(b, c.seed);

    // Weight images.
    for (uint32_t j = 0; j < c.n_input; ++j)
        for (int k = 0; k < h; ++k) {
            std::array<int16_t, kLanes> lanes{};
            for (int l = 0; l < kLanes; ++l)
                lanes[size_t(l)] = c.w_in[size_t(j) * c.n_hidden + size_t(k) * kLanes
                                          + size_t(l)];
            b.set_vector(L.w_in_vec + j * L.h + uint32_t(k), lanes);
        }
    for (uint32_t j = 0; j < c.n_hidden; ++j)
        for (int k = 0; k < h; ++k) {
            std::array<int16_t, kLanes> lanes{};
            for (int l = 0; l < kLanes; ++l)
                lanes[size_t(l)] = c.w_rec[size_t(j) * c.n_hidden + size_t(k) * kLanes
                                           + size_t(l)];
            b.set_vector(L.w_rec_vec + j * L.h + uint32_t(k), lanes);
        }
    for (uint32_t j = 0; j < c.n_hidden; ++j) {
        std::array<int16_t, kLanes> lanes{};
        for (uint32_t l = 0; l < c.n_output; ++l)
            lanes[size_t(l)] = c.w_out[size_t(j) * c.n_output + size_t(l)];
        b.set_vector(L.w_out_vec + j, lanes);
    }

    // Event stream: indices then a -1 sentinel, step after step.
    {
        uint32_t cursor = L.events_base;
        for (const auto& step : c.events) {
            for (uint32_t j : step) {
                b.set_scalar_word(cursor, j);
                cursor += 4;
            }
            b.set_scalar_word(cursor, 0xFFFFFFFFu);
            cursor += 4;
        }
    }

    constexpr int xEv = 1, xRead = 2, xWrite = 3, xWin = 4, xWrec = 5, xWout = 6,
                  xStride = 7, xState = 8, xTraj = 9, xSteps = 10, xJ = 11, xScan = 12,
                  xRow = 13, xBit = 14, xMask = 15;
    constexpr int vW0 = 1, vI0 = 2, vW1 = 3, vI1 = 4, vWo = 5, vIo = 6, vV = 7, vA = 8,
                  vI = 9, vT1 = 10, vT2 = 11, vY = 12;
    constexpr int vAlpha = 20, vRho = 21, vBeta = 22, vVth = 23, vOne = 24, vZero = 25;

    b.li(xRow, int32_t(kVmemBase));
    b.vload_r0(xRow, 0);
    b.vload_r1(xRow, 1);
    b.li(xRow, q.alpha);
    b.vbcast(vAlpha, xRow);
    b.li(xRow, q.rho);
    b.vbcast(vRho, xRow);
    b.li(xRow, q.beta);
    b.vbcast(vBeta, xRow);
    b.li(xRow, q.vth);
    b.vbcast(vVth, xRow);
    b.li(xRow, q.one);
    b.vbcast(vOne, xRow);
    b.vbcast(vZero, 0);
    b.vbcast(vY, 0);
    b.li(xEv, int32_t(kDmemBase + L.events_base));
    b.li(xRead, int32_t(kDmemBase + L.raster_base));
    b.li(xWrite, int32_t(kDmemBase + L.raster_base + L.h * 4));
    b.li(xWin, int32_t(kVmemBase + L.w_in_vec * kVectorBytes));
    b.li(xWrec, int32_t(kVmemBase + L.w_rec_vec * kVectorBytes));
    b.li(xWout, int32_t(kVmemBase + L.w_out_vec * kVectorBytes));
    b.li(xStride, int32_t(L.h * kVectorBytes));
    b.li(xState, int32_t(kVmemBase + L.state_vec * kVectorBytes));
    if (c.record_trajectory) b.li(xTraj, int32_t(kVmemBase + L.traj_vec * kVectorBytes));
    b.li(xSteps, int32_t(t_steps));

    const auto add = [&](int vd, int vs1, int vs2) {
        c.saturate ? b.vadd_s(vd, vs1, vs2) : b.vadd(vd, vs1, vs2);
    };
    const auto sub = [&](int vd, int vs1, int vs2) {
        c.saturate ? b.vsub_s(vd, vs1, vs2) : b.vsub(vd, vs1, vs2);
    };

    // Adds the weight row at xRow into the synaptic accumulators,
    // memory-to-memory, two vectors at a time.
    const auto accumulate_row = [&] {
        int k = 0;
        for (; k + 1 < h; k += 2) {
            b.vload(vW0, xRow, k);
            b.vload(vI0, xState, 2 * h + k);
            b.vload(vW1, xRow, k + 1);
            b.vload(vI1, xState, 2 * h + k + 1);
            add(vI0, vI0, vW0);
            add(vI1, vI1, vW1);
            b.vstore(vI0, xState, 2 * h + k);
            b.vstore(vI1, xState, 2 * h + k + 1);
        }
        if (k < h) {
            b.vload(vW0, xRow, k);
            b.vload(vI0, xState, 2 * h + k);
            add(vI0, vI0, vW0);
            b.vstore(vI0, xState, 2 * h + k);
        }
    };

    const Label step_loop = b.make_label();
    b.bind(step_loop);

    // --- Phase 1: spike processing ----------------------------------------
    b.begin_region(kRsnnSpikeRegion);
    {
        const Label ev_loop = b.make_label();
        const Label ev_done = b.make_label();
        b.bind(ev_loop);
        b.lw(xJ, xEv, 0);
        b.addi(xEv, xEv, 4);
        b.blt(xJ, 0, ev_done);
        b.mul(xRow, xJ, xStride);
        b.add(xRow, xRow, xWin);
        accumulate_row();
        b.jump(ev_loop);
        b.bind(ev_done);
    }
    for (int w = 0; w < h; ++w) {
        const Label skip_word = b.make_label();
        const Label scan = b.make_label();
        const Label no_spike = b.make_label();
        b.lw(xScan, xRead, 4 * w);
        b.beq(xScan, 0, skip_word);
        b.addi(xJ, 0, w * kLanes);
        b.bind(scan);
        b.andi(xBit, xScan, 1);
        b.beq(xBit, 0, no_spike);
        b.mul(xRow, xJ, xStride);
        b.add(xRow, xRow, xWrec);
        accumulate_row();
        b.slli(xBit, xJ, 6);
        b.add(xBit, xBit, xWout);
        b.vload(vWo, xBit, 0);
        b.vload(vIo, xState, 3 * h);
        add(vIo, vIo, vWo);
        b.vstore(vIo, xState, 3 * h);
        b.bind(no_spike);
        b.srli(xScan, xScan, 1);
        b.addi(xJ, xJ, 1);
        b.bne(xScan, 0, scan);
        b.bind(skip_word);
    }
    b.end_region();

    // --- Phase 2: neuron update -------------------------------------------
    b.begin_region(kRsnnUpdateRegion);
    for (int v = 0; v < h; ++v) {
        b.vload(vV, xState, v);
        b.vload(vA, xState, h + v);
        b.vload(vI, xState, 2 * h + v);
        b.vmul(vT1, vBeta, vA, 15, c.rmode);
        add(vT1, vVth, vT1);
        b.vtge(xMask, vV, vT1);
        b.vmul(vV, vAlpha, vV, 15, c.rmode);
        add(vV, vV, vI);
        sub(vT2, vV, vVth);
        b.vsel(vV, vT2, vV, xMask);
        b.vmul(vA, vRho, vA, 15, c.rmode);
        add(vT2, vA, vOne);
        b.vsel(vA, vT2, vA, xMask);
        b.vstore(vV, xState, v);
        b.vstore(vA, xState, h + v);
        b.vstore(vZero, xState, 2 * h + v);
        b.sw(xMask, xWrite, 4 * v);
        if (c.record_trajectory) {
            b.vstore(vV, xTraj, 2 * v);
            b.vstore(vA, xTraj, 2 * v + 1);
        }
    }
    b.vload(vIo, xState, 3 * h);
    b.vmul(vY, vAlpha, vY, 15, c.rmode);
    add(vY, vY, vIo);
    b.vstore(vZero, xState, 3 * h);
    if (c.record_trajectory) b.vstore(vY, xTraj, 2 * h);
    b.end_region();

    b.addi(xRead, xRead, int32_t(L.h * 4));
    b.addi(xWrite, xWrite, int32_t(L.h * 4));
    if (c.record_trajectory)
        b.addi(xTraj, xTraj, int32_t(L.traj_frame_vectors * kVectorBytes));
    b.addi(xSteps, xSteps, -1);
    b.bne(xSteps, 0, step_loop);

    b.vstore(vY, xState, 3 * h + 1); // final output accumulator
    b.ecall();
    return b.finalize();
}

RsnnTrace rsnn_fixed_oracle(const RsnnKernelConfig& c)
{
    check_rsnn(c);
    const NeuronQuant q = quantize_neuron(c.params, c.state_format);
    const int h = int(c.n_hidden) / kLanes;
    const RawBinOp add = add_op(c.saturate);
    const RawBinOp sub = sub_op(c.saturate);
    const bool stochastic = c.rmode == RoundingMode::Stochastic;

    RsnnTrace trace;
    trace.final_rng = seed_state(make_seed_image(c.seed));
    auto& rng = trace.final_rng;
    const auto entropy = [&](int lane) {
        return stochastic ? next16(rng.lanes[size_t(lane)]) : uint16_t(0);
    };

    std::vector<std::array<int16_t, kLanes>> v{size_t(h)}, a{size_t(h)}, syn{size_t(h)};
    for (auto& x : v) x.fill(0);
    for (auto& x : a) x.fill(0);
    for (auto& x : syn) x.fill(0);
    std::array<int16_t, kLanes> y{}, iout{};
    std::vector<uint32_t> previous(size_t(h), 0);

    const auto accumulate = [&](const int16_t* row) {
        for (int k = 0; k < h; ++k)
            for (int l = 0; l < kLanes; ++l)
                syn[size_t(k)][size_t(l)] =
                    add(syn[size_t(k)][size_t(l)], row[k * kLanes + l]);
    };

    for (const auto& step_events : c.events) {
        // Phase 1: input events, then previous-step hidden spikes (mask
        // words ascending, bits ascending).
        for (uint32_t j : step_events) accumulate(&c.w_in[size_t(j) * c.n_hidden]);
        for (int w = 0; w < h; ++w) {
            uint32_t mask = previous[size_t(w)];
            for (int bit = 0; mask != 0; ++bit, mask >>= 1) {
                if (!(mask & 1)) continue;
                const uint32_t j = uint32_t(w) * kLanes + uint32_t(bit);
                accumulate(&c.w_rec[size_t(j) * c.n_hidden]);
                for (uint32_t l = 0; l < c.n_output; ++l)
                    iout[size_t(l)] = add(iout[size_t(l)],
                                          c.w_out[size_t(j) * c.n_output + size_t(l)]);
            }
        }

        // Phase 2: neuron update per hidden vector, then the output layer.
        std::vector<uint32_t> masks(size_t(h), 0);
        for (int vec = 0; vec < h; ++vec) {
            std::array<int16_t, kLanes> threshold{};
            for (int l = 0; l < kLanes; ++l) {
                const int16_t ba =
                    fx_mul_raw(q.beta, a[size_t(vec)][size_t(l)], 15, c.rmode, entropy(l));
                threshold[size_t(l)] = add(q.vth, ba);
            }
            uint32_t mask = 0;
            for (int l = 0; l < kLanes; ++l)
                mask |= uint32_t(v[size_t(vec)][size_t(l)] >= threshold[size_t(l)]) << l;
            for (int l = 0; l < kLanes; ++l) {
                const int16_t av =
                    fx_mul_raw(q.alpha, v[size_t(vec)][size_t(l)], 15, c.rmode, entropy(l));
                const int16_t vi = add(av, syn[size_t(vec)][size_t(l)]);
                v[size_t(vec)][size_t(l)] = (mask >> l) & 1 ? sub(vi, q.vth) : vi;
            }
            for (int l = 0; l < kLanes; ++l) {
                const int16_t ra =
                    fx_mul_raw(q.rho, a[size_t(vec)][size_t(l)], 15, c.rmode, entropy(l));
                a[size_t(vec)][size_t(l)] = (mask >> l) & 1 ? add(ra, q.one) : ra;
            }
            syn[size_t(vec)].fill(0);
            masks[size_t(vec)] = mask;
        }
        for (int l = 0; l < kLanes; ++l) {
            const int16_t ay = fx_mul_raw(q.alpha, y[size_t(l)], 15, c.rmode, entropy(l));
            y[size_t(l)] = add(ay, iout[size_t(l)]);
        }
        iout.fill(0);

        trace.v.push_back(v);
        trace.a.push_back(a);
        trace.s.push_back(masks);
        trace.y.push_back(y);
        previous = masks;
    }
    trace.final_y = y;
    return trace;
}

RsnnTrace read_rsnn_trace(const Machine& machine, const RsnnKernelConfig& c)
{
    const RsnnLayout L = rsnn_layout(c);
    const uint32_t t_steps = uint32_t(c.events.size());
    RsnnTrace trace;
    for (uint32_t t = 0; t < t_steps; ++t) {
        std::vector<uint32_t> masks(L.h);
        for (uint32_t w = 0; w < L.h; ++w)
            masks[w] = machine.read_scalar_word(kDmemBase + L.raster_base
                                                + (t + 1) * L.h * 4 + w * 4);
        trace.s.push_back(std::move(masks));
        if (c.record_trajectory) {
            const uint32_t frame = kVmemBase
                                   + (L.traj_vec + t * L.traj_frame_vectors) * kVectorBytes;
            std::vector<std::array<int16_t, kLanes>> v(L.h), a(L.h);
            for (uint32_t k = 0; k < L.h; ++k) {
                v[k] = machine.read_vector(frame + 2 * k * kVectorBytes);
                a[k] = machine.read_vector(frame + (2 * k + 1) * kVectorBytes);
            }
            trace.v.push_back(std::move(v));
            trace.a.push_back(std::move(a));
            trace.y.push_back(machine.read_vector(frame + 2 * L.h * kVectorBytes));
        }
    }
    trace.final_y = machine.read_vector(kVmemBase + L.y_vec * kVectorBytes);
    trace.final_rng = machine.rng();
    return trace;
}

// ---------------------------------------------------------------------------
// Inputs and persistence
// ---------------------------------------------------------------------------

std::vector<int16_t> random_weight_matrix(uint32_t rows, uint32_t cols, QFormat format,
                                          double scale, HostRng& rng)
{
    std::vector<int16_t> values;
    values.reserve(size_t(rows) * cols);
    for (size_t i = 0; i < size_t(rows) * cols; ++i) {
        const double u = rng.next_double() * 2.0 - 1.0;
        values.push_back(quantize(u * scale, format).raw);
    }
    return values;
}

std::vector<std::vector<uint32_t>> random_event_list(uint32_t n_input, uint32_t t_steps,
                                                     double rate, HostRng& rng)
{
    std::vector<std::vector<uint32_t>> events(t_steps);
    for (auto& step : events)
        for (uint32_t j = 0; j < n_input; ++j)
            if (rng.next_double() < rate) step.push_back(j);
    return events;
}

void save_events(const std::string& path, const std::vector<std::vector<uint32_t>>& events)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    put_u32(out, kEventsMagic);
    put_u32(out, 1);
    put_u32(out, uint32_t(events.size()));
    for (const auto& step : events) {
        put_u32(out, uint32_t(step.size()));
        for (uint32_t j : step) put_u32(out, j);
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::vector<uint32_t>> load_events(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    in.seekg(0, std::ios::end);
    const uint64_t file_size = uint64_t(in.tellg());
    in.seekg(0);
    if (get_u32(in) != kEventsMagic) throw IoError("bad magic in " + path);
    if (get_u32(in) != 1) throw IoError("unsupported version in " + path);
    const uint32_t steps = get_u32(in);
    // Every step costs at least its own count word.
    if (uint64_t(steps) > (file_size - 12) / 4) throw IoError("bad step count in " + path);
    std::vector<std::vector<uint32_t>> events(steps);
    for (auto& step : events) {
        const uint32_t n = get_u32(in);
        if (uint64_t(n) > (file_size - uint64_t(in.tellg())) / 4)
            throw IoError("bad event count in " + path);
        step.resize(n);
        for (uint32_t& j : step) j = get_u32(in);
    }
    return events;
}

void save_matrix(const std::string& path, const Matrix16& matrix)
{
    if (matrix.values.size() != size_t(matrix.rows) * matrix.cols)
        throw OutOfRangeError("matrix dimensions do not match the value count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    put_u32(out, kMatrixMagic);
    put_u32(out, 1);
    put_u32(out, matrix.rows);
    put_u32(out, matrix.cols);
    for (int16_t v : matrix.values) {
        const uint8_t b[2] = {uint8_t(uint16_t(v)), uint8_t(uint16_t(v) >> 8)};
        out.write(reinterpret_cast<const char*>(b), 2);
    }
    if (!out) throw IoError("write failed: " + path);
}

Matrix16 load_matrix(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    in.seekg(0, std::ios::end);
    const uint64_t file_size = uint64_t(in.tellg());
    in.seekg(0);
    if (get_u32(in) != kMatrixMagic) throw IoError("bad magic in " + path);
    if (get_u32(in) != 1) throw IoError("unsupported version in " + path);
    Matrix16 matrix;
    matrix.rows = get_u32(in);
    matrix.cols = get_u32(in);
    if (uint64_t(matrix.rows) * matrix.cols > (file_size - 16) / 2)
        throw IoError("bad matrix size in " + path);
    matrix.values.resize(size_t(matrix.rows) * matrix.cols);
    for (int16_t& v : matrix.values) {
        uint8_t b[2];
        in.read(reinterpret_cast<char*>(b), 2);
        if (!in) throw IoError("truncated file: " + path);
        v = int16_t(uint16_t(b[0]) | (uint16_t(b[1]) << 8));
    }
    return matrix;
}

} // namespace fenn
