// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fenn/assembler.hpp"
#include "fenn/core.hpp"
#include "fenn/fixedpoint.hpp"
#include "fenn/reference.hpp"
#include "fenn/rng.hpp"

namespace fenn {

// ---------------------------------------------------------------------------
// Poisson variate generator
//
// 32 lanes run the multiplicative (product-of-uniforms) sampler in S0.15:
// each iteration draws a lane-local random word w, forms the uniform
// u = (w >> 1) + 16384 in [0, 1), multiplies it into the running product p
// (round-to-zero), and counts the lanes still above the stopping level
// L = quantize(exp(-lambda)); by monotonicity of p the per-lane count is the
// variate. The loop is unrolled: one peeled first iteration (p = u), one
// unconditionally executed quad, then quads guarded by a single
// all-lanes-done test; overshooting iterations are no-ops. Groups of 32
// variates are produced four per outer-loop pass.
// ---------------------------------------------------------------------------

struct PoissonKernelConfig {
    double lambda = 5.0;
    uint32_t n_variates = 3200; // multiple of 32
    uint64_t seed = 1;
};

// Loop-shape constants shared by the builder and the oracle.
inline constexpr uint32_t kPoissonQuad = 4;      // iterations per guarded quad
inline constexpr uint32_t kPoissonWarmQuads = 1; // unguarded quads after the peel
inline constexpr uint32_t kPoissonGroupsPerPass = 4;
inline constexpr uint32_t kPoissonOutputVector = 2; // first output, after seeds
inline constexpr const char* kPoissonRegion = "generate";

Program build_poisson(const PoissonKernelConfig& config);

struct PoissonOracleResult {
    std::vector<int16_t> variates; // n_variates entries
    VectorRngState final_rng;
    uint64_t iterations = 0; // executed lane iterations / 32 (padding included)
};

PoissonOracleResult poisson_fixed_oracle(const PoissonKernelConfig& config);

// The stopping level actually used (raw S0.15); ConfigError when it would
// quantize to zero and the sampler could not terminate.
int16_t poisson_level(double lambda);

// Variates back out of vector memory after a run.
std::vector<int16_t> read_poisson_variates(const Machine& machine, uint32_t n_variates);

// ---------------------------------------------------------------------------
// Adaptive LIF layer (32 neurons, one vector)
//
// Per step, in this order (entropy draws for the stochastic multiplies
// happen in the same order):
//   B      = vth + beta * A          (multiply, add)
//   S      = V >= B                  (spike mask; ties spike)
//   V'     = alpha * V + I           (multiply, add)
//   V      = S ? V' - vth : V'
//   A'     = rho * A                 (multiply)
//   A      = S ? A' + 1 : A'
// Coefficients alpha, rho, beta are S0.15; V, A, I, vth and 1 share the
// configured state format. Adds/subtracts saturate or wrap per config.
// ---------------------------------------------------------------------------

struct AlifKernelConfig {
    AlifParams params;
    QFormat state_format{12};
    RoundingMode rmode = RoundingMode::RoundToZero;
    bool saturate = true;
    std::vector<std::array<int16_t, kLanes>> input; // raw, state format, [t][lane]
    uint64_t seed = 1;
};

// Vector-memory layout: seeds in vectors 0-1, then one frame of
// {I, V, A} vectors per step; spike masks are words in data memory.
inline constexpr uint32_t kAlifFrameVectors = 3;
inline constexpr uint32_t kAlifFirstFrameVector = 2;
inline constexpr uint32_t kAlifMaskBase = 0; // dmem byte offset

Program build_alif(const AlifKernelConfig& config);

struct AlifFixedTrace {
    std::vector<std::array<int16_t, kLanes>> v, a; // state after each step
    std::vector<uint32_t> s;                       // spike mask per step
    VectorRngState final_rng;
};

AlifFixedTrace alif_fixed_oracle(const AlifKernelConfig& config);

// Trajectory back out of the machine after a run.
AlifFixedTrace read_alif_trace(const Machine& machine, uint32_t t_steps);

// ---------------------------------------------------------------------------
// Recurrent spiking network
//
// n_input event sources feed n_hidden adaptive LIF neurons (n_hidden / 32
// vectors) which feed n_output leaky accumulators (one vector, surplus
// lanes zero). Each step has two phases:
//
//   spike processing: for each input event of this step, then for each
//   hidden spike of the previous step (mask words ascending, bits
//   ascending), add the presynaptic weight row into the synaptic
//   accumulators memory-to-memory (load row vector, load accumulator,
//   saturating add, store). Hidden spikes also add a weight row into the
//   output accumulator input.
//
//   neuron update: the adaptive LIF update above per hidden vector (spike
//   masks written to the raster consumed one step later), synaptic
//   accumulators re-zeroed, then the output update Y = alpha * Y + Iout.
//
// Entropy draws per step when stochastic: per hidden vector beta*A,
// alpha*V, rho*A, then alpha*Y.
// ---------------------------------------------------------------------------

struct RsnnKernelConfig {
    uint32_t n_input = 700;
    uint32_t n_hidden = 256; // multiple of 32
    uint32_t n_output = 20;  // at most 32
    AlifParams params;
    QFormat state_format{12};
    RoundingMode rmode = RoundingMode::RoundToZero;
    bool saturate = true;
    bool record_trajectory = false; // store V, A, Y per step
    std::vector<std::vector<uint32_t>> events; // [t][input indices, ascending]
    std::vector<int16_t> w_in;  // [n_input][n_hidden] row-major, state format
    std::vector<int16_t> w_rec; // [n_hidden][n_hidden]
    std::vector<int16_t> w_out; // [n_hidden][n_output]
    uint64_t seed = 1;
};

inline constexpr const char* kRsnnSpikeRegion = "spike_processing";
inline constexpr const char* kRsnnUpdateRegion = "neuron_update";

// Derived memory placement (vector indices and dmem byte offsets).
struct RsnnLayout {
    uint32_t h = 0; // hidden vectors = n_hidden / 32
    uint32_t state_vec = 2;   // V rows; A at +h, Isyn at +2h
    uint32_t y_vec = 0;       // final output accumulator
    uint32_t iout_vec = 0;    // output-layer synaptic input
    uint32_t w_in_vec = 0;
    uint32_t w_rec_vec = 0;
    uint32_t w_out_vec = 0;
    uint32_t traj_vec = 0;          // first trajectory frame (when recorded)
    uint32_t traj_frame_vectors = 0; // V rows, A rows, Y
    uint32_t total_vectors = 0;
    uint32_t raster_base = 0;  // dmem: (t_steps + 1) rows of h mask words
    uint32_t events_base = 0;  // dmem: event words, sentinel-terminated per step
    uint32_t dmem_bytes = 0;
};

RsnnLayout rsnn_layout(const RsnnKernelConfig& config);

Program build_rsnn(const RsnnKernelConfig& config);

struct RsnnTrace {
    std::vector<std::vector<std::array<int16_t, kLanes>>> v, a; // [t][vec]
    std::vector<std::vector<uint32_t>> s;                       // [t][vec]
    std::vector<std::array<int16_t, kLanes>> y;                 // [t]
    std::array<int16_t, kLanes> final_y{};
    VectorRngState final_rng;
};

RsnnTrace rsnn_fixed_oracle(const RsnnKernelConfig& config);

// Raster, final output and (when recorded) trajectories from the machine.
RsnnTrace read_rsnn_trace(const Machine& machine, const RsnnKernelConfig& config);

// ---------------------------------------------------------------------------
// Experiment input generation and persistence
// ---------------------------------------------------------------------------

// Uniform weights in [-scale, scale], quantized round-to-nearest.
std::vector<int16_t> random_weight_matrix(uint32_t rows, uint32_t cols, QFormat format,
                                          double scale, HostRng& rng);

// Independent Bernoulli(rate) per input per step; indices ascending.
std::vector<std::vector<uint32_t>> random_event_list(uint32_t n_input, uint32_t t_steps,
                                                     double rate, HostRng& rng);

void save_events(const std::string& path, const std::vector<std::vector<uint32_t>>& events);
std::vector<std::vector<uint32_t>> load_events(const std::string& path);

struct Matrix16 {
    uint32_t rows = 0, cols = 0;
    std::vector<int16_t> values;
};

void save_matrix(const std::string& path, const Matrix16& matrix);
Matrix16 load_matrix(const std::string& path);

} // namespace fenn
