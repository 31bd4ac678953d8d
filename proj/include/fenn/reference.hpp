// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fenn/rng.hpp"

namespace fenn {

// Adaptive leaky integrate-and-fire neuron parameters (time constants in
// simulation steps).
struct AlifParams {
    double tau_m = 20.0;   // membrane time constant
    double tau_a = 2000.0; // adaptation time constant
    double v_th = 0.6;     // spike threshold
    double beta = 0.0174;  // adaptation coupling

    double alpha() const { return std::exp(-1.0 / tau_m); }
    double rho() const { return std::exp(-1.0 / tau_a); }
};

// One 32-neuron trajectory: state after each update step, plus the spike
// mask (bit per lane) produced by that step.
struct AlifTrace {
    std::vector<std::array<double, kLanes>> v;
    std::vector<std::array<double, kLanes>> a;
    std::vector<uint32_t> s;
};

// Float64 trajectory of the update
//   S[t]   = 1 when V[t] >= v_th + beta * A[t]   (ties spike)
//   V[t+1] = alpha * V[t] + I[t] - S[t] * v_th
//   A[t+1] = rho * A[t] + S[t]
// from zero initial state; input is [t][lane].
AlifTrace alif_reference(const AlifParams& params,
                         const std::vector<std::array<double, kLanes>>& input);

// Root-mean-square error normalised by the reference range
// (max - min). DegenerateRangeError when the reference is constant;
// OutOfRangeError when the series differ in length or are empty.
double nrmse(const std::vector<double>& reference, const std::vector<double>& test);

// exp(k ln lambda - lambda - ln k!)
double poisson_pmf(int k, double lambda);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double critical = 0.0; // upper quantile of chi^2(dof) at the significance
    bool reject = false;   // statistic > critical
};

// Goodness-of-fit of observed value counts (counts[k] = occurrences of k)
// against Poisson(lambda) with known lambda. Adjacent bins are merged until
// every expected count is at least 5; the open upper tail is one bin.
ChiSquareResult chi_square_gof_poisson(const std::vector<uint64_t>& counts, double lambda,
                                       double significance);

// Goodness-of-fit against the uniform distribution over the bins.
ChiSquareResult chi_square_gof_uniform(const std::vector<uint64_t>& counts,
                                       double significance);

// Deterministic host-side sampler (independent of the machine's lane RNGs)
// for generating experiment inputs.
class HostRng {
public:
    explicit HostRng(uint64_t seed) : m_state(seed) {}

    uint64_t next_u64() { return splitmix64(m_state++); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Poisson(lambda) by multiplication of uniforms; exact for the modest
    // rates used here.
    int next_poisson(double lambda);

private:
    uint64_t m_state;
};

} // namespace fenn
