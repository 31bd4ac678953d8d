// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fenn/core.hpp"
#include "fenn/kernels.hpp"
#include "fenn/reference.hpp"

namespace fenn {

// Flat key=value configuration text ('#' comments, blank lines ignored).
class KeyValueConfig {
public:
    KeyValueConfig() = default;
    static KeyValueConfig from_file(const std::string& path); // IoError
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const { return m_entries.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;   // ConfigError
    int64_t get_int(const std::string& key, int64_t fallback) const;    // ConfigError
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;  // ConfigError
    bool get_bool(const std::string& key, bool fallback) const;         // ConfigError
    const std::map<std::string, std::string>& entries() const { return m_entries; }

private:
    std::map<std::string, std::string> m_entries;
};

// ---------------------------------------------------------------------------
// Rounding-error histograms: random S0.15 products executed on the machine
// under each rounding mode, errors measured in result ulps against the
// float64 product.
// ---------------------------------------------------------------------------

inline constexpr int kRoundingHistBins = 40; // uniform over [-1, 1] ulp

struct RoundingErrorStats {
    RoundingMode mode = RoundingMode::RoundToZero;
    uint64_t n = 0;
    double mean_ulps = 0.0;
    double stddev_ulps = 0.0;
    double standard_error = 0.0;
    double min_ulps = 0.0;
    double max_ulps = 0.0;
    std::array<uint64_t, kRoundingHistBins> histogram{};
};

struct RoundingHistResult {
    uint32_t n_pairs = 0;
    uint64_t seed = 0;
    std::array<RoundingErrorStats, 3> modes; // indexed by RoundingMode value
};

RoundingHistResult run_rounding_hist(uint32_t n_pairs = 21760, uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Poisson generator: machine-made variates, distribution tests, throughput.
// ---------------------------------------------------------------------------

struct PoissonRunResult {
    PoissonKernelConfig config;
    std::vector<int16_t> variates;
    bool matches_oracle = false; // machine output equals the host oracle bit-for-bit
    double sample_mean = 0.0;
    ChiSquareResult chi_square;       // GOF vs Poisson(lambda) at 0.001
    std::vector<uint64_t> histogram;  // histogram[k] = #variates equal to k
    uint64_t region_cycles = 0;       // "generate" region
    uint32_t groups = 0;              // groups of 32 variates produced
    double cycles_per_group = 0.0;
};

PoissonRunResult run_poisson(double lambda = 5.0, uint32_t n_variates = 3200,
                             uint64_t seed = 1);

// ---------------------------------------------------------------------------
// ALIF accuracy comparisons against the float64 reference.
// Pause:     Bernoulli input at a high/low/high rate (500/1000/500 steps),
//            round-to-zero vs stochastic rounding, both saturating.
// Staircase: Poisson-count input escalating over 5 stairs of 100 steps,
//            saturating vs wrapping arithmetic, both stochastic.
// Per repeat, NRMSE of V (and of A) is averaged over the 32 lanes; the
// reference sees the quantized stimulus as real values.
// ---------------------------------------------------------------------------

enum class AlifRegime { Pause, Staircase };
std::string to_string(AlifRegime regime);

struct NrmseSummary {
    std::string label;          // arm name, e.g. "round-to-zero"
    std::vector<double> v, a;   // per-repeat NRMSE, in seed order
    double mean_v = 0.0, sd_v = 0.0;
    double mean_a = 0.0, sd_a = 0.0;
};

struct AlifCompareResult {
    AlifRegime regime = AlifRegime::Pause;
    uint32_t repeats = 0;
    uint64_t seed = 0;
    QFormat state_format{6};
    NrmseSummary baseline; // pause: round-to-zero; staircase: saturating
    NrmseSummary variant;  // pause: stochastic;   staircase: wrapping
    double ratio_v = 0.0;  // variant mean / baseline mean
    double ratio_a = 0.0;
};

AlifCompareResult run_alif_compare(AlifRegime regime, uint32_t repeats = 32,
                                   uint64_t seed = 1);

// ---------------------------------------------------------------------------
// RSNN benchmark: generated topology driven by random input events; checks
// the machine against the fixed-point oracle and collects cycle and
// instruction-mix measurements by region.
// ---------------------------------------------------------------------------

struct RsnnBenchmarkConfig {
    uint32_t n_input = 700;
    uint32_t n_hidden = 256;
    uint32_t n_output = 20;
    uint32_t t_steps = 500;
    double input_rate = 0.004; // per input, per step
    double w_in_scale = 0.15;
    double w_rec_scale = 0.08;
    double w_out_scale = 0.1;
    QFormat state_format{8};
    RoundingMode rmode = RoundingMode::Stochastic;
    bool saturate = true;
    AlifParams params{};
    uint64_t seed = 1;
};

struct RsnnBenchmarkResult {
    RsnnBenchmarkConfig config;
    bool matches_oracle = false; // spike raster and final output, bit-for-bit
    uint64_t total_cycles = 0;
    double cycles_per_step = 0.0;
    Stats spike_stats;  // "spike_processing" region
    Stats update_stats; // "neuron_update" region
    double update_cycles_per_vector = 0.0; // per hidden vector per step
    double spike_mem_alu_ratio = 0.0;      // VectorMemory : VectorAlu retired
    uint64_t total_events = 0;
    uint64_t total_hidden_spikes = 0;
    double hidden_spike_rate = 0.0; // per neuron per step
    std::vector<std::vector<uint32_t>> raster; // [t][mask word]
    std::array<int16_t, kLanes> final_y{};
    std::array<uint64_t, isa::kOpCount> op_counts{};
    Stats total_stats;
};

RsnnBenchmarkResult run_rsnn(const RsnnBenchmarkConfig& config = {});

// ---------------------------------------------------------------------------
// CSV and report output. Identical inputs produce byte-identical files.
// ---------------------------------------------------------------------------

void write_rounding_hist_csv(const std::string& path, const RoundingHistResult& result);
void write_rounding_summary_csv(const std::string& path, const RoundingHistResult& result);
void write_poisson_hist_csv(const std::string& path, const PoissonRunResult& result);
void write_poisson_cycles_csv(const std::string& path, const PoissonRunResult& result);
void write_alif_compare_csv(const std::string& path, const AlifCompareResult& result);
void write_alif_summary_csv(const std::string& path, const AlifCompareResult& result);
void write_rsnn_raster_csv(const std::string& path, const RsnnBenchmarkResult& result);
void write_rsnn_scores_csv(const std::string& path, const RsnnBenchmarkResult& result);
void write_rsnn_summary_csv(const std::string& path, const RsnnBenchmarkResult& result);
void write_instr_mix_csv(const std::string& path, const RsnnBenchmarkResult& result);

struct ReportResult {
    RoundingHistResult rounding;
    PoissonRunResult poisson;
    AlifCompareResult pause;
    AlifCompareResult staircase;
    RsnnBenchmarkResult rsnn;
};

ReportResult run_report(uint64_t seed = 1, uint32_t repeats = 32);
std::string report_text(const ReportResult& report);
void write_report(const std::string& out_dir, const ReportResult& report); // all CSVs + report.txt

} // namespace fenn
