// SPDX-License-Identifier: Apache-2.0
#include "fenn/harness.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fenn/assembler.hpp"
#include "fenn/errors.hpp"

namespace fenn {

namespace {

void appendf(std::string& out, const char* fmt, ...)
{
    char buf[512];
    va_list args;
    va_start(args, fmt);
    vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

void place_seed_vectors(ProgramBuilder& b, uint64_t seed)
{
    const SeedImage seeds = make_seed_image(seed);
    for (int row = 0; row < 2; ++row) {
        std::array<int16_t, kLanes> lanes{};
        for (int l = 0; l < kLanes; ++l) lanes[size_t(l)] = int16_t(seeds[size_t(row)][size_t(l)]);
        b.set_vector(uint32_t(row), lanes);
    }
}

void require_halt(const RunResult& run, const char* what)
{
    if (run.halted) return;
    throw Error(std::string(what) + " did not halt: " + std::string(to_string(run.trap)));
}

double mean_of(const std::vector<double>& xs)
{
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / double(xs.size());
}

double sd_of(const std::vector<double>& xs)
{
    if (xs.size() < 2) return 0.0;
    const double mean = mean_of(xs);
    double sum = 0.0;
    for (double x : xs) sum += (x - mean) * (x - mean);
    return std::sqrt(sum / double(xs.size() - 1));
}

} // namespace

// ---------------------------------------------------------------------------
// KeyValueConfig
// ---------------------------------------------------------------------------

namespace {

std::string trim_copy(std::string s)
{
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

} // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_string(text.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text)
{
    KeyValueConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim_copy(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim_copy(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        config.m_entries[key] = trim_copy(line.substr(eq + 1));
    }
    return config;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
    const auto it = m_entries.find(key);
    return it == m_entries.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    const auto it = m_entries.find(key);
    if (it == m_entries.end()) return fallback;
    char* end = nullptr;
    const double value = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': not a number: " + it->second);
    return value;
}

int64_t KeyValueConfig::get_int(const std::string& key, int64_t fallback) const
{
    const auto it = m_entries.find(key);
    if (it == m_entries.end()) return fallback;
    char* end = nullptr;
    const long long value = std::strtoll(it->second.c_str(), &end, 0);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': not an integer: " + it->second);
    return value;
}

uint64_t KeyValueConfig::get_u64(const std::string& key, uint64_t fallback) const
{
    const auto it = m_entries.find(key);
    if (it == m_entries.end()) return fallback;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(it->second.c_str(), &end, 0);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': not an unsigned integer: " + it->second);
    return value;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const
{
    const auto it = m_entries.find(key);
    if (it == m_entries.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': not a boolean: " + v);
}

// ---------------------------------------------------------------------------
// Rounding-error histograms
// ---------------------------------------------------------------------------

RoundingHistResult run_rounding_hist(uint32_t n_pairs, uint64_t seed)
{
    if (n_pairs == 0) throw ConfigError("n_pairs must be positive");
    const uint32_t n_vectors = (n_pairs + uint32_t(kLanes) - 1) / uint32_t(kLanes);

    // Operands are uniform over [-32767, 32767]: the single excluded raw
    // value -32768 makes (-1)^2 the one product that cannot be represented,
    // and the experiment is defined on the overflow-free domain.
    HostRng host(seed);
    const auto draw = [&host]() -> int16_t {
        for (;;) {
            const int16_t v = int16_t(host.next_u64() & 0xFFFF);
            if (v != INT16_MIN) return v;
        }
    };
    std::vector<int16_t> a(size_t(n_vectors) * kLanes), b(size_t(n_vectors) * kLanes);
    for (auto& x : a) x = draw();
    for (auto& x : b) x = draw();

    RoundingHistResult result;
    result.n_pairs = n_pairs;
    result.seed = seed;
    for (int m = 0; m < 3; ++m) {
        const RoundingMode mode = RoundingMode(m);
        const uint32_t vec_a = 2, vec_b = vec_a + n_vectors, vec_out = vec_b + n_vectors;

        ProgramBuilder builder;
        place_seed_vectors(builder, seed);
        for (uint32_t v = 0; v < n_vectors; ++v) {
            std::array<int16_t, kLanes> lanes_a{}, lanes_b{};
            for (int l = 0; l < kLanes; ++l) {
                lanes_a[size_t(l)] = a[size_t(v) * kLanes + size_t(l)];
                lanes_b[size_t(l)] = b[size_t(v) * kLanes + size_t(l)];
            }
            builder.set_vector(vec_a + v, lanes_a);
            builder.set_vector(vec_b + v, lanes_b);
        }

        constexpr int xA = 1, xB = 2, xOut = 3, xCount = 4;
        builder.li(xA, int32_t(kVmemBase));
        builder.vload_r0(xA, 0);
        builder.vload_r1(xA, 1);
        builder.li(xA, int32_t(kVmemBase + vec_a * kVectorBytes));
        builder.li(xB, int32_t(kVmemBase + vec_b * kVectorBytes));
        builder.li(xOut, int32_t(kVmemBase + vec_out * kVectorBytes));
        builder.li(xCount, int32_t(n_vectors));
        const Label loop = builder.make_label();
        builder.bind(loop);
        builder.vload(1, xA, 0);
        builder.vload(2, xB, 0);
        builder.vmul(3, 1, 2, 15, mode);
        builder.vstore(3, xOut, 0);
        builder.addi(xA, xA, int32_t(kVectorBytes));
        builder.addi(xB, xB, int32_t(kVectorBytes));
        builder.addi(xOut, xOut, int32_t(kVectorBytes));
        builder.addi(xCount, xCount, -1);
        builder.bne(xCount, 0, loop);
        builder.ecall();

        Machine machine;
        machine.load(builder.finalize());
        require_halt(machine.run(), "rounding-hist program");

        RoundingErrorStats& stats = result.modes[size_t(m)];
        stats.mode = mode;
        stats.n = n_pairs;
        stats.min_ulps = 2.0;
        stats.max_ulps = -2.0;
        double sum = 0.0, sum_sq = 0.0;
        uint64_t index = 0;
        for (uint32_t v = 0; v < n_vectors && index < n_pairs; ++v) {
            const auto out = machine.read_vector(kVmemBase + (vec_out + v) * kVectorBytes);
            for (int l = 0; l < kLanes && index < n_pairs; ++l, ++index) {
                const double exact =
                    double(int32_t(a[index]) * int32_t(b[index])) / 32768.0;
                const double err = double(out[size_t(l)]) - exact;
                sum += err;
                sum_sq += err * err;
                stats.min_ulps = std::min(stats.min_ulps, err);
                stats.max_ulps = std::max(stats.max_ulps, err);
                const int bin = std::clamp(
                    int(std::floor((err + 1.0) * (kRoundingHistBins / 2.0))), 0,
                    kRoundingHistBins - 1);
                stats.histogram[size_t(bin)]++;
            }
        }
        const double n = double(n_pairs);
        stats.mean_ulps = sum / n;
        const double variance =
            n > 1.0 ? std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)) : 0.0;
        stats.stddev_ulps = std::sqrt(variance);
        stats.standard_error = stats.stddev_ulps / std::sqrt(n);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Poisson
// ---------------------------------------------------------------------------

PoissonRunResult run_poisson(double lambda, uint32_t n_variates, uint64_t seed)
{
    PoissonRunResult result;
    result.config.lambda = lambda;
    result.config.n_variates = n_variates;
    result.config.seed = seed;

    const Program program = build_poisson(result.config);
    Machine machine;
    machine.load(program);
    require_halt(machine.run(), "poisson program");

    result.variates = read_poisson_variates(machine, n_variates);
    result.matches_oracle =
        poisson_fixed_oracle(result.config).variates == result.variates;

    double sum = 0.0;
    int16_t max_value = 0;
    for (int16_t v : result.variates) {
        sum += double(v);
        max_value = std::max(max_value, v);
    }
    result.sample_mean = sum / double(n_variates);
    result.histogram.assign(size_t(max_value) + 1, 0);
    for (int16_t v : result.variates) result.histogram[size_t(v)]++;
    result.chi_square = chi_square_gof_poisson(result.histogram, lambda, 0.001);

    const auto regions = machine.region_stats();
    const auto it = regions.find(kPoissonRegion);
    if (it != regions.end()) result.region_cycles = it->second.cycles;
    const uint32_t groups = n_variates / uint32_t(kLanes);
    result.groups =
        (groups + kPoissonGroupsPerPass - 1) / kPoissonGroupsPerPass * kPoissonGroupsPerPass;
    result.cycles_per_group = double(result.region_cycles) / double(result.groups);
    return result;
}

// ---------------------------------------------------------------------------
// ALIF comparisons
// ---------------------------------------------------------------------------

std::string to_string(AlifRegime regime)
{
    return regime == AlifRegime::Pause ? "pause" : "staircase";
}

namespace {

// 500 steps of dense Bernoulli input, 1000 sparse, 500 dense again.
std::vector<std::array<int16_t, kLanes>> pause_stimulus(QFormat fmt, uint64_t seed)
{
    constexpr uint32_t kDense = 500, kSparse = 1000;
    constexpr double kDenseRate = 0.35, kSparseRate = 0.02, kWeight = 0.25;
    HostRng rng(seed);
    const int16_t w = quantize(kWeight, fmt).raw;
    std::vector<std::array<int16_t, kLanes>> input(2 * kDense + kSparse);
    for (size_t t = 0; t < input.size(); ++t) {
        const bool dense = t < kDense || t >= kDense + kSparse;
        const double rate = dense ? kDenseRate : kSparseRate;
        for (int l = 0; l < kLanes; ++l)
            input[t][size_t(l)] = rng.next_double() < rate ? w : 0;
    }
    return input;
}

// Five 100-step stairs of Poisson-count input; the last stair drives the
// membrane past the representable range of the state format.
std::vector<std::array<int16_t, kLanes>> staircase_stimulus(QFormat fmt, uint64_t seed)
{
    constexpr uint32_t kStairSteps = 100;
    constexpr double kStairs[5] = {4.0, 8.0, 16.0, 32.0, 64.0};
    constexpr double kWeight = 0.5;
    HostRng rng(seed);
    std::vector<std::array<int16_t, kLanes>> input(5 * kStairSteps);
    for (size_t t = 0; t < input.size(); ++t) {
        const double lambda = kStairs[t / kStairSteps];
        for (int l = 0; l < kLanes; ++l) {
            const int k = rng.next_poisson(lambda);
            input[t][size_t(l)] = quantize(kWeight * double(k), fmt).raw;
        }
    }
    return input;
}

struct ArmNrmse {
    double v = 0.0, a = 0.0;
};

ArmNrmse run_alif_arm(const AlifKernelConfig& kc, const AlifTrace& ref)
{
    const Program program = build_alif(kc);
    Machine machine;
    machine.load(program);
    require_halt(machine.run(), "alif program");
    const uint32_t t_steps = uint32_t(kc.input.size());
    const AlifFixedTrace fx = read_alif_trace(machine, t_steps);
    const double ulp = kc.state_format.ulp();

    ArmNrmse out;
    std::vector<double> ref_series(t_steps), test_series(t_steps);
    for (int l = 0; l < kLanes; ++l) {
        for (uint32_t t = 0; t < t_steps; ++t) {
            ref_series[t] = ref.v[t][size_t(l)];
            test_series[t] = double(fx.v[t][size_t(l)]) * ulp;
        }
        out.v += nrmse(ref_series, test_series);
        for (uint32_t t = 0; t < t_steps; ++t) {
            ref_series[t] = ref.a[t][size_t(l)];
            test_series[t] = double(fx.a[t][size_t(l)]) * ulp;
        }
        out.a += nrmse(ref_series, test_series);
    }
    out.v /= double(kLanes);
    out.a /= double(kLanes);
    return out;
}

} // namespace

AlifCompareResult run_alif_compare(AlifRegime regime, uint32_t repeats, uint64_t seed)
{
    if (repeats == 0) throw ConfigError("repeats must be positive");
    AlifCompareResult result;
    result.regime = regime;
    result.repeats = repeats;
    result.seed = seed;
    // The pause regime probes rounding at a resolution where the slow
    // adaptation decay is representable; the staircase regime is calibrated
    // so its final stair exceeds the format's range.
    result.state_format = regime == AlifRegime::Pause ? QFormat{8} : QFormat{6};

    struct Arm {
        std::string label;
        RoundingMode rmode;
        bool saturate;
    };
    const Arm baseline = regime == AlifRegime::Pause
                             ? Arm{"round-to-zero", RoundingMode::RoundToZero, true}
                             : Arm{"saturate", RoundingMode::Stochastic, true};
    const Arm variant = regime == AlifRegime::Pause
                            ? Arm{"stochastic", RoundingMode::Stochastic, true}
                            : Arm{"wrap", RoundingMode::Stochastic, false};
    result.baseline.label = baseline.label;
    result.variant.label = variant.label;

    // Strong adaptation keeps A at a few units, where round-to-zero decay
    // underflows it prematurely during the pause while stochastic rounding
    // preserves its expectation (the staircase stresses range, not decay).
    AlifParams params{};
    if (regime == AlifRegime::Pause) params.beta = 0.5;
    for (uint32_t i = 0; i < repeats; ++i) {
        const uint64_t run_seed = seed + i;
        const auto input = regime == AlifRegime::Pause
                               ? pause_stimulus(result.state_format, run_seed)
                               : staircase_stimulus(result.state_format, run_seed);

        // The float64 reference integrates the quantized stimulus values.
        std::vector<std::array<double, kLanes>> real_input(input.size());
        const double ulp = result.state_format.ulp();
        for (size_t t = 0; t < input.size(); ++t)
            for (int l = 0; l < kLanes; ++l)
                real_input[t][size_t(l)] = double(input[t][size_t(l)]) * ulp;
        const AlifTrace ref = alif_reference(params, real_input);

        for (const Arm* arm : {&baseline, &variant}) {
            AlifKernelConfig kc;
            kc.params = params;
            kc.state_format = result.state_format;
            kc.rmode = arm->rmode;
            kc.saturate = arm->saturate;
            kc.input = input;
            kc.seed = run_seed;
            const ArmNrmse n = run_alif_arm(kc, ref);
            NrmseSummary& summary = arm == &baseline ? result.baseline : result.variant;
            summary.v.push_back(n.v);
            summary.a.push_back(n.a);
        }
    }

    for (NrmseSummary* s : {&result.baseline, &result.variant}) {
        s->mean_v = mean_of(s->v);
        s->sd_v = sd_of(s->v);
        s->mean_a = mean_of(s->a);
        s->sd_a = sd_of(s->a);
    }
    result.ratio_v = result.baseline.mean_v > 0.0
                         ? result.variant.mean_v / result.baseline.mean_v
                         : 0.0;
    result.ratio_a = result.baseline.mean_a > 0.0
                         ? result.variant.mean_a / result.baseline.mean_a
                         : 0.0;
    return result;
}

// ---------------------------------------------------------------------------
// RSNN benchmark
// ---------------------------------------------------------------------------

RsnnBenchmarkResult run_rsnn(const RsnnBenchmarkConfig& config)
{
    RsnnBenchmarkResult result;
    result.config = config;

    HostRng host(config.seed);
    RsnnKernelConfig kc;
    kc.n_input = config.n_input;
    kc.n_hidden = config.n_hidden;
    kc.n_output = config.n_output;
    kc.params = config.params;
    kc.state_format = config.state_format;
    kc.rmode = config.rmode;
    kc.saturate = config.saturate;
    kc.record_trajectory = false;
    kc.w_in = random_weight_matrix(config.n_input, config.n_hidden, config.state_format,
                                   config.w_in_scale, host);
    kc.w_rec = random_weight_matrix(config.n_hidden, config.n_hidden, config.state_format,
                                    config.w_rec_scale, host);
    kc.w_out = random_weight_matrix(config.n_hidden, config.n_output, config.state_format,
                                    config.w_out_scale, host);
    kc.events = random_event_list(config.n_input, config.t_steps, config.input_rate, host);
    kc.seed = config.seed;

    const Program program = build_rsnn(kc);
    Machine machine;
    machine.load(program);
    const RunResult run = machine.run();
    require_halt(run, "rsnn program");

    const RsnnTrace trace = read_rsnn_trace(machine, kc);
    const RsnnTrace oracle = rsnn_fixed_oracle(kc);
    result.matches_oracle = trace.s == oracle.s && trace.final_y == oracle.final_y;
    result.raster = trace.s;
    result.final_y = trace.final_y;

    result.total_cycles = run.cycles;
    result.cycles_per_step = double(run.cycles) / double(config.t_steps);
    const auto regions = machine.region_stats();
    if (const auto it = regions.find(kRsnnSpikeRegion); it != regions.end())
        result.spike_stats = it->second;
    if (const auto it = regions.find(kRsnnUpdateRegion); it != regions.end())
        result.update_stats = it->second;
    const uint32_t h = config.n_hidden / uint32_t(kLanes);
    result.update_cycles_per_vector =
        double(result.update_stats.cycles) / double(uint64_t(config.t_steps) * h);
    const uint64_t mem = result.spike_stats.retired[size_t(isa::OpClass::VectorMemory)];
    const uint64_t alu = result.spike_stats.retired[size_t(isa::OpClass::VectorAlu)];
    result.spike_mem_alu_ratio = alu != 0 ? double(mem) / double(alu) : 0.0;

    for (const auto& step : kc.events) result.total_events += step.size();
    for (const auto& masks : result.raster)
        for (uint32_t word : masks) result.total_hidden_spikes += uint64_t(std::popcount(word));
    result.hidden_spike_rate = double(result.total_hidden_spikes)
                               / (double(config.n_hidden) * double(config.t_steps));
    result.op_counts = machine.op_counts();
    result.total_stats = machine.total_stats();
    return result;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

void write_rounding_hist_csv(const std::string& path, const RoundingHistResult& result)
{
    std::string out = "mode,bin_low_ulp,bin_high_ulp,count\n";
    for (const auto& stats : result.modes)
        for (int i = 0; i < kRoundingHistBins; ++i) {
            const double lo = -1.0 + 2.0 * i / kRoundingHistBins;
            const double hi = -1.0 + 2.0 * (i + 1) / kRoundingHistBins;
            appendf(out, "%s,%.9g,%.9g,%llu\n", to_string(stats.mode), lo, hi,
                    (unsigned long long)stats.histogram[size_t(i)]);
        }
    write_text(path, out);
}

void write_rounding_summary_csv(const std::string& path, const RoundingHistResult& result)
{
    std::string out = "mode,n,mean_ulp,sd_ulp,se_ulp,min_ulp,max_ulp\n";
    for (const auto& stats : result.modes)
        appendf(out, "%s,%llu,%.9g,%.9g,%.9g,%.9g,%.9g\n", to_string(stats.mode),
                (unsigned long long)stats.n, stats.mean_ulps, stats.stddev_ulps,
                stats.standard_error, stats.min_ulps, stats.max_ulps);
    write_text(path, out);
}

void write_poisson_hist_csv(const std::string& path, const PoissonRunResult& result)
{
    std::string out = "value,count,expected_count\n";
    for (size_t k = 0; k < result.histogram.size(); ++k)
        appendf(out, "%zu,%llu,%.9g\n", k, (unsigned long long)result.histogram[k],
                double(result.config.n_variates) * poisson_pmf(int(k), result.config.lambda));
    write_text(path, out);
}

void write_poisson_cycles_csv(const std::string& path, const PoissonRunResult& result)
{
    std::string out =
        "lambda,n_variates,groups_of_32,region_cycles,cycles_per_32_variates,"
        "sample_mean,chi2_statistic,chi2_dof,chi2_critical_p001,matches_oracle\n";
    appendf(out, "%.9g,%u,%u,%llu,%.9g,%.9g,%.9g,%d,%.9g,%d\n", result.config.lambda,
            result.config.n_variates, result.groups,
            (unsigned long long)result.region_cycles, result.cycles_per_group,
            result.sample_mean, result.chi_square.statistic, result.chi_square.dof,
            result.chi_square.critical, result.matches_oracle ? 1 : 0);
    write_text(path, out);
}

void write_alif_compare_csv(const std::string& path, const AlifCompareResult& result)
{
    std::string out = "regime,repeat,seed,arm,nrmse_v,nrmse_a\n";
    for (uint32_t i = 0; i < result.repeats; ++i)
        for (const NrmseSummary* s : {&result.baseline, &result.variant})
            appendf(out, "%s,%u,%llu,%s,%.9g,%.9g\n", to_string(result.regime).c_str(), i,
                    (unsigned long long)(result.seed + i), s->label.c_str(), s->v[i],
                    s->a[i]);
    write_text(path, out);
}

void write_alif_summary_csv(const std::string& path, const AlifCompareResult& result)
{
    std::string out =
        "regime,arm,nrmse_v_mean,nrmse_v_sd,nrmse_a_mean,nrmse_a_sd,"
        "ratio_v_variant_over_baseline,ratio_a_variant_over_baseline\n";
    for (const NrmseSummary* s : {&result.baseline, &result.variant})
        appendf(out, "%s,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                to_string(result.regime).c_str(), s->label.c_str(), s->mean_v, s->sd_v,
                s->mean_a, s->sd_a, result.ratio_v, result.ratio_a);
    write_text(path, out);
}

void write_rsnn_raster_csv(const std::string& path, const RsnnBenchmarkResult& result)
{
    std::string out = "step,neuron\n";
    for (size_t t = 0; t < result.raster.size(); ++t)
        for (size_t w = 0; w < result.raster[t].size(); ++w) {
            uint32_t mask = result.raster[t][w];
            for (int bit = 0; mask != 0; ++bit, mask >>= 1)
                if (mask & 1)
                    appendf(out, "%zu,%zu\n", t, w * kLanes + size_t(bit));
        }
    write_text(path, out);
}

void write_rsnn_scores_csv(const std::string& path, const RsnnBenchmarkResult& result)
{
    std::string out = "output_index,score\n";
    const double ulp = result.config.state_format.ulp();
    for (uint32_t i = 0; i < result.config.n_output; ++i)
        appendf(out, "%u,%.9g\n", i, double(result.final_y[size_t(i)]) * ulp);
    write_text(path, out);
}

void write_rsnn_summary_csv(const std::string& path, const RsnnBenchmarkResult& result)
{
    std::string out = "key,value\n";
    appendf(out, "n_input,%u\n", result.config.n_input);
    appendf(out, "n_hidden,%u\n", result.config.n_hidden);
    appendf(out, "n_output,%u\n", result.config.n_output);
    appendf(out, "t_steps,%u\n", result.config.t_steps);
    appendf(out, "seed,%llu\n", (unsigned long long)result.config.seed);
    appendf(out, "matches_oracle,%d\n", result.matches_oracle ? 1 : 0);
    appendf(out, "total_cycles,%llu\n", (unsigned long long)result.total_cycles);
    appendf(out, "cycles_per_timestep,%.9g\n", result.cycles_per_step);
    appendf(out, "neuron_update_cycles_per_vector,%.9g\n", result.update_cycles_per_vector);
    appendf(out, "spike_vector_memory_retired,%llu\n",
            (unsigned long long)result.spike_stats.retired[size_t(isa::OpClass::VectorMemory)]);
    appendf(out, "spike_vector_alu_retired,%llu\n",
            (unsigned long long)result.spike_stats.retired[size_t(isa::OpClass::VectorAlu)]);
    appendf(out, "spike_mem_alu_ratio,%.9g\n", result.spike_mem_alu_ratio);
    appendf(out, "total_input_events,%llu\n", (unsigned long long)result.total_events);
    appendf(out, "total_hidden_spikes,%llu\n", (unsigned long long)result.total_hidden_spikes);
    appendf(out, "hidden_spike_rate_per_neuron_per_step,%.9g\n", result.hidden_spike_rate);
    write_text(path, out);
}

void write_instr_mix_csv(const std::string& path, const RsnnBenchmarkResult& result)
{
    std::string out = "class,retired_total,retired_spike_processing,retired_neuron_update\n";
    for (int c = 0; c < isa::kOpClassCount; ++c)
        appendf(out, "%s,%llu,%llu,%llu\n", to_string(isa::OpClass(c)),
                (unsigned long long)result.total_stats.retired[size_t(c)],
                (unsigned long long)result.spike_stats.retired[size_t(c)],
                (unsigned long long)result.update_stats.retired[size_t(c)]);
    write_text(path, out);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

ReportResult run_report(uint64_t seed, uint32_t repeats)
{
    ReportResult report;
    report.rounding = run_rounding_hist(21760, seed);
    report.poisson = run_poisson(5.0, 3200, seed);
    report.pause = run_alif_compare(AlifRegime::Pause, repeats, seed);
    report.staircase = run_alif_compare(AlifRegime::Staircase, repeats, seed);
    RsnnBenchmarkConfig rsnn;
    rsnn.seed = seed;
    report.rsnn = run_rsnn(rsnn);
    return report;
}

std::string report_text(const ReportResult& report)
{
    std::string out;
    appendf(out, "FeNN simulator experiment report\n");
    appendf(out, "================================\n\n");

    appendf(out, "[rounding-hist] %u random S0.15 products per mode (seed %llu)\n",
            report.rounding.n_pairs, (unsigned long long)report.rounding.seed);
    for (const auto& stats : report.rounding.modes)
        appendf(out, "  %-17s mean %+.6f ulp, sd %.6f, range [%+.6f, %+.6f]\n",
                to_string(stats.mode), stats.mean_ulps, stats.stddev_ulps, stats.min_ulps,
                stats.max_ulps);
    const auto& sr = report.rounding.modes[size_t(RoundingMode::Stochastic)];
    appendf(out, "  stochastic |mean| = %.6f vs 3 standard errors = %.6f\n\n",
            std::fabs(sr.mean_ulps), 3.0 * sr.standard_error);

    const auto& p = report.poisson;
    appendf(out, "[poisson] lambda %.3g, %u variates (seed %llu)\n", p.config.lambda,
            p.config.n_variates, (unsigned long long)p.config.seed);
    appendf(out, "  matches host oracle: %s\n", p.matches_oracle ? "yes" : "no");
    appendf(out, "  sample mean %.4f (target 5 +/- 0.118)\n", p.sample_mean);
    appendf(out, "  chi-square %.3f vs critical %.3f at p=0.001 (dof %d): %s\n",
            p.chi_square.statistic, p.chi_square.critical, p.chi_square.dof,
            p.chi_square.reject ? "REJECT" : "fit");
    appendf(out, "  cycles per 32 variates: %.2f\n\n", p.cycles_per_group);

    const auto alif_block = [&out](const AlifCompareResult& r) {
        appendf(out, "[alif %s] %u repeats (seed %llu)\n", to_string(r.regime).c_str(),
                r.repeats, (unsigned long long)r.seed);
        for (const NrmseSummary* s : {&r.baseline, &r.variant})
            appendf(out, "  %-14s NRMSE(V) %.4f +/- %.4f, NRMSE(A) %.4f +/- %.4f\n",
                    s->label.c_str(), s->mean_v, s->sd_v, s->mean_a, s->sd_a);
        appendf(out, "  ratio variant/baseline: V %.3f, A %.3f\n\n", r.ratio_v, r.ratio_a);
    };
    alif_block(report.pause);
    alif_block(report.staircase);

    const auto& r = report.rsnn;
    appendf(out, "[rsnn] %u-%u-%u network, %u steps (seed %llu)\n", r.config.n_input,
            r.config.n_hidden, r.config.n_output, r.config.t_steps,
            (unsigned long long)r.config.seed);
    appendf(out, "  matches host oracle: %s\n", r.matches_oracle ? "yes" : "no");
    appendf(out, "  cycles per timestep: %.1f (total %llu)\n", r.cycles_per_step,
            (unsigned long long)r.total_cycles);
    appendf(out, "  neuron-update cycles per vector: %.2f\n", r.update_cycles_per_vector);
    appendf(out, "  spike-processing memory:ALU ratio: %.2f\n", r.spike_mem_alu_ratio);
    appendf(out, "  input events %llu, hidden spikes %llu (rate %.4f)\n",
            (unsigned long long)r.total_events, (unsigned long long)r.total_hidden_spikes,
            r.hidden_spike_rate);
    return out;
}

void write_report(const std::string& out_dir, const ReportResult& report)
{
    std::filesystem::create_directories(out_dir);
    const auto path = [&out_dir](const char* name) { return out_dir + "/" + name; };
    write_rounding_hist_csv(path("rounding_hist.csv"), report.rounding);
    write_rounding_summary_csv(path("rounding_summary.csv"), report.rounding);
    write_poisson_hist_csv(path("poisson_hist.csv"), report.poisson);
    write_poisson_cycles_csv(path("poisson_cycles.csv"), report.poisson);
    write_alif_compare_csv(path("alif_pause.csv"), report.pause);
    write_alif_summary_csv(path("alif_pause_summary.csv"), report.pause);
    write_alif_compare_csv(path("alif_staircase.csv"), report.staircase);
    write_alif_summary_csv(path("alif_staircase_summary.csv"), report.staircase);
    write_rsnn_raster_csv(path("rsnn_raster.csv"), report.rsnn);
    write_rsnn_scores_csv(path("rsnn_scores.csv"), report.rsnn);
    write_rsnn_summary_csv(path("rsnn_summary.csv"), report.rsnn);
    write_instr_mix_csv(path("rsnn_instr_mix.csv"), report.rsnn);
    write_text(path("report.txt"), report_text(report));
}

} // namespace fenn
