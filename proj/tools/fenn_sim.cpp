// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "fenn/harness.hpp"

namespace {

struct CommonArgs {
    uint64_t seed = 1;
    uint32_t repeats = 32;
    std::string out_dir = "out";
    std::string config_path;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* repeats_opt = nullptr;
    fenn::KeyValueConfig config;

    void attach(CLI::App* cmd)
    {
        seed_opt = cmd->add_option("--seed", seed, "random seed (default 1)");
        repeats_opt = cmd->add_option("--repeats", repeats, "stochastic repeats (default 32)");
        cmd->add_option("--out", out_dir, "output directory (default ./out)");
        cmd->add_option("--config", config_path, "key=value config file");
    }

    // Explicit flags win over config-file values, which win over defaults.
    void finish()
    {
        if (!config_path.empty()) config = fenn::KeyValueConfig::from_file(config_path);
        if (!seed_opt->count()) seed = config.get_u64("seed", seed);
        if (!repeats_opt->count()) repeats = uint32_t(config.get_u64("repeats", repeats));
        std::filesystem::create_directories(out_dir);
    }

    std::string path(const char* name) const { return out_dir + "/" + name; }
};

fenn::RoundingMode parse_rounding(const std::string& name)
{
    if (name == "rtz" || name == "round-to-zero") return fenn::RoundingMode::RoundToZero;
    if (name == "rtn" || name == "round-to-nearest") return fenn::RoundingMode::RoundToNearest;
    if (name == "sr" || name == "stochastic") return fenn::RoundingMode::Stochastic;
    throw fenn::ConfigError("unknown rounding mode: " + name);
}

fenn::RsnnBenchmarkConfig rsnn_config_from(const CommonArgs& args)
{
    const fenn::KeyValueConfig& kv = args.config;
    fenn::RsnnBenchmarkConfig c;
    c.seed = args.seed;
    c.n_input = uint32_t(kv.get_u64("n_input", c.n_input));
    c.n_hidden = uint32_t(kv.get_u64("n_hidden", c.n_hidden));
    c.n_output = uint32_t(kv.get_u64("n_output", c.n_output));
    c.t_steps = uint32_t(kv.get_u64("t_steps", c.t_steps));
    c.input_rate = kv.get_double("input_rate", c.input_rate);
    c.w_in_scale = kv.get_double("w_in_scale", c.w_in_scale);
    c.w_rec_scale = kv.get_double("w_rec_scale", c.w_rec_scale);
    c.w_out_scale = kv.get_double("w_out_scale", c.w_out_scale);
    c.state_format = fenn::qformat(int(kv.get_int("state_frac_bits", c.state_format.frac_bits)));
    c.rmode = parse_rounding(kv.get_string("rounding", "stochastic"));
    c.saturate = kv.get_bool("saturate", c.saturate);
    return c;
}

void print_rsnn_headline(const fenn::RsnnBenchmarkResult& r)
{
    std::printf("rsnn %u-%u-%u, %u steps: %s oracle, %.1f cycles/step, "
                "update %.2f cycles/vector, spike mem:alu %.2f, spike rate %.4f\n",
                r.config.n_input, r.config.n_hidden, r.config.n_output, r.config.t_steps,
                r.matches_oracle ? "matches" : "DIVERGES FROM", r.cycles_per_step,
                r.update_cycles_per_vector, r.spike_mem_alu_ratio, r.hidden_spike_rate);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"FeNN soft vector processor: simulator experiment harness"};
    app.require_subcommand(1);

    CommonArgs rounding_args, poisson_args, alif_args, rsnn_args, mix_args, report_args;

    CLI::App* rounding = app.add_subcommand(
        "rounding-hist", "error histograms of machine multiplies per rounding mode");
    rounding_args.attach(rounding);

    CLI::App* poisson = app.add_subcommand(
        "poisson", "machine-generated Poisson variates: distribution and throughput");
    poisson_args.attach(poisson);

    CLI::App* alif = app.add_subcommand(
        "alif-compare", "adaptive-LIF NRMSE against the float64 reference");
    alif_args.attach(alif);
    std::string regime_name = "pause";
    CLI::Option* regime_opt =
        alif->add_option("--regime", regime_name, "pause or staircase")
            ->check(CLI::IsMember({"pause", "staircase"}));

    CLI::App* rsnn = app.add_subcommand("rsnn", "recurrent spiking-network benchmark");
    rsnn_args.attach(rsnn);

    CLI::App* mix = app.add_subcommand(
        "instr-mix", "per-region instruction mix of the recurrent-network benchmark");
    mix_args.attach(mix);

    CLI::App* report = app.add_subcommand(
        "report", "run every experiment and write the full CSV bundle");
    report_args.attach(report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (rounding->parsed()) {
            rounding_args.finish();
            const uint32_t n_pairs =
                uint32_t(rounding_args.config.get_u64("n_pairs", 21760));
            const fenn::RoundingHistResult result =
                fenn::run_rounding_hist(n_pairs, rounding_args.seed);
            fenn::write_rounding_hist_csv(rounding_args.path("rounding_hist.csv"), result);
            fenn::write_rounding_summary_csv(rounding_args.path("rounding_summary.csv"),
                                             result);
            for (const auto& stats : result.modes)
                std::printf("%-17s mean %+.6f ulp, sd %.6f, range [%+.6f, %+.6f]\n",
                            to_string(stats.mode), stats.mean_ulps, stats.stddev_ulps,
                            stats.min_ulps, stats.max_ulps);
        }
        else if (poisson->parsed()) {
            poisson_args.finish();
            const double lambda = poisson_args.config.get_double("lambda", 5.0);
            const uint32_t n =
                uint32_t(poisson_args.config.get_u64("n_variates", 3200));
            const fenn::PoissonRunResult result =
                fenn::run_poisson(lambda, n, poisson_args.seed);
            fenn::write_poisson_hist_csv(poisson_args.path("poisson_hist.csv"), result);
            fenn::write_poisson_cycles_csv(poisson_args.path("poisson_cycles.csv"), result);
            std::printf("poisson lambda %.3g, %u variates: %s oracle, mean %.4f, "
                        "chi2 %.3f vs %.3f, %.2f cycles per 32 variates\n",
                        lambda, n, result.matches_oracle ? "matches" : "DIVERGES FROM",
                        result.sample_mean, result.chi_square.statistic,
                        result.chi_square.critical, result.cycles_per_group);
        }
        else if (alif->parsed()) {
            alif_args.finish();
            if (!regime_opt->count())
                regime_name = alif_args.config.get_string("regime", regime_name);
            fenn::AlifRegime regime;
            if (regime_name == "pause") regime = fenn::AlifRegime::Pause;
            else if (regime_name == "staircase") regime = fenn::AlifRegime::Staircase;
            else throw fenn::ConfigError("unknown regime: " + regime_name);
            const fenn::AlifCompareResult result =
                fenn::run_alif_compare(regime, alif_args.repeats, alif_args.seed);
            const std::string stem = "alif_" + regime_name;
            fenn::write_alif_compare_csv(alif_args.path((stem + ".csv").c_str()), result);
            fenn::write_alif_summary_csv(alif_args.path((stem + "_summary.csv").c_str()),
                                         result);
            for (const fenn::NrmseSummary* s : {&result.baseline, &result.variant})
                std::printf("%s %-14s NRMSE(V) %.4f +/- %.4f, NRMSE(A) %.4f +/- %.4f\n",
                            regime_name.c_str(), s->label.c_str(), s->mean_v, s->sd_v,
                            s->mean_a, s->sd_a);
            std::printf("%s ratio variant/baseline: V %.3f, A %.3f\n", regime_name.c_str(),
                        result.ratio_v, result.ratio_a);
        }
        else if (rsnn->parsed()) {
            rsnn_args.finish();
            const fenn::RsnnBenchmarkResult result =
                fenn::run_rsnn(rsnn_config_from(rsnn_args));
            fenn::write_rsnn_raster_csv(rsnn_args.path("rsnn_raster.csv"), result);
            fenn::write_rsnn_scores_csv(rsnn_args.path("rsnn_scores.csv"), result);
            fenn::write_rsnn_summary_csv(rsnn_args.path("rsnn_summary.csv"), result);
            fenn::write_instr_mix_csv(rsnn_args.path("rsnn_instr_mix.csv"), result);
            print_rsnn_headline(result);
            if (!result.matches_oracle) return 1;
        }
        else if (mix->parsed()) {
            mix_args.finish();
            const fenn::RsnnBenchmarkResult result =
                fenn::run_rsnn(rsnn_config_from(mix_args));
            fenn::write_instr_mix_csv(mix_args.path("rsnn_instr_mix.csv"), result);
            std::printf("%-22s %12s %18s %14s\n", "class", "total", "spike_processing",
                        "neuron_update");
            for (int c = 0; c < fenn::isa::kOpClassCount; ++c)
                std::printf("%-22s %12llu %18llu %14llu\n",
                            to_string(fenn::isa::OpClass(c)),
                            (unsigned long long)result.total_stats.retired[size_t(c)],
                            (unsigned long long)result.spike_stats.retired[size_t(c)],
                            (unsigned long long)result.update_stats.retired[size_t(c)]);
            if (!result.matches_oracle) return 1;
        }
        else if (report->parsed()) {
            report_args.finish();
            const fenn::ReportResult result =
                fenn::run_report(report_args.seed, report_args.repeats);
            fenn::write_report(report_args.out_dir, result);
            std::fputs(fenn::report_text(result).c_str(), stdout);
        }
    }
    catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
