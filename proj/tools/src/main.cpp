#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epr/errors.hpp"
#include "eprcli/commands.hpp"

namespace {

using eprcli::RunMode;
using eprcli::RunReport;

const std::map<std::string, epr::NoiseKind> kNoiseNames = {
    {"colored", epr::NoiseKind::colored},
    {"white", epr::NoiseKind::white},
};

const std::map<std::string, RunMode> kModeNames = {
    {"analytic", RunMode::analytic},
    {"simulate", RunMode::simulate},
};

const std::map<std::string, epr::LadderObjective> kObjectiveNames = {
    {"pk", epr::LadderObjective::pk},
    {"margin", epr::LadderObjective::margin},
};

std::vector<double> expand_range(const std::vector<double>& range) {
    // lo hi n
    const int n = static_cast<int>(range[2]);
    if (n < 1) {
        throw epr::InvalidInput("angle range: the point count must be >= 1");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        values.push_back(n == 1 ? range[0]
                                : range[0] + (range[1] - range[0]) * i / (n - 1));
    }
    return values;
}

std::optional<std::array<double, 4>> as_settings(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return std::array<double, 4>{v[0], v[1], v[2], v[3]};
}

void emit(const RunReport& report, bool json) {
    if (json) {
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        report.print_text(std::cout);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and analyzer for two-photon polarization-entanglement "
                 "nonlocality tests (ladder and CHSH)"};
    app.set_version_flag("--version", std::string("eprsim ") + EPRSIM_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--json", json, "emit machine-readable JSON on stdout");

    // predict
    eprcli::PredictArgs predict_args;
    std::vector<double> a_range, b_range;
    std::string predict_out;
    auto* predict = app.add_subcommand(
        "predict", "Joint detection probabilities over analyzer-angle grids");
    predict->add_option("--gamma", predict_args.state.gamma, "entanglement degree alpha/beta")
        ->capture_default_str();
    predict->add_option("--phi-deg", predict_args.state.phi_deg, "relative phase (degrees)")
        ->capture_default_str();
    predict->add_option("--visibility", predict_args.state.visibility, "coherence factor V")
        ->capture_default_str();
    predict->add_option("--noise", predict_args.state.noise, "noise kind")
        ->transform(CLI::CheckedTransformer(kNoiseNames))
        ->capture_default_str();
    auto* ta = predict->add_option("--theta-a", predict_args.theta_a_deg,
                                   "site-A analyzer angles (degrees)");
    auto* tb = predict->add_option("--theta-b", predict_args.theta_b_deg,
                                   "site-B analyzer angles (degrees)");
    auto* ra = predict->add_option("--a-range", a_range,
                                   "site-A angle range: lo hi n (degrees)")
                   ->expected(3);
    auto* rb = predict->add_option("--b-range", b_range,
                                   "site-B angle range: lo hi n (degrees)")
                   ->expected(3);
    ta->excludes(ra);
    tb->excludes(rb);
    predict->add_option("--out", predict_out, "write the probability table as CSV");

    // ladder
    eprcli::LadderArgs ladder_args;
    std::string ladder_out;
    auto* ladder = app.add_subcommand(
        "ladder", "Evaluate or simulate the K-step ladder nonlocality test");
    ladder->add_option("--k", ladder_args.k, "ladder height K")->capture_default_str();
    ladder->add_option("--gamma", ladder_args.gamma,
                       "entanglement degree; omitted: the optimizer's gamma*");
    ladder->add_option("--phi-deg", ladder_args.phi_deg, "relative phase (degrees)")
        ->capture_default_str();
    ladder->add_option("--visibility", ladder_args.visibility, "coherence factor V")
        ->capture_default_str();
    ladder->add_option("--noise", ladder_args.noise, "noise kind")
        ->transform(CLI::CheckedTransformer(kNoiseNames))
        ->capture_default_str();
    ladder->add_option("--mode", ladder_args.mode, "analytic | simulate")
        ->transform(CLI::CheckedTransformer(kModeNames))
        ->capture_default_str();
    ladder->add_option("--pair-rate", ladder_args.pair_rate, "coincidences per second")
        ->capture_default_str();
    ladder->add_option("--duration-s", ladder_args.duration_s,
                       "seconds per setting; omitted: 60 (K<=5), 120 (K<=10), 180");
    ladder->add_option("--dqe-a", ladder_args.dqe_a, "detector efficiency, site A")
        ->capture_default_str();
    ladder->add_option("--dqe-b", ladder_args.dqe_b, "detector efficiency, site B")
        ->capture_default_str();
    ladder->add_option("--accidental-rate", ladder_args.accidental_rate,
                       "spurious coincidences per second")
        ->capture_default_str();
    ladder->add_flag("--subtract-accidentals", ladder_args.subtract_accidentals,
                     "subtract the expected accidentals in the analysis");
    ladder->add_option("--seed", ladder_args.seed, "simulation RNG seed")
        ->capture_default_str();
    ladder->add_option("--out", ladder_out,
                       "CSV output (simulate: count records; analytic: probabilities)");

    // optimize
    eprcli::OptimizeArgs optimize_args;
    std::string optimize_out;
    auto* optimize = app.add_subcommand(
        "optimize", "Maximize the ladder objective over the entanglement degree");
    optimize->add_option("--k", optimize_args.k_values, "ladder heights to optimize")
        ->capture_default_str();
    optimize->add_option("--objective", optimize_args.objective, "pk | margin")
        ->transform(CLI::CheckedTransformer(kObjectiveNames))
        ->capture_default_str();
    optimize->add_option("--phi-deg", optimize_args.phi_deg, "relative phase (degrees)")
        ->capture_default_str();
    optimize->add_option("--visibility", optimize_args.visibility, "coherence factor V")
        ->capture_default_str();
    optimize->add_option("--noise", optimize_args.noise, "noise kind")
        ->transform(CLI::CheckedTransformer(kNoiseNames))
        ->capture_default_str();
    optimize->add_option("--out", optimize_out, "write the (K, gamma*, value) table as CSV");

    // sweep
    eprcli::SweepArgs sweep_args;
    std::string sweep_out;
    auto* sweep = app.add_subcommand(
        "sweep", "Tabulate P_K(gamma) for plotting");
    sweep->add_option("--k", sweep_args.k_values, "ladder heights")->capture_default_str();
    sweep->add_option("--gamma-min", sweep_args.gamma_min, "lower gamma bound")
        ->capture_default_str();
    sweep->add_option("--gamma-max", sweep_args.gamma_max, "upper gamma bound")
        ->capture_default_str();
    sweep->add_option("--steps", sweep_args.steps, "number of grid points")
        ->capture_default_str();
    sweep->add_option("--phi-deg", sweep_args.phi_deg, "relative phase (degrees)")
        ->capture_default_str();
    sweep->add_option("--visibility", sweep_args.visibility, "coherence factor V")
        ->capture_default_str();
    sweep->add_option("--noise", sweep_args.noise, "noise kind")
        ->transform(CLI::CheckedTransformer(kNoiseNames))
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "write the sweep as CSV");

    // bell
    eprcli::BellArgs bell_args;
    std::vector<double> bell_settings;
    std::string bell_out;
    auto* bell = app.add_subcommand(
        "bell", "CHSH test: S parameter, optimal settings, significance");
    bell->add_option("--gamma", bell_args.state.gamma, "entanglement degree")
        ->capture_default_str();
    bell->add_option("--phi-deg", bell_args.state.phi_deg, "relative phase (degrees)")
        ->capture_default_str();
    bell->add_option("--visibility", bell_args.state.visibility, "coherence factor V")
        ->capture_default_str();
    bell->add_option("--noise", bell_args.state.noise, "noise kind")
        ->transform(CLI::CheckedTransformer(kNoiseNames))
        ->capture_default_str();
    bell->add_option("--mode", bell_args.mode, "analytic | simulate")
        ->transform(CLI::CheckedTransformer(kModeNames))
        ->capture_default_str();
    bell->add_option("--settings", bell_settings,
                     "analyzer angles a a' b b' (degrees); omitted: optimal search")
        ->expected(4);
    bell->add_option("--pair-rate", bell_args.pair_rate, "coincidences per second")
        ->capture_default_str();
    bell->add_option("--duration-s", bell_args.duration_s,
                     "acquisition duration in seconds; omitted: 180");
    bell->add_flag("--duration-total", bell_args.duration_is_total,
                   "treat --duration-s as the total over all 16 acquisitions");
    bell->add_option("--dqe-a", bell_args.dqe_a, "detector efficiency, site A")
        ->capture_default_str();
    bell->add_option("--dqe-b", bell_args.dqe_b, "detector efficiency, site B")
        ->capture_default_str();
    bell->add_option("--accidental-rate", bell_args.accidental_rate,
                     "spurious coincidences per second")
        ->capture_default_str();
    bell->add_option("--seed", bell_args.seed, "simulation RNG seed")->capture_default_str();
    auto* sv = bell->add_option("--s-value", bell_args.s_value,
                                "significance arithmetic: measured S");
    bell->add_option("--s-sigma", bell_args.s_sigma, "significance arithmetic: sigma of S")
        ->needs(sv);
    bell->add_option("--out", bell_out, "CSV output of simulated count records");

    // analyze
    eprcli::AnalyzeArgs analyze_args;
    std::vector<double> analyze_settings;
    auto* analyze = app.add_subcommand(
        "analyze", "Evaluate a nonlocality test on an ingested count CSV");
    analyze->add_option("--csv", analyze_args.csv_path, "count records CSV")->required();
    analyze->add_option("--test", analyze_args.test, "ladder | chsh")->capture_default_str();
    analyze->add_option("--k", analyze_args.k, "ladder height K");
    analyze->add_option("--gamma", analyze_args.gamma, "ladder entanglement degree");
    analyze->add_option("--settings", analyze_settings,
                        "CHSH analyzer angles a a' b b' (degrees)")
        ->expected(4);
    analyze->add_option("--accidental-rate", analyze_args.accidental_rate,
                        "spurious coincidences per second")
        ->capture_default_str();
    analyze->add_flag("--subtract-accidentals", analyze_args.subtract_accidentals,
                      "subtract the expected accidentals in the analysis");

    // simulate-source
    eprcli::SourceArgs source_args;
    auto* source = app.add_subcommand(
        "simulate-source", "Mode-ensemble model: collection efficiency, "
                           "effective visibility, collected-state purity");
    source->add_option("--modes", source_args.modes_csv,
                       "two-column CSV of (weight, phase_radians)");
    source->add_option("--aperture", source_args.aperture_csv,
                       "one-column CSV of per-mode acceptances");
    source->add_option("--n", source_args.n_modes, "synthetic ensemble size")
        ->capture_default_str();
    source->add_option("--phase-spread", source_args.phase_spread,
                       "synthetic phase ramp spread (radians)")
        ->capture_default_str();
    source->add_option("--accept", source_args.accept, "uniform aperture acceptance")
        ->capture_default_str();
    source->add_option("--gamma", source_args.gamma, "entanglement degree")
        ->capture_default_str();
    source->add_option("--phi-deg", source_args.phi_deg, "relative phase (degrees)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    const auto started = std::chrono::steady_clock::now();
    try {
        RunReport report = [&]() -> RunReport {
            if (predict->parsed()) {
                if (!a_range.empty()) predict_args.theta_a_deg = expand_range(a_range);
                if (!b_range.empty()) predict_args.theta_b_deg = expand_range(b_range);
                if (!predict_out.empty()) predict_args.out_csv = predict_out;
                return eprcli::cmd_predict(predict_args);
            }
            if (ladder->parsed()) {
                if (!ladder_out.empty()) ladder_args.out_csv = ladder_out;
                return eprcli::cmd_ladder(ladder_args);
            }
            if (optimize->parsed()) {
                if (!optimize_out.empty()) optimize_args.out_csv = optimize_out;
                return eprcli::cmd_optimize(optimize_args);
            }
            if (sweep->parsed()) {
                if (!sweep_out.empty()) sweep_args.out_csv = sweep_out;
                return eprcli::cmd_sweep(sweep_args);
            }
            if (bell->parsed()) {
                bell_args.settings_deg = as_settings(bell_settings);
                if (!bell_out.empty()) bell_args.out_csv = bell_out;
                return eprcli::cmd_bell(bell_args);
            }
            if (analyze->parsed()) {
                analyze_args.settings_deg = as_settings(analyze_settings);
                return eprcli::cmd_analyze(analyze_args);
            }
            return eprcli::cmd_simulate_source(source_args);
        }();
        emit(report, json);
    } catch (const epr::Error& err) {
        std::cerr << "eprsim: error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "eprsim: internal error: " << err.what() << "\n";
        return 3;
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - started);
    std::cerr << "eprsim: completed in " << elapsed.count() << " ms\n";
    return 0;
}
