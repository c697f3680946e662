#include "eprcli/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "epr/errors.hpp"

namespace eprcli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string noise_name(epr::NoiseKind kind) {
    return kind == epr::NoiseKind::colored ? "colored" : "white";
}

std::string mode_name(RunMode mode) {
    return mode == RunMode::analytic ? "analytic" : "simulate";
}

void echo_state(RunReport& report, const StateArgs& args) {
    report.param("gamma", args.gamma);
    report.param("phi_deg", args.phi_deg);
    report.param("visibility", args.visibility);
    report.param("noise", noise_name(args.noise));
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw epr::DataError("cannot open file for writing: " + path);
    }
    return out;
}

void write_probability_csv(const std::string& path,
                           const std::vector<epr::AnalyzerSetting>& settings,
                           const std::vector<double>& probabilities) {
    auto out = open_out(path);
    out << "theta_a_deg,theta_b_deg,probability\n";
    for (std::size_t i = 0; i < settings.size(); ++i) {
        out << format_double(to_deg(settings[i].theta_a)) << ","
            << format_double(to_deg(settings[i].theta_b)) << ","
            << format_double(probabilities[i]) << "\n";
    }
}

// Ladder term labels: lhs "P(tK,tK)", then "P(t0,t0)", "P(tk,t{k-1}+90)", ...
std::vector<std::string> ladder_labels(int k) {
    std::vector<std::string> labels;
    labels.push_back("P(t" + std::to_string(k) + ",t" + std::to_string(k) + ")");
    labels.push_back("P(t0,t0)");
    for (int j = 1; j <= k; ++j) {
        const std::string tj = "t" + std::to_string(j);
        const std::string tp = "t" + std::to_string(j - 1) + "+90";
        labels.push_back("P(" + tj + "," + tp + ")");
        labels.push_back("P(" + tp + "," + tj + ")");
    }
    return labels;
}

double ladder_default_duration(int k) {
    if (k <= 5) return 60.0;
    if (k <= 10) return 120.0;
    return 180.0;
}

epr::RhoFactory noisy_factory(double phi, double visibility, epr::NoiseKind kind) {
    return [phi, visibility, kind](double g) {
        return epr::apply_noise(epr::state_from_gamma(g, phi),
                                epr::NoiseModel::make(visibility, kind));
    };
}

}  // namespace

double to_rad(double degrees) { return degrees * kPi / 180.0; }
double to_deg(double radians) { return radians * 180.0 / kPi; }

epr::DensityMatrix build_state(const StateArgs& args) {
    const auto pure = epr::state_from_gamma(args.gamma, to_rad(args.phi_deg));
    return epr::apply_noise(pure, epr::NoiseModel::make(args.visibility, args.noise));
}

RunReport cmd_predict(const PredictArgs& args) {
    if (args.theta_a_deg.empty() || args.theta_b_deg.empty()) {
        throw epr::InvalidInput("predict: need at least one angle per site");
    }
    RunReport report("predict");
    echo_state(report, args.state);
    const auto rho = build_state(args.state);

    std::vector<epr::AnalyzerSetting> settings;
    std::vector<double> probabilities;
    std::vector<std::vector<std::string>> rows;
    for (double a : args.theta_a_deg) {
        for (double b : args.theta_b_deg) {
            const epr::AnalyzerSetting s{to_rad(a), to_rad(b)};
            const double p = epr::joint_prob(rho, s);
            settings.push_back(s);
            probabilities.push_back(p);
            rows.push_back({format_double(a), format_double(b), format_double(p)});
        }
    }
    report.result("points", static_cast<double>(probabilities.size()));
    if (probabilities.size() == 1) {
        report.result("probability", probabilities[0]);
    }
    report.table({"theta_a_deg", "theta_b_deg", "probability"}, std::move(rows));
    if (args.out_csv) {
        write_probability_csv(*args.out_csv, settings, probabilities);
        report.result("out", *args.out_csv);
    }
    return report;
}

RunReport cmd_ladder(const LadderArgs& args) {
    RunReport report("ladder");
    report.param("k", static_cast<std::int64_t>(args.k));

    double gamma;
    if (args.gamma) {
        gamma = *args.gamma;
        report.param("gamma", gamma);
        report.param("gamma_source", "flag");
    } else {
        const auto opt =
            args.visibility < 1.0
                ? epr::optimize_gamma(args.k,
                                      noisy_factory(to_rad(args.phi_deg), args.visibility,
                                                    args.noise),
                                      epr::LadderObjective::pk)
                : epr::optimize_gamma(args.k);
        gamma = opt.gamma_star;
        report.param("gamma", gamma);
        report.param("gamma_source", "optimizer");
    }
    report.param("phi_deg", args.phi_deg);
    report.param("visibility", args.visibility);
    report.param("noise", noise_name(args.noise));
    report.param("mode", mode_name(args.mode));

    const auto spec = epr::LadderSpec::make(args.k, gamma);
    const auto rho = build_state({gamma, args.phi_deg, args.visibility, args.noise});
    const auto analytic = epr::evaluate_ladder(rho, spec);
    const auto labels = ladder_labels(args.k);

    if (args.mode == RunMode::analytic) {
        report.result("p_k", analytic.p_k);
        report.result("script_p", analytic.script_p);
        report.result("margin", analytic.margin);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < analytic.settings.size(); ++i) {
            const double p = i == 0 ? analytic.p_k : analytic.terms[i - 1];
            rows.push_back({labels[i], format_double(to_deg(analytic.settings[i].theta_a)),
                            format_double(to_deg(analytic.settings[i].theta_b)),
                            format_double(p)});
        }
        report.table({"term", "theta_a_deg", "theta_b_deg", "probability"}, std::move(rows));
        report.verdict(analytic.margin > 0.0
                           ? "quantum prediction violates the ladder inequality"
                           : "no violation predicted");
        if (args.out_csv) {
            std::vector<double> probabilities = {analytic.p_k};
            probabilities.insert(probabilities.end(), analytic.terms.begin(),
                                 analytic.terms.end());
            write_probability_csv(*args.out_csv, analytic.settings, probabilities);
            report.result("out", *args.out_csv);
        }
        return report;
    }

    epr::ExperimentConfig cfg;
    cfg.pair_rate = args.pair_rate;
    cfg.duration = args.duration_s ? *args.duration_s : ladder_default_duration(args.k);
    cfg.dqe_a = args.dqe_a;
    cfg.dqe_b = args.dqe_b;
    cfg.accidental_rate = args.accidental_rate;
    cfg.seed = args.seed;
    report.param("pair_rate", cfg.pair_rate);
    report.param("duration_s", cfg.duration);
    report.param("dqe_a", cfg.dqe_a);
    report.param("dqe_b", cfg.dqe_b);
    report.param("accidental_rate", cfg.accidental_rate);
    report.seed(cfg.seed);

    const auto settings = epr::ladder_settings(spec);
    const auto records = epr::simulate_counts(rho, settings, cfg);
    const double subtract = args.subtract_accidentals ? args.accidental_rate : 0.0;
    const auto analysis = epr::analyze_ladder(records, spec, subtract);

    report.result("p_k", analysis.p_k);
    report.result("script_p", analysis.script_p);
    report.result("margin", analysis.margin);
    report.result("sigma_violation", analysis.sigma_violation);
    report.result("p_k_analytic", analytic.p_k);
    report.result("script_p_analytic", analytic.script_p);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < settings.size(); ++i) {
        const epr::Uncertain est = i == 0 ? analysis.p_k : analysis.terms[i - 1];
        rows.push_back({labels[i], format_double(to_deg(settings[i].theta_a)),
                        format_double(to_deg(settings[i].theta_b)),
                        std::to_string(records[i].count), format_double(est.value),
                        format_double(est.sigma)});
    }
    report.table({"term", "theta_a_deg", "theta_b_deg", "count", "p_hat", "sigma"},
                 std::move(rows));
    std::ostringstream verdict;
    if (analysis.margin > 0.0) {
        verdict << "local realism violated by " << format_double(analysis.sigma_violation)
                << " sigma";
    } else {
        verdict << "no violation (margin <= 0)";
    }
    report.verdict(verdict.str());
    if (args.out_csv) {
        epr::write_counts_csv(*args.out_csv, records);
        report.result("out", *args.out_csv);
    }
    return report;
}

RunReport cmd_optimize(const OptimizeArgs& args) {
    if (args.k_values.empty()) {
        throw epr::InvalidInput("optimize: need at least one K value");
    }
    RunReport report("optimize");
    std::ostringstream ks;
    for (std::size_t i = 0; i < args.k_values.size(); ++i) {
        ks << (i ? "," : "") << args.k_values[i];
    }
    report.param("k_values", ks.str());
    report.param("objective", args.objective == epr::LadderObjective::pk ? "pk" : "margin");
    report.param("phi_deg", args.phi_deg);
    report.param("visibility", args.visibility);
    report.param("noise", noise_name(args.noise));

    std::vector<std::vector<std::string>> rows;
    for (int k : args.k_values) {
        const auto opt =
            args.visibility < 1.0 || args.objective == epr::LadderObjective::margin
                ? epr::optimize_gamma(
                      k, noisy_factory(to_rad(args.phi_deg), args.visibility, args.noise),
                      args.objective)
                : epr::optimize_gamma(k);
        rows.push_back({std::to_string(k), format_double(opt.gamma_star),
                        format_double(opt.value),
                        opt.grid_fallback ? "grid-fallback" : "golden-section",
                        std::to_string(opt.evaluations)});
    }
    if (args.out_csv) {
        auto out = open_out(*args.out_csv);
        out << "k,gamma_star,value\n";
        for (const auto& row : rows) {
            out << row[0] << "," << row[1] << "," << row[2] << "\n";
        }
        report.result("out", *args.out_csv);
    }
    report.table({"k", "gamma_star", "value", "method", "evaluations"}, std::move(rows));
    return report;
}

RunReport cmd_sweep(const SweepArgs& args) {
    if (args.k_values.empty()) {
        throw epr::InvalidInput("sweep: need at least one K value");
    }
    if (args.steps < 2 || !(args.gamma_min < args.gamma_max) || args.gamma_min < 0.0 ||
        args.gamma_max > 1.0) {
        throw epr::InvalidInput("sweep: need steps >= 2 and 0 <= gamma_min < gamma_max <= 1");
    }
    RunReport report("sweep");
    std::ostringstream ks;
    for (std::size_t i = 0; i < args.k_values.size(); ++i) {
        ks << (i ? "," : "") << args.k_values[i];
    }
    report.param("k_values", ks.str());
    report.param("gamma_min", args.gamma_min);
    report.param("gamma_max", args.gamma_max);
    report.param("steps", static_cast<std::int64_t>(args.steps));
    report.param("phi_deg", args.phi_deg);
    report.param("visibility", args.visibility);
    report.param("noise", noise_name(args.noise));

    const bool ideal = args.visibility >= 1.0 && args.phi_deg == 180.0;
    std::vector<std::string> header = {"gamma"};
    for (int k : args.k_values) header.push_back("p" + std::to_string(k));

    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(args.steps));
    for (int i = 0; i < args.steps; ++i) {
        const double g = args.gamma_min +
                         (args.gamma_max - args.gamma_min) * i / (args.steps - 1);
        std::vector<std::string> row = {format_double(g)};
        for (int k : args.k_values) {
            double value;
            if (ideal) {
                value = epr::pk_ideal(k, g);
            } else {
                const auto rho = build_state({g, args.phi_deg, args.visibility, args.noise});
                value = epr::ladder_pk(rho, k, g);
            }
            row.push_back(format_double(value));
        }
        rows.push_back(std::move(row));
    }
    if (args.out_csv) {
        auto out = open_out(*args.out_csv);
        for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
            out << "\n";
        }
        report.result("out", *args.out_csv);
        report.result("rows", static_cast<double>(rows.size()));
    } else {
        report.table(std::move(header), std::move(rows));
    }
    return report;
}

RunReport cmd_bell(const BellArgs& args) {
    RunReport report("bell");

    if (args.s_value || args.s_sigma) {
        if (!args.s_value || !args.s_sigma) {
            throw epr::InvalidInput("bell: --s-value and --s-sigma must be given together");
        }
        const epr::Uncertain s{*args.s_value, *args.s_sigma};
        report.param("s_value", s.value);
        report.param("s_sigma", s.sigma);
        report.result("s", s);
        report.result("sigma_violation", epr::sigma_violation(s));
        report.verdict(s.value > 2.0 ? "above the local bound S = 2"
                                     : "within the local bound S = 2");
        return report;
    }

    echo_state(report, args.state);
    report.param("mode", mode_name(args.mode));
    const auto rho = build_state(args.state);

    epr::CHSHSettings settings{};
    if (args.settings_deg) {
        const auto& d = *args.settings_deg;
        settings = epr::CHSHSettings::make(to_rad(d[0]), to_rad(d[1]), to_rad(d[2]),
                                           to_rad(d[3]));
        report.param("settings_source", "flag");
    } else {
        settings = epr::optimal_chsh_settings(rho).settings;
        report.param("settings_source", "optimizer");
    }
    report.param("a_deg", to_deg(settings.a));
    report.param("a_prime_deg", to_deg(settings.a_prime));
    report.param("b_deg", to_deg(settings.b));
    report.param("b_prime_deg", to_deg(settings.b_prime));

    if (args.mode == RunMode::analytic) {
        const double s = epr::chsh_s(rho, settings);
        report.result("s", s);
        report.result("e_ab", epr::correlation(rho, {settings.a, settings.b}));
        report.result("e_abp", epr::correlation(rho, {settings.a, settings.b_prime}));
        report.result("e_apb", epr::correlation(rho, {settings.a_prime, settings.b}));
        report.result("e_apbp",
                      epr::correlation(rho, {settings.a_prime, settings.b_prime}));
        report.verdict(s > 2.0 ? "quantum prediction exceeds the local bound S = 2"
                               : "within the local bound S = 2");
        return report;
    }

    epr::ExperimentConfig cfg;
    cfg.pair_rate = args.pair_rate;
    const double duration = args.duration_s ? *args.duration_s : 180.0;
    cfg.duration = args.duration_is_total ? duration / 16.0 : duration;
    cfg.dqe_a = args.dqe_a;
    cfg.dqe_b = args.dqe_b;
    cfg.accidental_rate = args.accidental_rate;
    cfg.seed = args.seed;
    report.param("pair_rate", cfg.pair_rate);
    report.param("duration_s_per_acquisition", cfg.duration);
    report.param("dqe_a", cfg.dqe_a);
    report.param("dqe_b", cfg.dqe_b);
    report.param("accidental_rate", cfg.accidental_rate);
    report.seed(cfg.seed);

    const auto outcome_settings = epr::chsh_outcome_settings(settings);
    const auto records = epr::simulate_counts(rho, outcome_settings, cfg);
    const auto analysis = epr::analyze_chsh(records, settings);
    report.result("s", analysis.s);
    report.result("sigma_violation", analysis.sigma_violation);
    const std::array<std::string, 4> names = {"e_ab", "e_abp", "e_apb", "e_apbp"};
    for (std::size_t i = 0; i < 4; ++i) {
        report.result(names[i], analysis.correlations[i]);
    }
    std::ostringstream verdict;
    if (analysis.s.value > 2.0) {
        verdict << "local bound exceeded by " << format_double(analysis.sigma_violation)
                << " sigma";
    } else {
        verdict << "within the local bound S = 2";
    }
    report.verdict(verdict.str());
    if (args.out_csv) {
        epr::write_counts_csv(*args.out_csv, records);
        report.result("out", *args.out_csv);
    }
    return report;
}

RunReport cmd_analyze(const AnalyzeArgs& args) {
    RunReport report("analyze");
    report.param("csv", args.csv_path);
    report.param("test", args.test);
    const auto records = epr::ingest_csv(args.csv_path);
    report.result("records", static_cast<double>(records.size()));
    const double subtract = args.subtract_accidentals ? args.accidental_rate : 0.0;

    if (args.test == "ladder") {
        if (!args.k || !args.gamma) {
            throw epr::InvalidInput("analyze: the ladder test needs --k and --gamma");
        }
        report.param("k", static_cast<std::int64_t>(*args.k));
        report.param("gamma", *args.gamma);
        const auto spec = epr::LadderSpec::make(*args.k, *args.gamma);
        const auto analysis = epr::analyze_ladder(records, spec, subtract);
        report.result("p_k", analysis.p_k);
        report.result("script_p", analysis.script_p);
        report.result("margin", analysis.margin);
        report.result("sigma_violation", analysis.sigma_violation);
        std::ostringstream verdict;
        if (analysis.margin > 0.0) {
            verdict << "local realism violated by "
                    << format_double(analysis.sigma_violation) << " sigma";
        } else {
            verdict << "no violation (margin <= 0)";
        }
        report.verdict(verdict.str());
        return report;
    }
    if (args.test == "chsh") {
        if (!args.settings_deg) {
            throw epr::InvalidInput("analyze: the chsh test needs --settings a a' b b'");
        }
        const auto& d = *args.settings_deg;
        const auto settings = epr::CHSHSettings::make(to_rad(d[0]), to_rad(d[1]),
                                                      to_rad(d[2]), to_rad(d[3]));
        const auto analysis = epr::analyze_chsh(records, settings);
        report.result("s", analysis.s);
        report.result("sigma_violation", analysis.sigma_violation);
        std::ostringstream verdict;
        if (analysis.s.value > 2.0) {
            verdict << "local bound exceeded by "
                    << format_double(analysis.sigma_violation) << " sigma";
        } else {
            verdict << "within the local bound S = 2";
        }
        report.verdict(verdict.str());
        return report;
    }
    throw epr::InvalidInput("analyze: unknown test '" + args.test + "'");
}

RunReport cmd_simulate_source(const SourceArgs& args) {
    RunReport report("simulate-source");
    std::vector<epr::ModePair> modes;
    if (args.modes_csv) {
        modes = epr::load_modes_csv(*args.modes_csv);
        report.param("modes", *args.modes_csv);
    } else {
        modes = epr::phase_ramp_modes(args.n_modes, args.phase_spread);
        report.param("n_modes", static_cast<std::int64_t>(args.n_modes));
        report.param("phase_spread_rad", args.phase_spread);
    }
    epr::Aperture aperture;
    if (args.aperture_csv) {
        aperture = epr::load_aperture_csv(*args.aperture_csv);
        report.param("aperture", *args.aperture_csv);
    } else {
        aperture = epr::Aperture::uniform(modes.size(), args.accept);
        report.param("accept", args.accept);
    }
    report.param("gamma", args.gamma);
    report.param("phi_deg", args.phi_deg);

    const auto p = epr::state_from_gamma(args.gamma, to_rad(args.phi_deg));
    const double cqe = epr::collection_efficiency(modes, aperture);
    const double v_eff = epr::effective_visibility(modes, aperture);
    const auto rho = epr::collected_state(modes, aperture, p);
    report.result("modes_total", static_cast<double>(modes.size()));
    report.result("collection_efficiency", cqe);
    report.result("effective_visibility", v_eff);
    report.result("purity", epr::purity(rho));
    report.result("rho_hh", rho(0, 0).real());
    report.result("rho_vv", rho(3, 3).real());
    report.result("coherence_magnitude", std::abs(rho(0, 3)));
    return report;
}

}  // namespace eprcli
