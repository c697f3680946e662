#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epr/bell.hpp"
#include "epr/hardy.hpp"
#include "epr/source.hpp"
#include "epr/states.hpp"
#include "epr/stats.hpp"
#include "eprcli/report.hpp"

namespace eprcli {

double to_rad(double degrees);
double to_deg(double radians);

/// State construction shared by most commands. Degrees at this boundary,
/// radians inside the core.
struct StateArgs {
    double gamma = 1.0;
    double phi_deg = 180.0;
    double visibility = 1.0;
    epr::NoiseKind noise = epr::NoiseKind::colored;
};

epr::DensityMatrix build_state(const StateArgs& args);

struct PredictArgs {
    StateArgs state;
    std::vector<double> theta_a_deg;  // cross product with theta_b_deg
    std::vector<double> theta_b_deg;
    std::optional<std::string> out_csv;
};
RunReport cmd_predict(const PredictArgs& args);

enum class RunMode { analytic, simulate };

struct LadderArgs {
    int k = 4;
    std::optional<double> gamma;  // absent: use the optimizer's gamma*
    double phi_deg = 180.0;
    double visibility = 1.0;
    epr::NoiseKind noise = epr::NoiseKind::colored;
    RunMode mode = RunMode::analytic;
    double pair_rate = 4000.0;
    std::optional<double> duration_s;  // absent: 60 s (K<=5), 120 s (K<=10), 180 s
    double dqe_a = 1.0;
    double dqe_b = 1.0;
    double accidental_rate = 0.0;
    bool subtract_accidentals = false;
    std::uint64_t seed = 0;
    std::optional<std::string> out_csv;  // simulate: count records; analytic: probabilities
};
RunReport cmd_ladder(const LadderArgs& args);

struct OptimizeArgs {
    std::vector<int> k_values = {1, 4, 5, 10, 20};
    epr::LadderObjective objective = epr::LadderObjective::pk;
    double phi_deg = 180.0;
    double visibility = 1.0;
    epr::NoiseKind noise = epr::NoiseKind::colored;
    std::optional<std::string> out_csv;
};
RunReport cmd_optimize(const OptimizeArgs& args);

struct SweepArgs {
    std::vector<int> k_values = {4, 5, 10, 20};
    double gamma_min = 0.0;
    double gamma_max = 1.0;
    int steps = 201;
    double phi_deg = 180.0;
    double visibility = 1.0;
    epr::NoiseKind noise = epr::NoiseKind::colored;
    std::optional<std::string> out_csv;
};
RunReport cmd_sweep(const SweepArgs& args);

struct BellArgs {
    StateArgs state;
    RunMode mode = RunMode::analytic;
    std::optional<std::array<double, 4>> settings_deg;  // a, a', b, b'; absent: optimal
    double pair_rate = 4000.0;
    std::optional<double> duration_s;  // per acquisition; default 180 s
    bool duration_is_total = false;    // split the duration over all 16 acquisitions
    double dqe_a = 1.0;
    double dqe_b = 1.0;
    double accidental_rate = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> s_value;  // with s_sigma: significance arithmetic only
    std::optional<double> s_sigma;
    std::optional<std::string> out_csv;
};
RunReport cmd_bell(const BellArgs& args);

struct AnalyzeArgs {
    std::string csv_path;
    std::string test = "ladder";  // "ladder" | "chsh"
    std::optional<int> k;
    std::optional<double> gamma;
    std::optional<std::array<double, 4>> settings_deg;  // chsh
    double accidental_rate = 0.0;
    bool subtract_accidentals = false;
};
RunReport cmd_analyze(const AnalyzeArgs& args);

struct SourceArgs {
    std::optional<std::string> modes_csv;
    std::optional<std::string> aperture_csv;
    std::size_t n_modes = 256;     // synthetic ensemble when no CSV is given
    double phase_spread = 0.0;     // radians
    double accept = 1.0;           // uniform aperture when no CSV is given
    double gamma = 1.0;
    double phi_deg = 180.0;
};
RunReport cmd_simulate_source(const SourceArgs& args);

}  // namespace eprcli
