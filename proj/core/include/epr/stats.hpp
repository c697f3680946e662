#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "epr/bell.hpp"
#include "epr/hardy.hpp"
#include "epr/uncertain.hpp"

namespace epr {

/// Records are matched to generated settings by angle (mod pi) within this
/// tolerance; angles here are generated, not measured.
inline constexpr double kAngleMatchTol = 1e-6;

/// Counting-experiment parameters.
struct ExperimentConfig {
    double pair_rate = 4000.0;       // detected coincidences per second, full ring
    double duration = 60.0;          // seconds per setting
    double dqe_a = 1.0;              // detection quantum efficiency, site A
    double dqe_b = 1.0;              // site B
    double accidental_rate = 0.0;    // spurious coincidences per second
    std::uint64_t seed = 0;

    /// Throws InvalidInput if a rate is negative, an efficiency is outside
    /// [0, 1], or the duration is negative.
    void validate() const;
};

/// One measured setting: coincidence count plus the same-duration
/// normalization counts taken in the |HH> and |VV> basis settings.
struct CountRecord {
    double theta_a = 0.0;   // radians
    double theta_b = 0.0;   // radians
    double duration = 0.0;  // seconds
    std::int64_t count = 0;
    std::int64_t n_hh = 0;
    std::int64_t n_vv = 0;
};

/// Per-setting sub-seed: splitmix64(seed ^ 0x9E3779B97F4A7C15 * (index + 1)).
/// The rule is fixed so that per-setting streams are independent of
/// processing order.
std::uint64_t sub_seed(std::uint64_t seed, std::size_t setting_index);

/// Poisson counting simulation. For each setting,
///   count ~ Poisson(pair_rate * duration * dqe_a * dqe_b * joint_prob
///                   + accidental_rate * duration)
/// and n_hh, n_vv are drawn the same way at the (0, 0) and (pi/2, pi/2)
/// settings. Bit-for-bit deterministic for fixed inputs and seed.
std::vector<CountRecord> simulate_counts(const DensityMatrix& rho,
                                         const std::vector<AnalyzerSetting>& settings,
                                         const ExperimentConfig& cfg);

/// Normalized probability estimate p = N / (N_HH + N_VV) with first-order
/// Poisson propagation sigma^2 = p^2 (1/N + 1/(N_HH + N_VV)); for N = 0 the
/// convention sigma = 1/(N_HH + N_VV) applies. A positive accidental_rate
/// subtracts the expected accidentals (rate * duration, clamped at zero) from
/// each count before forming the ratio; variances stay those of the raw
/// counts. Throws DataError on zero normalization.
Uncertain estimate_probability(const CountRecord& rec, double accidental_rate = 0.0);

/// Parametric-bootstrap cross-check of the propagated sigma: counts are
/// resampled as Poisson variates around the observed values.
Uncertain bootstrap_probability(const CountRecord& rec, int resamples = 1000,
                                std::uint64_t seed = 1);

struct LadderAnalysis {
    Uncertain p_k;
    Uncertain script_p;                // quadrature over the 2K+1 terms
    double margin = 0.0;               // p_k.value - script_p.value
    double sigma_violation = 0.0;
    std::vector<Uncertain> terms;      // aligned with ladder_settings()[1..]
};

/// Assemble ladder statistics from count records covering all 2K+2 settings.
/// Missing, duplicate or unmatched settings raise DataError listing the
/// offending angles (degrees).
LadderAnalysis analyze_ladder(const std::vector<CountRecord>& records,
                              const LadderSpec& spec, double accidental_rate = 0.0);

/// The 16 acquisition settings of a CHSH run: for each correlation pair in the
/// order (a,b), (a,b'), (a',b), (a',b'), the four outcome combinations
/// (pass,pass), (pass,block), (block,pass), (block,block).
std::vector<AnalyzerSetting> chsh_outcome_settings(const CHSHSettings& s);

struct ChshAnalysis {
    Uncertain s;
    double sigma_violation = 0.0;
    std::array<Uncertain, 4> correlations;  // E(a,b), E(a,b'), E(a',b), E(a',b')
};

/// Assemble the CHSH S estimate from records covering all 16 outcome
/// settings. E = (N_pp - N_pb - N_bp + N_bb) / sum, sigma by Poisson
/// propagation, S and sigma_S by quadrature.
ChshAnalysis analyze_chsh(const std::vector<CountRecord>& records,
                          const CHSHSettings& settings);

/// Read count records from CSV. The header line is mandatory and must be
/// exactly `theta_a_deg,theta_b_deg,duration_s,count,n_hh,n_vv`; UTF-8,
/// '.' decimal separator, LF or CRLF. Malformed rows are reported with line
/// numbers; an empty data section is an error.
std::vector<CountRecord> ingest_csv(const std::filesystem::path& path);

/// Write records in the ingest_csv schema (angles in degrees).
void write_counts_csv(const std::filesystem::path& path,
                      const std::vector<CountRecord>& records);

}  // namespace epr
