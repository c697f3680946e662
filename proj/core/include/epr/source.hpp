#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "epr/states.hpp"

namespace epr {

/// One discretized emission mode pair: relative emission strength and the
/// phase this pair adds to the state's base phase.
struct ModePair {
    double weight = 1.0;  // >= 0, dimensionless
    double phase = 0.0;   // radians
};

/// Spatial/frequency filter: per-mode probability that both photons of the
/// pair are transmitted. Must have one entry per mode.
struct Aperture {
    std::vector<double> acceptance;

    static Aperture open(std::size_t n_modes);     // all 1
    static Aperture uniform(std::size_t n_modes, double a);
};

/// Fraction of emitted pairs that survive the aperture:
/// sum(w_i a_i) / sum(w_i).
double collection_efficiency(const std::vector<ModePair>& modes, const Aperture& ap);

/// Coherence left after filtering: |sum(w_i a_i e^{i phase_i})| / sum(w_i a_i).
/// For alpha = beta the purity of collected_state equals (1 + V_eff^2) / 2.
double effective_visibility(const std::vector<ModePair>& modes, const Aperture& ap);

/// Post-selected polarization state of the accepted ensemble:
///   rho = sum w_i a_i |Phi(phi + phase_i)><Phi(phi + phase_i)| / sum w_i a_i
/// where |Phi(x)> uses p's amplitudes with relative phase x. Throws
/// InvalidInput when the aperture blocks all weighted modes
/// (degenerate selection).
DensityMatrix collected_state(const std::vector<ModePair>& modes, const Aperture& ap,
                              const PureTwoQubit& p);

/// Synthetic ensemble: n equal-weight modes with phases j * spread / n,
/// j = 0..n-1 (left-endpoint ramp over [0, spread)).
std::vector<ModePair> phase_ramp_modes(std::size_t n, double spread);

/// Two-column CSV (weight, phase_radians). '#' comments and blank lines are
/// skipped; a leading non-numeric line is treated as a header. Malformed rows
/// are reported with their line number.
std::vector<ModePair> load_modes_csv(const std::filesystem::path& path);

/// One-column CSV of per-mode acceptances in [0, 1]; same conventions.
Aperture load_aperture_csv(const std::filesystem::path& path);

}  // namespace epr
