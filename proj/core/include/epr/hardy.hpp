#pragma once

#include <functional>
#include <vector>

#include "epr/measurement.hpp"
#include "epr/uncertain.hpp"

namespace epr {

/// Ladder test parameters: height K >= 1 and entanglement degree
/// gamma strictly inside (0, 1). Both endpoints give zero violation and are
/// rejected here; the bare-formula overloads below accept the closed
/// interval for sweeps and limits.
struct LadderSpec {
    int k = 1;
    double gamma = 0.5;

    static LadderSpec make(int k, double gamma);
};

/// Ladder analyzer angles theta_j = (-1)^j atan(gamma^{j + 1/2}), j = 0..K.
/// |theta_j| is strictly decreasing and the signs alternate.
/// Valid for gamma in [0, 1].
std::vector<double> ladder_angles(int k, double gamma);
std::vector<double> ladder_angles(const LadderSpec& spec);

/// The 2K+2 joint settings of the ladder inequality, in order:
///   [0]      (theta_K, theta_K)
///   [1]      (theta_0, theta_0)
///   [2k], [2k+1] for k = 1..K:  (theta_k, theta_{k-1}+pi/2) and its mirror.
std::vector<AnalyzerSetting> ladder_settings(const LadderSpec& spec);

/// Outcome of one ladder-inequality evaluation:
///   p_k      = P(theta_K, theta_K), the left-hand side
///   script_p = sum of the 2K+1 right-hand-side terms
///   margin   = p_k - script_p; margin > 0 violates local realism.
struct LadderResult {
    double p_k = 0.0;
    double script_p = 0.0;
    std::vector<double> terms;               // the 2K+1 RHS contributions
    double margin = 0.0;
    std::vector<AnalyzerSetting> settings;   // 2K+2; [0] belongs to p_k,
                                             // [i+1] to terms[i]
};

/// Evaluate every term of the ladder inequality on rho via joint_prob.
LadderResult evaluate_ladder(const DensityMatrix& rho, const LadderSpec& spec);

/// Closed form of P(theta_K, theta_K) for the ideal pure state (phi = pi):
///   P_K = gamma^2 (1 - gamma^{2K})^2 / [(1 + gamma^2)(1 + gamma^{2K+1})^2].
/// Valid for gamma in [0, 1]; agrees with evaluate_ladder on the pure state.
double pk_ideal(int k, double gamma);
double pk_ideal(const LadderSpec& spec);

/// P(theta_K, theta_K) of an arbitrary state at the ladder angles for
/// (k, gamma). Domain gamma in [0, 1]; used for sweeps over noisy states.
double ladder_pk(const DensityMatrix& rho, int k, double gamma);

enum class LadderObjective { pk, margin };

/// Builds the state to test at a given entanglement degree.
using RhoFactory = std::function<DensityMatrix(double gamma)>;

struct OptimizeResult {
    double gamma_star = 0.0;
    double value = 0.0;
    bool grid_fallback = false;  // bracketing scan failed; dense grid was used
    int evaluations = 0;
};

/// Maximize the chosen objective over gamma in (0, 1) to absolute tolerance
/// 1e-6 in gamma. A 64-point bracketing scan locates the maximum, golden
/// section refines it; a non-unimodal scan falls back to a dense grid plus
/// local refinement (flagged in the result). Deterministic; ties break toward
/// smaller gamma.
OptimizeResult optimize_gamma(int k, const RhoFactory& rho_factory,
                              LadderObjective objective);

/// Same, for the ideal pure state with phi = pi.
OptimizeResult optimize_gamma(int k, LadderObjective objective = LadderObjective::pk);

/// Violation significance (p_k - script_p) / sqrt(sigma_pk^2 + sigma_sp^2),
/// treating the two uncertainties as independent. Both sigmas must be > 0.
double violation_sigma(const Uncertain& p_k, const Uncertain& script_p);

}  // namespace epr
