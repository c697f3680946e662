#pragma once

#include <vector>

#include "epr/states.hpp"

namespace epr {

/// One joint polarizer setting. Angles are in radians with H = 0 and V = pi/2;
/// a projector is pi-periodic in its analyzer angle, so angles are compared
/// modulo pi.
struct AnalyzerSetting {
    double theta_a = 0.0;
    double theta_b = 0.0;

    /// Copy with both angles reduced to [0, pi).
    AnalyzerSetting canonical() const;
};

/// Full pass/block outcome distribution of one joint setting.
struct OutcomeProbs {
    double pp = 0.0;  // pass, pass
    double pb = 0.0;  // pass, block
    double bp = 0.0;  // block, pass
    double bb = 0.0;  // block, block

    double sum() const { return pp + pb + bp + bb; }
};

/// Reduce an angle to [0, pi).
double reduce_mod_pi(double theta);

/// Orthogonal analyzer angle theta + pi/2, reduced to [0, pi).
double perp(double theta);

/// Distance between analyzer angles modulo pi (projector equivalence).
double angle_distance_mod_pi(double x, double y);

/// True when both angles agree modulo pi within tol.
bool settings_match(const AnalyzerSetting& lhs, const AnalyzerSetting& rhs, double tol);

/// Joint pass/pass detection probability Tr[rho (|tA><tA| (x) |tB><tB|)]
/// with |t> = cos t |H> + sin t |V>. Result clamped to [0, 1].
double joint_prob(const DensityMatrix& rho, const AnalyzerSetting& s);

/// All four projector combinations (pass = |t>, block = |t + pi/2>).
/// The four probabilities sum to 1.
OutcomeProbs outcome_probs(const DensityMatrix& rho, const AnalyzerSetting& s);

/// Correlation E = pp - pb - bp + bb in [-1, 1].
double correlation(const DensityMatrix& rho, const AnalyzerSetting& s);

struct FringePoint {
    double theta_a = 0.0;  // radians
    double probability = 0.0;
};

/// Coincidence fringe: joint_prob evaluated pointwise over theta_a_grid with
/// theta_b held fixed.
std::vector<FringePoint> fringe(const DensityMatrix& rho, double theta_b,
                                const std::vector<double>& theta_a_grid);

/// Fringe contrast (max - min) / (max + min). Throws InvalidInput on an empty
/// or all-zero series.
double visibility_of(const std::vector<double>& series);
double visibility_of(const std::vector<FringePoint>& series);

}  // namespace epr
