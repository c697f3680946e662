#pragma once

#include "epr/measurement.hpp"
#include "epr/uncertain.hpp"

namespace epr {

/// The four CHSH analyzer angles (radians), two per site. Within each site the
/// two angles must be distinct modulo pi.
struct CHSHSettings {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;

    static CHSHSettings make(double a, double a_prime, double b, double b_prime);
};

/// S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')| with E from correlation().
/// The absolute-value form makes the result independent of settings ordering.
double chsh_s(const DensityMatrix& rho, const CHSHSettings& s);

struct ChshOptimum {
    CHSHSettings settings;
    double s = 0.0;
};

/// Settings maximizing S: coarse 7.5-degree 4-D grid followed by
/// coordinate-descent refinement. Deterministic (ties break toward the
/// lexicographically smallest grid angles). The returned S is recomputed
/// through chsh_s on the final settings.
ChshOptimum optimal_chsh_settings(const DensityMatrix& rho);

/// (S - 2) / sigma_S, the violation significance against the local bound.
/// sigma must be > 0.
double sigma_violation(const Uncertain& s);

}  // namespace epr
