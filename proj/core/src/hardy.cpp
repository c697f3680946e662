#include "epr/hardy.hpp"

#include <cmath>
#include <limits>

#include "epr/errors.hpp"

namespace epr {

namespace {

constexpr double kGoldenRatioConj = 0.61803398874989484820;  // (sqrt(5)-1)/2
constexpr double kGammaTol = 1e-7;                           // < the 1e-6 target
constexpr double kPi = 3.14159265358979323846;

void require_gamma_range(double gamma) {
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0) {
        throw InvalidInput("ladder formula: gamma must lie in [0, 1]");
    }
}

// Golden-section maximization on [a, b]; ties shrink toward smaller gamma.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol, int& evals) {
    double c = b - kGoldenRatioConj * (b - a);
    double d = a + kGoldenRatioConj * (b - a);
    double fc = f(c), fd = f(d);
    evals += 2;
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatioConj * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatioConj * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    return 0.5 * (a + b);
}

// 64-point bracketing scan on (0, 1), golden refinement; dense-grid fallback
// when the scan is not unimodal. Deterministic; ties break toward smaller gamma.
OptimizeResult maximize_over_gamma(const std::function<double(double)>& f) {
    int evals = 0;
    constexpr int n_scan = 64;
    double xs[n_scan], fs[n_scan];
    for (int i = 0; i < n_scan; ++i) {
        xs[i] = (i + 1) / static_cast<double>(n_scan + 1);
        fs[i] = f(xs[i]);
        ++evals;
    }
    int best = 0;
    int n_maxima = 0;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_scan; ++i) {
        const double left = i > 0 ? fs[i - 1] : neg_inf;
        const double right = i + 1 < n_scan ? fs[i + 1] : neg_inf;
        if (fs[i] > left && fs[i] >= right) ++n_maxima;
        if (fs[i] > fs[best]) best = i;
    }

    OptimizeResult result;
    double lo, hi;
    if (n_maxima <= 1) {
        lo = best > 0 ? xs[best - 1] : 1e-9;
        hi = best + 1 < n_scan ? xs[best + 1] : 1.0 - 1e-9;
    } else {
        result.grid_fallback = true;
        constexpr int n_dense = 100000;
        int dense_best = 1;
        double dense_best_f = neg_inf;
        for (int i = 1; i < n_dense; ++i) {
            const double v = f(i / static_cast<double>(n_dense));
            ++evals;
            if (v > dense_best_f) {
                dense_best_f = v;
                dense_best = i;
            }
        }
        lo = std::max(1e-9, (dense_best - 1) / static_cast<double>(n_dense));
        hi = std::min(1.0 - 1e-9, (dense_best + 1) / static_cast<double>(n_dense));
    }
    result.gamma_star = golden_max(f, lo, hi, kGammaTol, evals);
    result.value = f(result.gamma_star);
    result.evaluations = evals + 1;
    return result;
}

}  // namespace

LadderSpec LadderSpec::make(int k, double gamma) {
    if (k < 1) {
        throw InvalidInput("ladder spec: K must be >= 1");
    }
    if (!std::isfinite(gamma) || gamma <= 0.0 || gamma >= 1.0) {
        throw InvalidInput("ladder spec: gamma must lie strictly inside (0, 1)");
    }
    return LadderSpec{k, gamma};
}

std::vector<double> ladder_angles(int k, double gamma) {
    if (k < 1) {
        throw InvalidInput("ladder angles: K must be >= 1");
    }
    require_gamma_range(gamma);
    std::vector<double> angles(static_cast<std::size_t>(k) + 1);
    double sign = 1.0;
    for (int j = 0; j <= k; ++j) {
        angles[static_cast<std::size_t>(j)] = sign * std::atan(std::pow(gamma, j + 0.5));
        sign = -sign;
    }
    return angles;
}

std::vector<double> ladder_angles(const LadderSpec& spec) {
    return ladder_angles(spec.k, spec.gamma);
}

std::vector<AnalyzerSetting> ladder_settings(const LadderSpec& spec) {
    const auto theta = ladder_angles(spec);
    const auto at = [&](int j) { return theta[static_cast<std::size_t>(j)]; };

    std::vector<AnalyzerSetting> settings;
    settings.reserve(2 * static_cast<std::size_t>(spec.k) + 2);
    settings.push_back({at(spec.k), at(spec.k)});
    settings.push_back({at(0), at(0)});
    for (int k = 1; k <= spec.k; ++k) {
        const double perp_prev = perp(at(k - 1));
        settings.push_back({at(k), perp_prev});
        settings.push_back({perp_prev, at(k)});
    }
    return settings;
}

LadderResult evaluate_ladder(const DensityMatrix& rho, const LadderSpec& spec) {
    LadderResult result;
    result.settings = ladder_settings(spec);
    result.p_k = joint_prob(rho, result.settings[0]);
    result.terms.reserve(result.settings.size() - 1);
    double sum = 0.0;
    for (std::size_t i = 1; i < result.settings.size(); ++i) {
        const double term = joint_prob(rho, result.settings[i]);
        result.terms.push_back(term);
        sum += term;
    }
    result.script_p = sum;
    result.margin = result.p_k - result.script_p;
    return result;
}

double pk_ideal(int k, double gamma) {
    if (k < 1) {
        throw InvalidInput("pk_ideal: K must be >= 1");
    }
    require_gamma_range(gamma);
    const double g2k = std::pow(gamma, 2 * k);
    const double g2k1 = std::pow(gamma, 2 * k + 1);
    const double num = gamma * gamma * (1.0 - g2k) * (1.0 - g2k);
    const double den = (1.0 + gamma * gamma) * (1.0 + g2k1) * (1.0 + g2k1);
    return num / den;
}

double pk_ideal(const LadderSpec& spec) { return pk_ideal(spec.k, spec.gamma); }

double ladder_pk(const DensityMatrix& rho, int k, double gamma) {
    const auto theta = ladder_angles(k, gamma);
    const double t = theta[static_cast<std::size_t>(k)];
    return joint_prob(rho, {t, t});
}

OptimizeResult optimize_gamma(int k, const RhoFactory& rho_factory,
                              LadderObjective objective) {
    if (k < 1) {
        throw InvalidInput("optimize_gamma: K must be >= 1");
    }
    return maximize_over_gamma([&](double g) {
        const LadderResult r = evaluate_ladder(rho_factory(g), LadderSpec::make(k, g));
        return objective == LadderObjective::pk ? r.p_k : r.margin;
    });
}

OptimizeResult optimize_gamma(int k, LadderObjective objective) {
    if (k < 1) {
        throw InvalidInput("optimize_gamma: K must be >= 1");
    }
    if (objective == LadderObjective::pk) {
        // Ideal pure state: the closed form is the objective.
        return maximize_over_gamma([k](double g) { return pk_ideal(k, g); });
    }
    return optimize_gamma(
        k, [](double g) { return pure_state(state_from_gamma(g, kPi)); }, objective);
}

double violation_sigma(const Uncertain& p_k, const Uncertain& script_p) {
    if (!(p_k.sigma > 0.0) || !(script_p.sigma > 0.0)) {
        throw InvalidInput("violation_sigma: both uncertainties must be positive");
    }
    return (p_k.value - script_p.value) / std::hypot(p_k.sigma, script_p.sigma);
}

}  // namespace epr
