#include "epr/bell.hpp"

#include <array>
#include <cmath>
#include <functional>

#include "epr/errors.hpp"

namespace epr {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGoldenRatioConj = 0.61803398874989484820;
constexpr double kAngleTol = 1e-7;  // refinement below the 1e-4 rad contract

// Linear analyzers only probe the sigma_z / sigma_x plane, so every
// correlation is a bilinear form in (cos 2t, sin 2t):
//   E(a, b) = sum_{i,j in {z,x}} c_i(a) c_j(b) T_ij.
struct CorrMatrix {
    double zz, zx, xz, xx;

    double e(double a, double b) const {
        const double cza = std::cos(2.0 * a), sxa = std::sin(2.0 * a);
        const double czb = std::cos(2.0 * b), sxb = std::sin(2.0 * b);
        return cza * czb * zz + cza * sxb * zx + sxa * czb * xz + sxa * sxb * xx;
    }

    double s(const CHSHSettings& st) const {
        return std::abs(e(st.a, st.b) - e(st.a, st.b_prime)) +
               std::abs(e(st.a_prime, st.b) + e(st.a_prime, st.b_prime));
    }
};

CorrMatrix corr_matrix(const DensityMatrix& rho) {
    const double q = 0.25 * kPi;
    return CorrMatrix{
        correlation(rho, {0.0, 0.0}),
        correlation(rho, {0.0, q}),
        correlation(rho, {q, 0.0}),
        correlation(rho, {q, q}),
    };
}

// Golden-section maximization of f over [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    double c = hi - kGoldenRatioConj * (hi - lo);
    double d = lo + kGoldenRatioConj * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > kAngleTol) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kGoldenRatioConj * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kGoldenRatioConj * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CHSHSettings CHSHSettings::make(double a, double a_prime, double b, double b_prime) {
    if (angle_distance_mod_pi(a, a_prime) < 1e-12 ||
        angle_distance_mod_pi(b, b_prime) < 1e-12) {
        throw InvalidInput("CHSH settings: per-site angles must be distinct mod pi");
    }
    return CHSHSettings{a, a_prime, b, b_prime};
}

double chsh_s(const DensityMatrix& rho, const CHSHSettings& s) {
    const double e_ab = correlation(rho, {s.a, s.b});
    const double e_abp = correlation(rho, {s.a, s.b_prime});
    const double e_apb = correlation(rho, {s.a_prime, s.b});
    const double e_apbp = correlation(rho, {s.a_prime, s.b_prime});
    return std::abs(e_ab - e_abp) + std::abs(e_apb + e_apbp);
}

ChshOptimum optimal_chsh_settings(const DensityMatrix& rho) {
    const CorrMatrix t = corr_matrix(rho);

    // Coarse scan: 7.5-degree grid over [0, pi) on all four angles. For fixed
    // (b, b') the two S terms separate over a and a', so the scan is O(n^3).
    constexpr int n = 24;
    constexpr double step = kPi / n;
    std::array<std::array<double, n>, n> e;  // e[a][b]
    for (int ia = 0; ia < n; ++ia) {
        for (int ib = 0; ib < n; ++ib) {
            e[static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)] =
                t.e(ia * step, ib * step);
        }
    }

    double best_s = -1.0;
    int best_ia = 0, best_iap = 1, best_ib = 0, best_ibp = 1;
    for (int ib = 0; ib < n; ++ib) {
        for (int ibp = 0; ibp < n; ++ibp) {
            if (ibp == ib) continue;
            // Top two of each term over the a-axis, so a != a' can always be met.
            int d1 = -1, d2 = -1, s1 = -1, s2 = -1;
            double d1v = -1.0, d2v = -1.0, s1v = -1.0, s2v = -1.0;
            for (int ia = 0; ia < n; ++ia) {
                const auto& row = e[static_cast<std::size_t>(ia)];
                const double dv = std::abs(row[static_cast<std::size_t>(ib)] -
                                           row[static_cast<std::size_t>(ibp)]);
                const double sv = std::abs(row[static_cast<std::size_t>(ib)] +
                                           row[static_cast<std::size_t>(ibp)]);
                if (dv > d1v) {
                    d2v = d1v, d2 = d1;
                    d1v = dv, d1 = ia;
                } else if (dv > d2v) {
                    d2v = dv, d2 = ia;
                }
                if (sv > s1v) {
                    s2v = s1v, s2 = s1;
                    s1v = sv, s1 = ia;
                } else if (sv > s2v) {
                    s2v = sv, s2 = ia;
                }
            }
            double cand;
            int ca, cap;
            if (d1 != s1) {
                cand = d1v + s1v, ca = d1, cap = s1;
            } else if (d1v + s2v >= d2v + s1v) {
                cand = d1v + s2v, ca = d1, cap = s2;
            } else {
                cand = d2v + s1v, ca = d2, cap = s1;
            }
            if (cand > best_s) {
                best_s = cand;
                best_ia = ca;
                best_iap = cap;
                best_ib = ib;
                best_ibp = ibp;
            }
        }
    }

    // Coordinate-descent refinement.
    std::array<double, 4> ang = {best_ia * step, best_iap * step, best_ib * step,
                                 best_ibp * step};
    const auto s_at = [&](const std::array<double, 4>& x) {
        return t.s(CHSHSettings{x[0], x[1], x[2], x[3]});
    };
    double current = s_at(ang);
    double radius = step;
    for (int cycle = 0; cycle < 100; ++cycle) {
        const double before = current;
        for (std::size_t coord = 0; coord < 4; ++coord) {
            auto trial = ang;
            const double center = ang[coord];
            trial[coord] = golden_max(
                [&](double x) {
                    auto probe = ang;
                    probe[coord] = x;
                    return s_at(probe);
                },
                center - radius, center + radius);
            const double value = s_at(trial);
            if (value > current) {
                current = value;
                ang = trial;
            }
        }
        radius = std::max(0.5 * radius, 8.0 * kAngleTol);
        if (current - before < 1e-13) break;
    }

    const CHSHSettings settings = CHSHSettings::make(ang[0], ang[1], ang[2], ang[3]);
    return ChshOptimum{settings, chsh_s(rho, settings)};
}

double sigma_violation(const Uncertain& s) {
    if (!(s.sigma > 0.0)) {
        throw InvalidInput("sigma_violation: sigma must be positive");
    }
    return (s.value - 2.0) / s.sigma;
}

}  // namespace epr
