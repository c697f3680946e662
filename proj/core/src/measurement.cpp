#include "epr/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "epr/errors.hpp"

namespace epr {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector4cd joint_ket(double theta_a, double theta_b) {
    const double ca = std::cos(theta_a), sa = std::sin(theta_a);
    const double cb = std::cos(theta_b), sb = std::sin(theta_b);
    Eigen::Vector4cd v;
    v << ca * cb, ca * sb, sa * cb, sa * sb;  // (HH, HV, VH, VV)
    return v;
}

}  // namespace

double reduce_mod_pi(double theta) {
    double r = std::fmod(theta, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r -= kPi;  // fmod rounding at the boundary
    return r;
}

double perp(double theta) { return reduce_mod_pi(theta + 0.5 * kPi); }

double angle_distance_mod_pi(double x, double y) {
    double d = std::abs(reduce_mod_pi(x) - reduce_mod_pi(y));
    return std::min(d, kPi - d);
}

AnalyzerSetting AnalyzerSetting::canonical() const {
    return AnalyzerSetting{reduce_mod_pi(theta_a), reduce_mod_pi(theta_b)};
}

bool settings_match(const AnalyzerSetting& lhs, const AnalyzerSetting& rhs, double tol) {
    return angle_distance_mod_pi(lhs.theta_a, rhs.theta_a) <= tol &&
           angle_distance_mod_pi(lhs.theta_b, rhs.theta_b) <= tol;
}

double joint_prob(const DensityMatrix& rho, const AnalyzerSetting& s) {
    const Eigen::Vector4cd v = joint_ket(s.theta_a, s.theta_b);
    const double p = (v.adjoint() * rho.entries() * v).value().real();
    return std::clamp(p, 0.0, 1.0);
}

OutcomeProbs outcome_probs(const DensityMatrix& rho, const AnalyzerSetting& s) {
    const double a = s.theta_a, b = s.theta_b;
    const double ap = a + 0.5 * kPi, bp = b + 0.5 * kPi;
    return OutcomeProbs{
        joint_prob(rho, {a, b}),
        joint_prob(rho, {a, bp}),
        joint_prob(rho, {ap, b}),
        joint_prob(rho, {ap, bp}),
    };
}

double correlation(const DensityMatrix& rho, const AnalyzerSetting& s) {
    const OutcomeProbs o = outcome_probs(rho, s);
    return o.pp - o.pb - o.bp + o.bb;
}

std::vector<FringePoint> fringe(const DensityMatrix& rho, double theta_b,
                                const std::vector<double>& theta_a_grid) {
    if (theta_a_grid.empty()) {
        throw InvalidInput("fringe: empty angle grid");
    }
    std::vector<FringePoint> out;
    out.reserve(theta_a_grid.size());
    for (double theta_a : theta_a_grid) {
        out.push_back({theta_a, joint_prob(rho, {theta_a, theta_b})});
    }
    return out;
}

double visibility_of(const std::vector<double>& series) {
    if (series.empty()) {
        throw InvalidInput("visibility: empty series");
    }
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double sum = *hi + *lo;
    if (sum <= 0.0) {
        throw InvalidInput("visibility: undefined for an all-zero series");
    }
    return (*hi - *lo) / sum;
}

double visibility_of(const std::vector<FringePoint>& series) {
    std::vector<double> values;
    values.reserve(series.size());
    for (const auto& p : series) values.push_back(p.probability);
    return visibility_of(values);
}

}  // namespace epr
