#include <doctest.h>

#include <cmath>
#include <random>

#include "epr/bell.hpp"
#include "../support/random_states.hpp"

using namespace epr;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kTsirelson = 2.0 * std::sqrt(2.0);

double deg(double d) { return d * kPi / 180.0; }

DensityMatrix phi_minus_with(double v, NoiseKind kind) {
    return apply_noise(PureTwoQubit::make(kInvSqrt2, kInvSqrt2, kPi),
                       NoiseModel::make(v, kind));
}

}  // namespace

TEST_CASE("CHSHSettings: per-site angles must differ mod pi") {
    CHECK_THROWS_AS(CHSHSettings::make(0.0, kPi, 0.3, 0.7), InvalidInput);
    CHECK_NOTHROW(CHSHSettings::make(0.0, deg(45), deg(157.5), deg(112.5)));
}

TEST_CASE("chsh_s: maximally mixed gives zero, |Phi-> reaches Tsirelson") {
    const auto settings = CHSHSettings::make(0.0, deg(45), deg(157.5), deg(112.5));
    CHECK(chsh_s(DensityMatrix::maximally_mixed(), settings) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(chsh_s(phi_minus_with(1.0, NoiseKind::colored), settings) ==
          doctest::Approx(kTsirelson).epsilon(1e-12));
}

TEST_CASE("chsh_s: invariant under adding pi to any single analyzer angle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (int i = 0; i < 50; ++i) {
        const auto rho = testsupport::random_density_matrix(rng);
        const double a = u(rng), ap = u(rng) + 0.01, b = u(rng), bp = u(rng) + 0.02;
        const CHSHSettings base{a, ap, b, bp};
        const double s0 = chsh_s(rho, base);
        CHECK(chsh_s(rho, {a + kPi, ap, b, bp}) == doctest::Approx(s0).epsilon(1e-12));
        CHECK(chsh_s(rho, {a, ap + kPi, b, bp}) == doctest::Approx(s0).epsilon(1e-12));
        CHECK(chsh_s(rho, {a, ap, b + kPi, bp}) == doctest::Approx(s0).epsilon(1e-12));
        CHECK(chsh_s(rho, {a, ap, b, bp + kPi}) == doctest::Approx(s0).epsilon(1e-12));
    }
}

TEST_CASE("optimal_chsh_settings: |Phi->, separable bound, boundary visibility") {
    const auto bell = optimal_chsh_settings(phi_minus_with(1.0, NoiseKind::colored));
    CHECK(std::abs(bell.s - kTsirelson) <= 1e-6);

    const auto separable = optimal_chsh_settings(pure_state(PureTwoQubit::make(1.0, 0.0, 0.0)));
    CHECK(separable.s <= 2.0 + 1e-9);

    const auto boundary = optimal_chsh_settings(phi_minus_with(kInvSqrt2, NoiseKind::white));
    CHECK(std::abs(boundary.s - 2.0) <= 1e-6);
}

TEST_CASE("optimal_chsh_settings: white-noise law S = 2 sqrt(2) V") {
    for (double v = 0.2; v <= 1.0001; v += 0.1) {
        const auto opt = optimal_chsh_settings(phi_minus_with(std::min(v, 1.0), NoiseKind::white));
        CHECK(std::abs(opt.s - kTsirelson * std::min(v, 1.0)) <= 1e-6);
    }
}

TEST_CASE("optimal_chsh_settings: colored-noise law S = 2 sqrt(1 + V^2)") {
    // Colored noise keeps the perfect cos2a cos2b correlation block, so the
    // optimum is 2 sqrt(1 + V^2), above the local bound for every V > 0.
    for (double v = 0.0; v <= 1.0001; v += 0.25) {
        const double vv = std::min(v, 1.0);
        const auto opt = optimal_chsh_settings(phi_minus_with(vv, NoiseKind::colored));
        CHECK(std::abs(opt.s - 2.0 * std::sqrt(1.0 + vv * vv)) <= 1e-6);
    }
}

TEST_CASE("optimal_chsh_settings: returned S is consistent with chsh_s") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 10; ++i) {
        const auto rho = testsupport::random_density_matrix(rng);
        const auto opt = optimal_chsh_settings(rho);
        CHECK(opt.s == doctest::Approx(chsh_s(rho, opt.settings)).epsilon(1e-12));
    }
}

TEST_CASE("optimal_chsh_settings: Tsirelson bound over random states") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        const auto rho = testsupport::random_density_matrix(rng);
        CHECK(optimal_chsh_settings(rho).s <= kTsirelson + 1e-9);
    }
}

TEST_CASE("quantum/classical boundary: fringe visibility 1/sqrt2 <-> S = 2 (white)") {
    std::vector<double> grid;
    for (int i = 0; i < 360; ++i) grid.push_back(deg(0.5 * i));
    for (double v = 0.05; v < 1.0; v += 0.05) {
        const auto rho = phi_minus_with(v, NoiseKind::white);
        const double vis = visibility_of(fringe(rho, deg(45), grid));
        const double s = optimal_chsh_settings(rho).s;
        CHECK((vis > kInvSqrt2) == (s > 2.0));
    }
}

TEST_CASE("sigma_violation: reference value and edge cases") {
    CHECK(sigma_violation({2.5564, 0.0026}) == doctest::Approx(214.0).epsilon(1e-3));
    CHECK(sigma_violation({2.0, 0.1}) == doctest::Approx(0.0));
    CHECK(sigma_violation({2.8284, 0.01}) == doctest::Approx(82.84).epsilon(1e-3));
    CHECK_THROWS_AS(sigma_violation({2.5, 0.0}), InvalidInput);
}
