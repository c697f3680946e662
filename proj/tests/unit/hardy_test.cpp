#include <doctest.h>

#include <cmath>
#include <random>

#include "epr/hardy.hpp"
#include "../support/random_states.hpp"

using namespace epr;

namespace {

constexpr double kPi = 3.14159265358979323846;

DensityMatrix ideal_state(double gamma) {
    return pure_state(state_from_gamma(gamma, kPi));
}

// Dense-grid oracle for the gamma optimization, step 1e-5.
std::pair<double, double> grid_max_pk(int k) {
    double best_g = 0.0, best_v = -1.0;
    for (int i = 1; i < 100000; ++i) {
        const double g = i * 1e-5;
        const double v = pk_ideal(k, g);
        if (v > best_v) {
            best_v = v;
            best_g = g;
        }
    }
    return {best_g, best_v};
}

}  // namespace

TEST_CASE("ladder_angles: formula values, decay and alternation") {
    CHECK(ladder_angles(1, 1.0)[0] == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(ladder_angles(1, 0.25)[1] ==
          doctest::Approx(-std::atan(0.125)).epsilon(1e-14));
    CHECK(ladder_angles(1, 0.5)[0] ==
          doctest::Approx(std::atan(1.0 / std::sqrt(2.0))).epsilon(1e-14));
    CHECK(ladder_angles(1, 0.5)[0] == doctest::Approx(0.61548).epsilon(1e-5));

    const auto angles = ladder_angles(12, 0.83);
    for (std::size_t j = 1; j < angles.size(); ++j) {
        CHECK(std::abs(angles[j]) < std::abs(angles[j - 1]));
        CHECK(angles[j] * angles[j - 1] < 0.0);  // alternating signs
    }
}

TEST_CASE("ladder_settings: exactly 2K+2 settings") {
    CHECK(ladder_settings(LadderSpec::make(1, 0.5)).size() == 4);
    CHECK(ladder_settings(LadderSpec::make(4, 0.5)).size() == 10);
    CHECK(ladder_settings(LadderSpec::make(20, 0.5)).size() == 42);
}

TEST_CASE("LadderSpec: domain validation") {
    CHECK_THROWS_AS(LadderSpec::make(0, 0.5), InvalidInput);
    CHECK_THROWS_AS(LadderSpec::make(3, 0.0), InvalidInput);
    CHECK_THROWS_AS(LadderSpec::make(3, 1.0), InvalidInput);
    CHECK_NOTHROW(LadderSpec::make(3, 0.999));
}

TEST_CASE("evaluate_ladder: ideal state zeroes every RHS term") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> gamma_dist(0.05, 0.95);
    std::uniform_int_distribution<int> k_dist(1, 25);
    for (int i = 0; i < 40; ++i) {
        const auto spec = LadderSpec::make(k_dist(rng), gamma_dist(rng));
        const auto result = evaluate_ladder(ideal_state(spec.gamma), spec);
        for (double term : result.terms) CHECK(term <= 1e-12);
        CHECK(result.script_p <= 1e-12);
        CHECK(result.margin == doctest::Approx(result.p_k).epsilon(1e-10));
        CHECK(result.p_k > 0.0);
    }
}

TEST_CASE("evaluate_ladder: no violation at gamma -> 1 or from white noise") {
    const auto near_maximal = LadderSpec::make(5, 0.999999);
    CHECK(evaluate_ladder(ideal_state(near_maximal.gamma), near_maximal).p_k < 1e-9);

    const auto spec = LadderSpec::make(4, 0.6);
    const auto mixed = evaluate_ladder(DensityMatrix::maximally_mixed(), spec);
    for (double term : mixed.terms) CHECK(term == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(mixed.margin == doctest::Approx(0.25 - 9 * 0.25).epsilon(1e-10));
    CHECK(mixed.margin < 0.0);
}

TEST_CASE("evaluate_ladder: terms stay in [0, 1] and script_p is their sum") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> gamma_dist(0.05, 0.95);
    std::uniform_int_distribution<int> k_dist(1, 20);
    for (int i = 0; i < 50; ++i) {
        const auto spec = LadderSpec::make(k_dist(rng), gamma_dist(rng));
        const auto rho = testsupport::random_density_matrix(rng);
        const auto result = evaluate_ladder(rho, spec);
        double sum = 0.0;
        for (double term : result.terms) {
            CHECK(term >= 0.0);
            CHECK(term <= 1.0);
            sum += term;
        }
        CHECK(result.p_k >= 0.0);
        CHECK(result.p_k <= 1.0);
        CHECK(result.script_p == doctest::Approx(sum).epsilon(1e-12));
        CHECK(result.terms.size() == 2 * static_cast<std::size_t>(spec.k) + 1);
    }
}

TEST_CASE("pk_ideal: endpoints vanish; closed form matches the trace route") {
    CHECK(pk_ideal(4, 0.0) == doctest::Approx(0.0));
    CHECK(pk_ideal(4, 1.0) == doctest::Approx(0.0));

    const auto spec = LadderSpec::make(1, 0.5);
    CHECK(pk_ideal(spec) ==
          doctest::Approx(evaluate_ladder(ideal_state(0.5), spec).p_k).epsilon(1e-10));

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> gamma_dist(0.01, 0.99);
    std::uniform_int_distribution<int> k_dist(1, 25);
    for (int i = 0; i < 100; ++i) {
        const auto s = LadderSpec::make(k_dist(rng), gamma_dist(rng));
        const double via_trace = evaluate_ladder(ideal_state(s.gamma), s).p_k;
        CHECK(std::abs(pk_ideal(s) - via_trace) <= 1e-10);
    }
}

TEST_CASE("ladder_pk: agrees with evaluate_ladder's LHS") {
    const auto spec = LadderSpec::make(7, 0.77);
    const auto rho = ideal_state(spec.gamma);
    CHECK(ladder_pk(rho, spec.k, spec.gamma) ==
          doctest::Approx(evaluate_ladder(rho, spec).p_k).epsilon(1e-14));
}

TEST_CASE("optimize_gamma: K=1 reaches the known maximum") {
    const auto result = optimize_gamma(1);
    CHECK(result.value == doctest::Approx(0.09017).epsilon(1e-4));
    // (5 sqrt(5) - 11) / 2
    CHECK(result.value ==
          doctest::Approx((5.0 * std::sqrt(5.0) - 11.0) / 2.0).epsilon(1e-9));
    CHECK_FALSE(result.grid_fallback);

    const auto [grid_g, grid_v] = grid_max_pk(1);
    CHECK(std::abs(result.gamma_star - grid_g) <= 1e-4);
    CHECK(result.value >= grid_v - 1e-12);
}

TEST_CASE("optimize_gamma: maxima increase with K and stay below 1/2") {
    double previous = 0.0;
    for (int k : {1, 2, 4, 5, 10, 20}) {
        const auto result = optimize_gamma(k);
        CHECK(result.value > previous);
        CHECK(result.value < 0.5);
        previous = result.value;
    }
    const auto k20 = optimize_gamma(20);
    CHECK(k20.value > 0.40);
    CHECK(k20.value < 0.45);
}

TEST_CASE("optimize_gamma: deterministic; factory route matches closed form") {
    const auto a = optimize_gamma(5);
    const auto b = optimize_gamma(5);
    CHECK(a.gamma_star == b.gamma_star);
    CHECK(a.value == b.value);

    const auto via_factory = optimize_gamma(
        5, [](double g) { return ideal_state(g); }, LadderObjective::pk);
    CHECK(via_factory.gamma_star == doctest::Approx(a.gamma_star).epsilon(1e-6));
    CHECK(via_factory.value == doctest::Approx(a.value).epsilon(1e-9));
}

TEST_CASE("optimize_gamma: margin objective under white noise stays interior") {
    const auto result = optimize_gamma(
        4,
        [](double g) {
            return apply_noise(state_from_gamma(g, kPi),
                               NoiseModel::make(0.95, NoiseKind::white));
        },
        LadderObjective::margin);
    CHECK(result.gamma_star > 0.0);
    CHECK(result.gamma_star < 1.0);
    CHECK(result.value > 0.0);  // still violates at 95% visibility
}

TEST_CASE("violation_sigma: reference pairs") {
    CHECK(violation_sigma({0.2586, 0.0041}, {0.1213, 0.0022}) ==
          doctest::Approx(29.508).epsilon(1e-3));
    CHECK(violation_sigma({0.3152, 0.0050}, {0.1184, 0.0022}) ==
          doctest::Approx(36.027).epsilon(1e-3));
    CHECK(violation_sigma({0.3402, 0.0045}, {0.2288, 0.0015}) ==
          doctest::Approx(23.485).epsilon(1e-3));
    CHECK(violation_sigma({0.4132, 0.0053}, {0.2439, 0.0016}) ==
          doctest::Approx(30.580).epsilon(1e-3));
    CHECK(violation_sigma({0.25, 0.01}, {0.25, 0.02}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(violation_sigma({0.3, 0.0}, {0.1, 0.01}), InvalidInput);
}

TEST_CASE("local realism: exhaustive deterministic assignments never violate") {
    // Deterministic local model: each site assigns pass/block to each base
    // angle theta_0..theta_K; the perpendicular analyzer yields the
    // complementary outcome of the same projective measurement.
    for (int k = 1; k <= 3; ++k) {
        const int n_angles = k + 1;
        const int n_assign = 1 << n_angles;
        for (int a_bits = 0; a_bits < n_assign; ++a_bits) {
            for (int b_bits = 0; b_bits < n_assign; ++b_bits) {
                const auto pass_a = [&](int j) { return (a_bits >> j) & 1; };
                const auto pass_b = [&](int j) { return (b_bits >> j) & 1; };
                const int p_kk = pass_a(k) & pass_b(k);
                int rhs = pass_a(0) & pass_b(0);
                for (int j = 1; j <= k; ++j) {
                    rhs += pass_a(j) & (1 - pass_b(j - 1));
                    rhs += (1 - pass_a(j - 1)) & pass_b(j);
                }
                CHECK(p_kk - rhs <= 0);
            }
        }
    }
}
