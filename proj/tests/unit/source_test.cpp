#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "epr/source.hpp"

using namespace epr;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Phasor-sum oracle for the effective visibility.
double phasor_visibility(const std::vector<ModePair>& modes, const Aperture& ap) {
    std::complex<double> sum = 0.0;
    double weight = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double wa = modes[i].weight * ap.acceptance[i];
        sum += wa * std::polar(1.0, modes[i].phase);
        weight += wa;
    }
    return std::abs(sum) / weight;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path(std::filesystem::temp_directory_path() / name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

}  // namespace

TEST_CASE("collection_efficiency: open, closed, half") {
    const std::vector<ModePair> modes = {{1.0, 0.0}, {1.0, 0.5}};
    CHECK(collection_efficiency(modes, Aperture::open(2)) == doctest::Approx(1.0));
    CHECK(collection_efficiency(modes, Aperture::uniform(2, 0.0)) == doctest::Approx(0.0));
    CHECK(collection_efficiency(modes, Aperture{{1.0, 0.0}}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(collection_efficiency(modes, Aperture::open(3)), InvalidInput);
}

TEST_CASE("collection_efficiency: monotone under pointwise-larger acceptance") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ModePair> modes(16);
        Aperture lo, hi;
        for (auto& m : modes) {
            m.weight = u(rng);
            m.phase = 2.0 * kPi * u(rng);
            const double a = u(rng);
            lo.acceptance.push_back(a * u(rng));
            hi.acceptance.push_back(a);
        }
        modes[0].weight += 1e-3;  // keep total weight positive
        CHECK(collection_efficiency(modes, lo) <=
              collection_efficiency(modes, hi) + 1e-14);
    }
}

TEST_CASE("collected_state: coherent sum of identical phases is pure") {
    const auto p = state_from_gamma(0.8, kPi);
    std::vector<ModePair> modes(5, ModePair{2.0, 0.7});
    const auto rho = collected_state(modes, Aperture::open(5), p);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collected_state: opposite phasors cancel at alpha = beta") {
    const auto p = PureTwoQubit::make(kInvSqrt2, kInvSqrt2, kPi);
    const std::vector<ModePair> modes = {{1.0, 0.0}, {1.0, kPi}};
    const auto ap = Aperture::open(2);
    CHECK(effective_visibility(modes, ap) <= 1e-15);
    CHECK(purity(collected_state(modes, ap, p)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("collected_state: 64-mode linear phase ramp over [0, pi/2)") {
    const auto modes = phase_ramp_modes(64, kPi / 2);
    const auto ap = Aperture::open(64);
    const double oracle = phasor_visibility(modes, ap);
    CHECK(oracle == doctest::Approx(0.9003).epsilon(2e-4));
    CHECK(effective_visibility(modes, ap) == doctest::Approx(oracle).epsilon(1e-12));

    const auto p = PureTwoQubit::make(kInvSqrt2, kInvSqrt2, kPi);
    const auto rho = collected_state(modes, ap, p);
    CHECK(purity(rho) ==
          doctest::Approx((1.0 + oracle * oracle) / 2.0).epsilon(1e-10));
}

TEST_CASE("collected_state: equals colored noise at V_eff on the HH/VV block") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ModePair> modes(32);
        Aperture ap;
        for (auto& m : modes) {
            m.weight = 0.1 + u(rng);
            m.phase = 2.0 * u(rng);  // sub-period spread keeps V_eff > 0
            ap.acceptance.push_back(0.2 + 0.8 * u(rng));
        }
        const double a2 = u(rng);
        const auto p = PureTwoQubit::make(std::sqrt(a2), std::sqrt(1.0 - a2), kPi);
        const double v_eff = effective_visibility(modes, ap);
        const auto collected = collected_state(modes, ap, p);
        const auto reference =
            apply_noise(p, NoiseModel::make(v_eff, NoiseKind::colored));
        // Same populations; coherence magnitudes agree up to a global phase.
        CHECK(std::abs(collected(0, 0) - reference(0, 0)) <= 1e-10);
        CHECK(std::abs(collected(3, 3) - reference(3, 3)) <= 1e-10);
        CHECK(std::abs(std::abs(collected(0, 3)) - std::abs(reference(0, 3))) <= 1e-10);
    }
}

TEST_CASE("collected_state: single accepted mode is always pure") {
    const auto p = state_from_gamma(0.5, 1.3);
    std::vector<ModePair> modes = {{1.0, 0.4}, {2.0, 1.9}, {0.5, 2.6}};
    Aperture ap{{0.0, 1.0, 0.0}};
    CHECK(purity(collected_state(modes, ap, p)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(effective_visibility(modes, ap) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collected_state: fully blocked aperture is a degenerate selection") {
    const auto p = state_from_gamma(1.0, kPi);
    std::vector<ModePair> modes = {{1.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(collected_state(modes, Aperture::uniform(2, 0.0), p), InvalidInput);
    CHECK_THROWS_AS(effective_visibility(modes, Aperture::uniform(2, 0.0)), InvalidInput);
}

TEST_CASE("load_modes_csv: header, comments, malformed rows") {
    TempFile good("epr_modes_good.csv",
                  "weight,phase_radians\n# comment\n1.0,0.0\n2.0,1.5708\n\n0.5,3.14\n");
    const auto modes = load_modes_csv(good.path);
    REQUIRE(modes.size() == 3);
    CHECK(modes[1].weight == doctest::Approx(2.0));
    CHECK(modes[1].phase == doctest::Approx(1.5708));

    TempFile bad("epr_modes_bad.csv", "1.0,0.0\nnope,0.7\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(load_modes_csv(bad.path)),
                         doctest::Contains("line 2"), DataError);

    TempFile negative("epr_modes_neg.csv", "-1.0,0.0\n");
    CHECK_THROWS_AS(static_cast<void>(load_modes_csv(negative.path)), DataError);

    TempFile empty("epr_modes_empty.csv", "");
    CHECK_THROWS_AS(static_cast<void>(load_modes_csv(empty.path)), DataError);
}

TEST_CASE("load_aperture_csv: values clamped to [0, 1] are enforced") {
    TempFile good("epr_ap_good.csv", "1.0\n0.25\n0\n");
    const auto ap = load_aperture_csv(good.path);
    REQUIRE(ap.acceptance.size() == 3);
    CHECK(ap.acceptance[1] == doctest::Approx(0.25));

    TempFile bad("epr_ap_bad.csv", "0.5\n1.5\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(load_aperture_csv(bad.path)),
                         doctest::Contains("line 2"), DataError);
}
