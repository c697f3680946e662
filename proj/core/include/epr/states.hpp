#pragma once

#include <complex>

#include <Eigen/Dense>

#include "epr/errors.hpp"

namespace epr {

/// 4x4 complex matrix over the two-photon polarization space.
/// Basis order is fixed project-wide as (HH, HV, VH, VV).
using Matrix4c = Eigen::Matrix4cd;

// Tolerances: structural invariants at 1e-10, exact identities at 1e-12.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Pure two-photon polarization state  alpha|HH> + e^{i phi} beta|VV>.
///
/// Amplitudes are real and nonnegative with alpha^2 + beta^2 = 1; the relative
/// phase phi carries the sign convention (phi = pi gives the minus-sign state).
/// alpha > beta is permitted: the entanglement degree gamma = alpha/beta may
/// exceed 1 in exploratory sweeps even though the ladder operations restrict
/// themselves to gamma in (0, 1).
struct PureTwoQubit {
    double alpha = 1.0;
    double beta = 0.0;
    double phi = 0.0;  // radians

    /// Validates and constructs. Throws InvalidInput if an amplitude is
    /// negative or non-finite, or if alpha^2 + beta^2 deviates from 1 by more
    /// than 1e-12.
    static PureTwoQubit make(double alpha, double beta, double phi);
};

enum class NoiseKind {
    colored,  // damps only the HH<->VV coherence, populations untouched
    white,    // mixes with the maximally mixed state
};

/// Phenomenological decoherence model parametrized by the coincidence
/// visibility V in [0, 1]. V = 1 is noiseless.
struct NoiseModel {
    double visibility = 1.0;
    NoiseKind kind = NoiseKind::colored;

    static NoiseModel make(double visibility, NoiseKind kind);
};

/// Immutable two-qubit density matrix, the substrate all predictions are
/// computed from. Construction validates Hermiticity (entrywise 1e-10),
/// unit trace (1e-10) and positive semidefiniteness (smallest eigenvalue
/// >= -1e-10).
class DensityMatrix {
public:
    static DensityMatrix from_matrix(const Matrix4c& m);
    static DensityMatrix maximally_mixed();

    const Matrix4c& entries() const { return m_; }
    std::complex<double> operator()(int row, int col) const { return m_(row, col); }

private:
    explicit DensityMatrix(Matrix4c m) : m_(std::move(m)) {}
    Matrix4c m_;
};

/// Rank-1 density matrix of the vector (alpha, 0, 0, e^{i phi} beta).
DensityMatrix pure_state(const PureTwoQubit& p);

/// Noise-degraded state.
///   colored: diag(alpha^2, 0, 0, beta^2) with HH<->VV coherences
///            V * alpha * beta * e^{-+ i phi}
///   white:   V * rho_pure + (1 - V) * I/4
DensityMatrix apply_noise(const PureTwoQubit& p, const NoiseModel& n);

/// Tr(rho^2); equals 1 iff the state is rank-1 (up to tolerance).
double purity(const DensityMatrix& rho);

/// Entanglement degree gamma = alpha/beta. Throws InvalidInput when beta = 0
/// (degenerate product state, gamma undefined).
double gamma_of(const PureTwoQubit& p);

/// Pump-waveplate tuning: gamma = cos(2 theta_p) for theta_p in [0, pi/4].
/// The |HH> emission efficiency scales as cos^2(2 theta_p), so the amplitude
/// ratio scales as cos(2 theta_p).
double gamma_from_pump_angle(double theta_p);

/// State with a prescribed entanglement degree:
///   alpha = gamma / sqrt(1 + gamma^2),  beta = 1 / sqrt(1 + gamma^2).
/// Accepts any finite gamma >= 0; gamma_of(state_from_gamma(g, phi)) == g.
PureTwoQubit state_from_gamma(double gamma, double phi);

}  // namespace epr
