#include "epr/states.hpp"

#include <cmath>
#include <sstream>

namespace epr {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

PureTwoQubit PureTwoQubit::make(double alpha, double beta, double phi) {
    if (!finite(alpha) || !finite(beta) || !finite(phi)) {
        throw InvalidInput("pure state: non-finite parameter");
    }
    if (alpha < 0.0 || beta < 0.0) {
        throw InvalidInput("pure state: amplitudes must be nonnegative");
    }
    const double norm = alpha * alpha + beta * beta;
    if (std::abs(norm - 1.0) > kNormTol) {
        std::ostringstream msg;
        msg << "pure state: alpha^2 + beta^2 = " << norm << " deviates from 1 by more than " << kNormTol;
        throw InvalidInput(msg.str());
    }
    return PureTwoQubit{alpha, beta, phi};
}

NoiseModel NoiseModel::make(double visibility, NoiseKind kind) {
    if (!finite(visibility) || visibility < 0.0 || visibility > 1.0) {
        throw InvalidInput("noise model: visibility must lie in [0, 1]");
    }
    return NoiseModel{visibility, kind};
}

DensityMatrix DensityMatrix::from_matrix(const Matrix4c& m) {
    const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > kHermitianTol) {
        std::ostringstream msg;
        msg << "density matrix: not Hermitian (max deviation " << herm_dev << ")";
        throw InvalidInput(msg.str());
    }
    const std::complex<double> tr = m.trace();
    if (std::abs(tr - std::complex<double>(1.0, 0.0)) > kTraceTol) {
        std::ostringstream msg;
        msg << "density matrix: trace " << tr.real() << " deviates from 1";
        throw InvalidInput(msg.str());
    }
    // Eigenvalues of the Hermitian part; entrywise Hermiticity already holds.
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(0.5 * (m + m.adjoint()),
                                                   Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kPsdTol) {
        std::ostringstream msg;
        msg << "density matrix: not positive semidefinite (min eigenvalue " << min_eig << ")";
        throw InvalidInput(msg.str());
    }
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(0.25 * Matrix4c::Identity());
}

DensityMatrix pure_state(const PureTwoQubit& p) {
    PureTwoQubit::make(p.alpha, p.beta, p.phi);  // revalidate
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(0) = p.alpha;
    v(3) = std::polar(p.beta, p.phi);
    return DensityMatrix::from_matrix(v * v.adjoint());
}

DensityMatrix apply_noise(const PureTwoQubit& p, const NoiseModel& n) {
    PureTwoQubit::make(p.alpha, p.beta, p.phi);
    NoiseModel::make(n.visibility, n.kind);
    Matrix4c m = pure_state(p).entries();
    switch (n.kind) {
        case NoiseKind::colored:
            m(0, 3) *= n.visibility;
            m(3, 0) *= n.visibility;
            break;
        case NoiseKind::white:
            m = n.visibility * m + (1.0 - n.visibility) * 0.25 * Matrix4c::Identity();
            break;
    }
    return DensityMatrix::from_matrix(m);
}

double purity(const DensityMatrix& rho) {
    return (rho.entries() * rho.entries()).trace().real();
}

double gamma_of(const PureTwoQubit& p) {
    if (p.beta <= 0.0) {
        throw InvalidInput("gamma_of: beta = 0, degenerate product state");
    }
    return p.alpha / p.beta;
}

double gamma_from_pump_angle(double theta_p) {
    constexpr double quarter_pi = 0.78539816339744830961;
    if (!std::isfinite(theta_p) || theta_p < 0.0 || theta_p > quarter_pi) {
        throw InvalidInput("pump angle must lie in [0, pi/4]");
    }
    return std::cos(2.0 * theta_p);
}

PureTwoQubit state_from_gamma(double gamma, double phi) {
    if (!std::isfinite(gamma) || gamma < 0.0) {
        throw InvalidInput("state_from_gamma: gamma must be finite and >= 0");
    }
    const double denom = std::sqrt(1.0 + gamma * gamma);
    return PureTwoQubit::make(gamma / denom, 1.0 / denom, phi);
}

}  // namespace epr
