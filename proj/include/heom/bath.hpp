#ifndef HEOM_BATH_HPP
#define HEOM_BATH_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heom/bose.hpp"
#include "heom/spectral_density.hpp"

namespace heom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline void require_hermitian(const Matrix& m, double tol,
                              const std::string& what) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(what + " must be square");
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (dev > tol * scale)
        throw std::invalid_argument(what + " is not Hermitian (max deviation " +
                                    std::to_string(dev) + ")");
}

/// A bath: temperature-independent J(omega), inverse temperature, and the
/// system operator it couples to.
struct BathSpec {
    SpectralDensity density;
    double beta;
    Matrix coupling;

    BathSpec(SpectralDensity d, double beta_, Matrix s)
        : density(std::move(d)), beta(beta_), coupling(std::move(s)) {
        if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
        require_hermitian(coupling, 1e-14, "bath coupling operator");
    }
};

/// J_beta(omega) = J(omega)(1 + n_beta(omega)): the power spectrum of C(t),
/// defined on both half-axes. At omega = 0 the removable singularity is
/// evaluated as J'(0)/beta.
inline double eval_thermal_sd(const BathSpec& bath, double omega) {
    if (omega == 0.0) return bath.density.slope_at_zero() / bath.beta;
    return bath.density(omega) * bose_occupancy_plus_one(omega, bath.beta);
}

enum class ModeFamily {
    LorentzPole,
    Matsubara,
    FittedExp,
    FreePole,
    DiscretePos,
    DiscreteNeg,
};

inline bool family_is_scaled(ModeFamily f) { return f == ModeFamily::FreePole; }

inline const char* family_name(ModeFamily f) {
    switch (f) {
        case ModeFamily::LorentzPole: return "lorentz-pole";
        case ModeFamily::Matsubara: return "matsubara";
        case ModeFamily::FittedExp: return "fitted-exp";
        case ModeFamily::FreePole: return "free-pole";
        case ModeFamily::DiscretePos: return "discrete-pos";
        case ModeFamily::DiscreteNeg: return "discrete-neg";
    }
    return "?";
}

/// One artificial decay mode of the bath correlation function:
///   C(t)    = sum_k alpha_k       e^{i gamma_k t}
///   conj(C) = sum_k alpha_tilde_k e^{i gamma_k t}
/// alpha drives the left (S rho) lower coupling in the hierarchy and
/// alpha_tilde the right (rho S) one.
struct DecayMode {
    Complex alpha;
    Complex gamma;
    Complex alpha_tilde;
    ModeFamily family;
};

/// Decay rate of the mode contribution |e^{i gamma t}| = e^{-Im(gamma) t}.
inline double mode_decay_rate(const DecayMode& m) { return m.gamma.imag(); }

}  // namespace heom

#endif  // HEOM_BATH_HPP
