#ifndef HEOM_DEPHASING_HPP
#define HEOM_DEPHASING_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "heom/bath.hpp"
#include "heom/quadrature.hpp"

namespace heom {

/// Closed-form decoherence of a qubit coupled diagonally to a harmonic bath.
/// For coupling operator S = diag(s1, s2) the coherence obeys
///   |rho_12(t)| / |rho_12(0)|
///     = exp[ -(s1-s2)^2 (1/pi) int_0^inf J(w)/w^2 coth(bw/2) (1-cos wt) dw ].
/// The 1/pi matches the convention C(t) = (1/pi) int J_beta e^{-iwt} dw used
/// throughout; the discrete version below follows from J restricted to a sum
/// of delta peaks, which fixes its 1/2 prefactor.

namespace detail {

inline double sin_half_ratio(double omega, double t) {
    // sin(w t/2) / (w t/2), stable at small arguments
    const double x = 0.5 * omega * t;
    if (std::abs(x) < 1e-8) return 1.0;
    return std::sin(x) / x;
}

}  // namespace detail

inline double dephasing_delta_s(const Matrix& coupling) {
    if (coupling.rows() != 2)
        throw std::invalid_argument("pure dephasing oracle needs a 2x2 coupling");
    if (std::abs(coupling(0, 1)) > 1e-14 || std::abs(coupling(1, 0)) > 1e-14)
        throw std::invalid_argument(
            "pure dephasing oracle needs a diagonal coupling operator");
    return coupling(0, 0).real() - coupling(1, 1).real();
}

/// D(t)/D(0) for a continuous spectral density, each point accurate to tol.
inline std::vector<double> decoherence_analytic(const BathSpec& bath,
                                                const std::vector<double>& times,
                                                double tol = 1e-8) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const double pi = 3.14159265358979323846;
    const double ds = dephasing_delta_s(bath.coupling);
    const double beta = bath.beta;
    const double slope0 = bath.density.slope_at_zero();

    // window: the remaining tail is bounded by int_W 2J/w^2 <= 2 J(W)/W
    double W = bath.density.support_max();
    if (!bath.density.is_tabulated()) {
        while (2.0 * std::abs(bath.density(W)) / W > 0.125 * tol * pi && W < 1e4)
            W *= 1.25;
    }

    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t == 0.0) {
            out[i] = 1.0;
            continue;
        }
        auto f = [&](double w) {
            const double j_over_w = (w == 0.0) ? slope0 : bath.density(w) / w;
            const double r = detail::sin_half_ratio(w, t);
            // coth(bw/2) * 2 sin^2(wt/2) / w, with the 1/w^2 singularity
            // cancelled analytically below |bw| = 2e-4
            const double x = 0.5 * beta * w;
            double g;
            if (std::abs(x) < 1e-4) {
                const double s2_over_w2 = 0.25 * t * t * r * r;  // sin^2/w^2
                const double s2 = s2_over_w2 * w * w;
                g = 4.0 * s2_over_w2 / beta + (beta / 3.0) * s2;
            } else {
                g = coth(x) * 2.0 * (0.25 * t * t * r * r) * w;
            }
            return j_over_w * g;
        };
        const double expo =
            integrate_adaptive(f, 0.0, W, 0.25 * tol * pi,
                               QuadratureOptions{1000000, 48, std::abs(t)}) /
            pi;
        out[i] = std::exp(-ds * ds * expo);
    }
    return out;
}

/// D(t)/D(0) after mapping onto M discrete modes (omega_m, c_m); exact.
inline std::vector<double> decoherence_discrete(
    const std::vector<DiscreteMode>& modes, double beta,
    const std::vector<double>& times, double delta_s = 1.0) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    for (const auto& m : modes)
        if (!(m.omega > 0.0))
            throw std::invalid_argument("discrete mode with omega <= 0");
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        double expo = 0.0;
        for (const auto& m : modes) {
            const double s = std::sin(0.5 * m.omega * t);
            expo += (m.c * m.c) / (m.omega * m.omega * m.omega) *
                    coth(0.5 * beta * m.omega) * 2.0 * s * s;
        }
        out[i] = std::exp(-0.5 * delta_s * delta_s * expo);
    }
    return out;
}

}  // namespace heom

#endif  // HEOM_DEPHASING_HPP
