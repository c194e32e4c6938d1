#ifndef HEOM_TM_MODES_HPP
#define HEOM_TM_MODES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "heom/bath.hpp"
#include "heom/correlation.hpp"
#include "heom/exp_fit.hpp"

namespace heom {

/// Decay modes from the upper-half-plane poles of an Ohmic-Lorentzian sum:
/// two per term, at gamma = +-Omega + i Gamma. The conjugate-channel
/// coefficients pair crosswise: the expansion of conj(C) at rate gamma_l1
/// carries conj(alpha_l2) and vice versa.
inline std::vector<DecayMode> tm_pole_modes(
    const std::vector<TannorMeierTerm>& terms, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    std::vector<DecayMode> modes;
    modes.reserve(2 * terms.size());
    for (std::size_t l = 0; l < terms.size(); ++l) {
        const auto& term = terms[l];
        const Complex z(term.Omega, term.Gamma);
        const double pref = term.p / (8.0 * term.Omega * term.Gamma);
        Complex c1, c2;
        try {
            c1 = coth(0.5 * beta * z);
            c2 = coth(0.5 * beta * std::conj(z));
        } catch (const std::domain_error&) {
            throw std::runtime_error(
                "tm_pole_modes: coth pole hit for Lorentzian term " +
                std::to_string(l));
        }
        const Complex alpha1 = pref * (c1 - 1.0);
        const Complex alpha2 = pref * (c2 + 1.0);
        modes.push_back({alpha1, Complex(term.Omega, term.Gamma),
                         std::conj(alpha2), ModeFamily::LorentzPole});
        modes.push_back({alpha2, Complex(-term.Omega, term.Gamma),
                         std::conj(alpha1), ModeFamily::LorentzPole});
    }
    return modes;
}

/// Matsubara modes gamma_n = i 2 pi n / beta with alpha_n = 2i J(i nu_n)/beta,
/// real by the antisymmetry of J. Their contribution to C(t) is real.
inline std::vector<DecayMode> matsubara_modes(
    const std::vector<TannorMeierTerm>& terms, double beta, int count) {
    if (count < 0) throw std::invalid_argument("Matsubara count must be >= 0");
    std::vector<DecayMode> modes;
    modes.reserve(static_cast<std::size_t>(count));
    const double two_pi = 6.28318530717958647692;
    for (int n = 1; n <= count; ++n) {
        const double nu = two_pi * static_cast<double>(n) / beta;
        Complex j(0.0, 0.0);
        for (const auto& term : terms) {
            const double d1 = term.Omega * term.Omega + term.Gamma * term.Gamma -
                              nu * nu;
            const double d2 = 2.0 * term.Omega * nu;
            const double den = d1 * d1 + d2 * d2;
            const double scale = term.Omega * term.Omega + term.Gamma * term.Gamma;
            if (den < 1e-12 * scale * scale)
                throw std::runtime_error(
                    "matsubara_modes: nu_" + std::to_string(n) +
                    " coincides with a Lorentzian pole (double pole unsupported)");
            j += term(Complex(0.0, nu));
        }
        const Complex alpha = 2.0 * Complex(0.0, 1.0) * j / beta;
        // i J(i nu) is real for a real-coefficient density; drop the rounding
        modes.push_back({Complex(alpha.real(), 0.0), Complex(0.0, nu),
                         Complex(alpha.real(), 0.0), ModeFamily::Matsubara});
    }
    return modes;
}

/// C_Matsu(t) = sum_n alpha_n e^{-nu_n t} on the given grid; real and, for
/// Ohmic-Lorentzian densities, negative.
inline std::vector<double> matsubara_tail(
    const std::vector<TannorMeierTerm>& terms, double beta, int count,
    const std::vector<double>& times) {
    const auto modes = matsubara_modes(terms, beta, count);
    if (!modes.empty()) {
        // tail estimate against the magnitude of C(0)
        const auto poles = tm_pole_modes(terms, beta);
        double c0 = 0.0;
        for (const auto& m : poles) c0 += std::abs(m.alpha);
        const auto& last = modes.back();
        const double estimate =
            std::abs(last.alpha) / last.gamma.imag();
        if (estimate > 1e-12 * c0)
            throw std::runtime_error(
                "matsubara_tail: series not converged at count " +
                std::to_string(count) + "; increase the Matsubara count");
    }
    std::vector<double> out(times.size(), 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        double s = 0.0;
        for (const auto& m : modes)
            s += m.alpha.real() * std::exp(-m.gamma.imag() * times[i]);
        out[i] = s;
    }
    return out;
}

/// Smallest count whose slowest retained frequency resolves the horizon and
/// whose tail estimate passes the matsubara_tail precondition.
inline int auto_matsubara_count(const std::vector<TannorMeierTerm>& terms,
                                double beta, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
    const double two_pi = 6.28318530717958647692;
    const int n_min = static_cast<int>(
        std::ceil(50.0 / horizon * beta / two_pi));
    const auto poles = tm_pole_modes(terms, beta);
    double c0 = 0.0;
    for (const auto& m : poles) c0 += std::abs(m.alpha);
    int n = std::max(n_min, 1);
    for (; n < 100000000; n = n < 16 ? n + 1 : n + n / 8) {
        const double nu = two_pi * static_cast<double>(n) / beta;
        Complex j(0.0, 0.0);
        for (const auto& term : terms) j += term(Complex(0.0, nu));
        const double alpha = std::abs(2.0 * j / beta);
        if (alpha / nu < 1e-12 * c0) return n;
    }
    throw std::runtime_error("auto_matsubara_count did not converge");
}

/// Pole modes plus a few real exponentials fitted to the Matsubara tail.
/// Fitted modes enter the hierarchy exactly like Matsubara modes (commutator
/// coupling, alpha_tilde = alpha).
inline std::vector<DecayMode> tm_fit_modes(
    const std::vector<TannorMeierTerm>& terms, double beta, int matsubara_count,
    int k_fit, double horizon, ExponentialFit* fit_out = nullptr) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
    std::vector<DecayMode> modes = tm_pole_modes(terms, beta);
    if (k_fit == 0) {
        if (matsubara_count > 0) {
            auto matsu = matsubara_modes(terms, beta, matsubara_count);
            modes.insert(modes.end(), matsu.begin(), matsu.end());
        }
        return modes;
    }
    const int count = matsubara_count > 0
                          ? matsubara_count
                          : auto_matsubara_count(terms, beta, horizon);
    const auto grid = linspace(0.0, horizon, 2000);
    const auto tail = matsubara_tail(terms, beta, count, grid);
    const ExponentialFit fit = fit_exponentials(grid, tail, k_fit);
    if (fit_out) *fit_out = fit;
    for (const auto& term : fit.terms)
        modes.push_back({Complex(term.a, 0.0), Complex(0.0, term.b),
                         Complex(term.a, 0.0), ModeFamily::FittedExp});
    return modes;
}

}  // namespace heom

#endif  // HEOM_TM_MODES_HPP
