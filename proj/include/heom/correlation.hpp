#ifndef HEOM_CORRELATION_HPP
#define HEOM_CORRELATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "heom/bath.hpp"
#include "heom/quadrature.hpp"

namespace heom {

struct CorrelationSeries {
    std::vector<double> times;   // a.u., strictly increasing
    std::vector<Complex> values;
};

namespace detail {

/// Frequency window outside which |J_beta| is negligible. The positive tail
/// of an Ohmic-Lorentzian falls off like 1/w^3, so the window is widened until
/// the threshold is met.
struct SupportWindow {
    double lo, hi, peak;
};

inline SupportWindow thermal_support(const BathSpec& bath,
                                     double rel_threshold = 1e-14) {
    const double base = std::max(bath.density.support_max(), 1e-6);
    double peak = std::abs(eval_thermal_sd(bath, 0.0));
    for (int i = 1; i <= 400; ++i) {
        const double w = base * i / 400.0;
        peak = std::max(peak, std::abs(eval_thermal_sd(bath, w)));
    }
    const double thr = rel_threshold * peak;
    double hi = base;
    while (std::abs(eval_thermal_sd(bath, hi)) > thr && hi < 1e6) hi *= 1.25;
    double lo = -base / 64.0;
    while (std::abs(eval_thermal_sd(bath, lo)) > thr && -lo < 1e6) lo *= 1.25;
    if (bath.density.is_tabulated()) {
        hi = std::min(hi, bath.density.table().x_max());
        lo = std::max(lo, -bath.density.table().x_max());
    }
    return {lo, hi, peak};
}

/// For t > 0 the oscillatory tail integral beyond W is bounded by
/// ~2 J_beta(W)/t, so the window may shrink with t.
inline double effective_upper_cutoff(const BathSpec& bath,
                                     const SupportWindow& win, double t,
                                     double tol) {
    if (t <= 0.0) return win.hi;
    const double need = 0.125 * tol * t;
    double w = win.hi;
    double lo = bath.density.support_max();
    if (lo >= w) return w;
    // walk inward on a geometric grid while the tail stays ignorable
    while (w > lo * 1.05 && std::abs(eval_thermal_sd(bath, w / 1.25)) < need)
        w /= 1.25;
    return w;
}

}  // namespace detail

/// C(t) = (1/pi) int J(w)(1+n(w)) e^{-iwt} dw by adaptive quadrature,
/// per-point absolute error <= tol.
inline CorrelationSeries correlation_exact(const BathSpec& bath,
                                           const std::vector<double>& times,
                                           double tol = 1e-8) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const double pi = 3.14159265358979323846;
    const auto win = detail::thermal_support(bath);
    CorrelationSeries out;
    out.times = times;
    out.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double at = std::abs(t);
        const double hi = detail::effective_upper_cutoff(bath, win, at, tol * pi);
        auto f = [&](double w) {
            return eval_thermal_sd(bath, w) *
                   std::exp(Complex(0.0, -w * t));
        };
        out.values[i] =
            quadrature_oscillatory(f, win.lo, hi, tol * pi, at) / pi;
    }
    return out;
}

/// C(t) = sum_k alpha_k e^{i gamma_k t}: the decomposition's own correlation
/// function, evaluated exactly.
inline CorrelationSeries correlation_from_modes(
    const std::vector<DecayMode>& modes, const std::vector<double>& times) {
    if (modes.empty())
        throw std::invalid_argument("correlation_from_modes: empty mode list");
    for (const auto& m : modes) {
        const bool undamped = m.family == ModeFamily::DiscretePos ||
                              m.family == ModeFamily::DiscreteNeg;
        if (!undamped && m.gamma.imag() < 0.0)
            throw std::invalid_argument(
                "decay mode with Im(gamma) < 0: contribution grows in time");
    }
    CorrelationSeries out;
    out.times = times;
    out.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        Complex c{};
        for (const auto& m : modes)
            c += m.alpha * std::exp(Complex(0.0, 1.0) * m.gamma * times[i]);
        out.values[i] = c;
    }
    return out;
}

/// Same rates applied to the conjugate expansion sum_k alpha_tilde_k
/// e^{i gamma_k t}; must reproduce conj(C(t)) for a consistent mode list.
inline CorrelationSeries correlation_conjugate_from_modes(
    const std::vector<DecayMode>& modes, const std::vector<double>& times) {
    std::vector<DecayMode> swapped = modes;
    for (auto& m : swapped) m.alpha = m.alpha_tilde;
    return correlation_from_modes(swapped, times);
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

}  // namespace heom

#endif  // HEOM_CORRELATION_HPP
