#ifndef HEOM_QUADRATURE_HPP
#define HEOM_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace heom {

/// Adaptive bisection of 15-point Gauss-Legendre panels. A panel is accepted
/// when |GL15(panel) - GL15(left half) - GL15(right half)| falls below the
/// tolerance share allotted to its length; otherwise the halves are pushed.
/// Depth-first, left-to-right, so the result is deterministic.

struct QuadratureOptions {
    std::size_t max_panels = 1000000;
    int max_depth = 48;
    /// Pre-split the interval so each initial panel spans at most ~4 radians
    /// of phase when the integrand oscillates like e^{-i omega t}.
    double oscillation_rate = 0.0;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, std::complex<double> best,
                    double residual)
        : std::runtime_error(what + " (best estimate " +
                             std::to_string(best.real()) + (best.imag() < 0 ? "-" : "+") +
                             std::to_string(std::abs(best.imag())) + "i, residual " +
                             std::to_string(residual) + ")"),
          best_estimate(best),
          residual(residual) {}
    std::complex<double> best_estimate;
    double residual;
};

namespace detail {

struct Gl15Point {
    double x, w;
};
inline constexpr std::array<Gl15Point, 15> gl15 = {{
    {-9.87992518020485377e-01, 3.07532419961186465e-02},
    {-9.37273392400705951e-01, 7.03660474881080689e-02},
    {-8.48206583410427206e-01, 1.07159220467171773e-01},
    {-7.24417731360170070e-01, 1.39570677926153908e-01},
    {-5.70972172608538830e-01, 1.66269205816993781e-01},
    {-3.94151347077563385e-01, 1.86161000015561878e-01},
    {-2.01194093997434514e-01, 1.98431485327111246e-01},
    {+0.00000000000000000e+00, 2.02578241925560898e-01},
    {+2.01194093997434514e-01, 1.98431485327111246e-01},
    {+3.94151347077563385e-01, 1.86161000015561878e-01},
    {+5.70972172608538830e-01, 1.66269205816993781e-01},
    {+7.24417731360170070e-01, 1.39570677926153908e-01},
    {+8.48206583410427206e-01, 1.07159220467171773e-01},
    {+9.37273392400705951e-01, 7.03660474881080689e-02},
    {+9.87992518020485377e-01, 3.07532419961186465e-02},
}};

template <typename F>
auto gl15_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    using R = decltype(f(mid));
    R sum{};
    for (const auto& p : gl15) sum += p.w * f(mid + half * p.x);
    return sum * half;
}

template <typename F, typename R>
struct AdaptiveState {
    F& f;
    double tol_per_length;
    std::size_t panels = 0;
    std::size_t max_panels;
    int max_depth;
    R total{};
    double err_total = 0.0;
    bool budget_exceeded = false;

    void integrate(double a, double b, R whole, int depth) {
        if (budget_exceeded) return;
        const double mid = 0.5 * (a + b);
        const R left = gl15_panel(f, a, mid);
        const R right = gl15_panel(f, mid, b);
        panels += 2;
        const double err = std::abs(whole - (left + right));
        // refinement below the rounding floor of the panel values cannot help
        const double floor_err =
            1e-15 * (std::abs(left) + std::abs(right));
        if (err <= std::max(tol_per_length * (b - a), floor_err) ||
            depth >= max_depth) {
            total += left + right;
            err_total += err;
            return;
        }
        if (panels >= max_panels) {
            total += left + right;
            err_total += err;
            budget_exceeded = true;
            return;
        }
        integrate(a, mid, left, depth + 1);
        integrate(mid, b, right, depth + 1);
    }
};

}  // namespace detail

/// Integrate f over [a, b] with absolute-error target tol.
/// f may return double or std::complex<double>.
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, double tol,
                        const QuadratureOptions& opt = {}) {
    using R = decltype(f(0.5 * (a + b)));
    if (tol <= 0.0) throw std::invalid_argument("quadrature tol must be > 0");
    if (a == b) return R{};
    const bool flipped = b < a;
    if (flipped) std::swap(a, b);

    std::size_t n0 = 1;
    if (opt.oscillation_rate > 0.0) {
        const double phase = opt.oscillation_rate * (b - a);
        n0 = static_cast<std::size_t>(
            std::clamp(std::ceil(phase / 4.0), 1.0, 1.0 * (1 << 16)));
    }

    detail::AdaptiveState<F, R> st{f, tol / (b - a), 0, opt.max_panels,
                                   opt.max_depth};
    const double h = (b - a) / static_cast<double>(n0);
    for (std::size_t i = 0; i < n0 && !st.budget_exceeded; ++i) {
        const double x0 = a + h * static_cast<double>(i);
        const double x1 = (i + 1 == n0) ? b : x0 + h;
        const R whole = detail::gl15_panel(f, x0, x1);
        ++st.panels;
        st.integrate(x0, x1, whole, 0);
    }
    if (st.budget_exceeded)
        throw QuadratureError("quadrature panel budget exceeded",
                              std::complex<double>(st.total) * (flipped ? -1.0 : 1.0),
                              st.err_total);
    return flipped ? R{} - st.total : st.total;
}

/// Oscillatory variant: pass the oscillation rate |t| of e^{-i omega t} so the
/// initial panels resolve the phase.
template <typename F>
std::complex<double> quadrature_oscillatory(F&& f, double a, double b,
                                            double tol,
                                            double oscillation_rate = 0.0,
                                            std::size_t max_panels = 1000000) {
    QuadratureOptions opt;
    opt.oscillation_rate = std::abs(oscillation_rate);
    opt.max_panels = max_panels;
    return integrate_adaptive(
        [&f](double x) { return std::complex<double>(f(x)); }, a, b, tol, opt);
}

}  // namespace heom

#endif  // HEOM_QUADRATURE_HPP
