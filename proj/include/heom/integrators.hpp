#ifndef HEOM_INTEGRATORS_HPP
#define HEOM_INTEGRATORS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heom {

/// Integrator selection: classic fixed-step RK4 or the Cash-Karp embedded
/// 4(5) pair with step-size control.
struct Rk4 {
    double dt;
};
struct Rk45 {
    double rtol = 1e-8;
    double atol = 1e-10;
    double dt_initial = 0.0;  // 0: pick from the first error estimate
    double dt_max = 0.0;      // 0: unlimited
};

namespace detail {

using Vec = std::vector<std::complex<double>>;

inline void check_finite(const Vec& y, double t) {
    double mx = 0.0;
    for (const auto& v : y) {
        const double a = std::abs(v.real()) + std::abs(v.imag());
        if (!std::isfinite(a))
            throw std::runtime_error(
                "propagation diverged at t = " + std::to_string(t) +
                " a.u. (non-finite ADO element; raise the hierarchy depth or "
                "lower the step size)");
        mx = std::max(mx, a);
    }
    if (mx > 1e12)
        throw std::runtime_error(
            "propagation diverged at t = " + std::to_string(t) +
            " a.u. (max ADO magnitude " + std::to_string(mx) + ")");
}

template <typename Rhs>
void rk4_step(const Rhs& rhs, Vec& y, double dt, Vec& k1, Vec& k2, Vec& k3,
              Vec& k4, Vec& tmp) {
    const std::size_t n = y.size();
    rhs(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Cash-Karp tableau
inline constexpr double ck_a[6] = {0.0, 1.0 / 5, 3.0 / 10, 3.0 / 5, 1.0, 7.0 / 8};
inline constexpr double ck_b[6][5] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {3.0 / 10, -9.0 / 10, 6.0 / 5},
    {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27},
    {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592, 253.0 / 4096},
};
inline constexpr double ck_c5[6] = {37.0 / 378,  0.0, 250.0 / 621,
                                    125.0 / 594, 0.0, 512.0 / 1771};
inline constexpr double ck_c4[6] = {2825.0 / 27648,  0.0,           18575.0 / 48384,
                                    13525.0 / 55296, 277.0 / 14336, 1.0 / 4};

}  // namespace detail

/// Propagate y through [0, t_end] with callbacks at the sample times
/// (strictly increasing, first may be 0). The callback receives (t, y).
template <typename Rhs, typename OnSample>
void integrate_rk4(const Rhs& rhs, std::vector<std::complex<double>>& y,
                   const std::vector<double>& sample_times, double dt,
                   OnSample&& on_sample) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4 needs dt > 0");
    using detail::Vec;
    Vec k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
    double t = 0.0;
    for (double target : sample_times) {
        if (target < t - 1e-12)
            throw std::invalid_argument("sample times must be increasing");
        while (t < target - 1e-12 * std::max(1.0, target)) {
            const double h = std::min(dt, target - t);
            detail::rk4_step(rhs, y, h, k1, k2, k3, k4, tmp);
            t += h;
        }
        detail::check_finite(y, t);
        on_sample(target, y);
    }
}

template <typename Rhs, typename OnSample>
void integrate_rk45(const Rhs& rhs, std::vector<std::complex<double>>& y,
                    const std::vector<double>& sample_times, Rk45 opt,
                    OnSample&& on_sample) {
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
        throw std::invalid_argument("rk45 needs positive tolerances");
    using detail::Vec;
    const std::size_t n = y.size();
    std::vector<Vec> k(6, Vec(n));
    Vec tmp(n), y5(n);

    double t = 0.0;
    const double t_end = sample_times.empty() ? 0.0 : sample_times.back();
    double dt = opt.dt_initial > 0.0 ? opt.dt_initial
                                     : std::max(1e-6, t_end * 1e-6);
    std::size_t si = 0;
    while (si < sample_times.size() && sample_times[si] <= 1e-300) {
        on_sample(sample_times[si], y);
        ++si;
    }
    int consecutive_rejects = 0;
    while (si < sample_times.size()) {
        const double target = sample_times[si];
        double h = std::min(dt, target - t);
        if (opt.dt_max > 0.0) h = std::min(h, opt.dt_max);

        rhs(y, k[0]);
        for (int s = 1; s < 6; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                std::complex<double> acc = y[i];
                for (int q = 0; q < s; ++q)
                    acc += h * detail::ck_b[s][q] * k[q][i];
                tmp[i] = acc;
            }
            rhs(tmp, k[s]);
        }
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> d5 = y[i], d4 = y[i];
            for (int s = 0; s < 6; ++s) {
                d5 += h * detail::ck_c5[s] * k[s][i];
                d4 += h * detail::ck_c4[s] * k[s][i];
            }
            y5[i] = d5;
            const double scale =
                opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(d5));
            err = std::max(err, std::abs(d5 - d4) / scale);
        }
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            t += h;
            y.swap(y5);
            consecutive_rejects = 0;
            const double grow =
                err > 1e-12 ? 0.9 * std::pow(err, -0.2) : 5.0;
            dt = h * std::clamp(grow, 0.2, 5.0);
            if (t >= target - 1e-12 * std::max(1.0, target)) {
                detail::check_finite(y, t);
                on_sample(target, y);
                ++si;
            }
        } else {
            dt = h * std::max(0.1, 0.9 * std::pow(err, -0.25));
            if (++consecutive_rejects > 60)
                throw std::runtime_error(
                    "rk45 step size collapsed at t = " + std::to_string(t) +
                    " a.u.");
        }
    }
}

}  // namespace heom

#endif  // HEOM_INTEGRATORS_HPP
