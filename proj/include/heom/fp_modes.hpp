#ifndef HEOM_FP_MODES_HPP
#define HEOM_FP_MODES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "heom/aaa.hpp"
#include "heom/bath.hpp"
#include "heom/correlation.hpp"

namespace heom {

/// Sample grid for fitting J_beta: a linear sweep over the support plus
/// log-dense refinement around each Lorentzian center and around the Bose
/// edge at omega = 0. The negative cutoff is where J_beta drops below
/// 1e-12 of its maximum.
inline std::vector<double> aaa_sample_grid(const BathSpec& bath,
                                           double omega_min = 0.0,
                                           double omega_max = 0.0,
                                           int n_linear = 1000,
                                           int n_peak = 500) {
    const auto win = detail::thermal_support(bath, 1e-12);
    double tail_max = 0.0;
    if (omega_min == 0.0 && omega_max == 0.0) {
        omega_min = win.lo;
        omega_max = win.hi;
        if (bath.density.is_tannor_meier()) {
            // linear sweep up to a decade past the outermost peak. The slow
            // 1/w^3 tail beyond still carries C(0) weight, so log-spaced
            // samples (added below) extend until the leftover mass
            // sum_l p_l/(2W^2) is 1e-5 of int_0^inf J = sum (p/2WG) atan(G/W).
            double top = 0.0, p_sum = 0.0, mass = 0.0;
            for (const auto& t : bath.density.tm_terms()) {
                top = std::max(top, t.Omega + 10.0 * t.Gamma);
                p_sum += t.p;
                mass += t.p / (2.0 * t.Omega * t.Gamma) *
                        std::atan(t.Gamma / t.Omega);
            }
            const double w_mass = std::sqrt(p_sum / (2e-5 * mass));
            omega_max = std::min(omega_max, top);
            tail_max = std::min(win.hi, std::max(w_mass, 2.0 * omega_max));
            // pin the fit on the negative axis well past the thermal cutoff,
            // otherwise it is free to put weight where nothing was sampled
            omega_min = std::min(omega_min, -0.5 * omega_max);
        }
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(2 * n_linear + 4 * n_peak));
    for (int i = 0; i < n_linear; ++i)
        grid.push_back(omega_min + (omega_max - omega_min) * i /
                       static_cast<double>(n_linear - 1));
    if (tail_max > omega_max) {
        // mirror the tail coverage on both half-axes; the negative samples
        // are essentially zero and pin the fit where nothing else would
        const int n_tail = n_linear / 4;
        const double lr = std::log(tail_max / omega_max);
        for (int i = 1; i <= n_tail; ++i) {
            const double w =
                omega_max * std::exp(lr * i / static_cast<double>(n_tail));
            grid.push_back(w);
            grid.push_back(-w);
        }
        const double la = std::log(tail_max / std::abs(omega_min));
        for (int i = 1; i < n_tail; ++i)
            grid.push_back(omega_min *
                           std::exp(la * i / static_cast<double>(n_tail)));
    }

    auto add_peak = [&](double center, double width) {
        const int per_side = n_peak / 2;
        for (int i = 0; i < per_side; ++i) {
            const double u = -3.0 + 4.3 * i / static_cast<double>(per_side - 1);
            const double d = width * std::pow(10.0, u);
            if (center + d < omega_max) grid.push_back(center + d);
            if (center - d > omega_min) grid.push_back(center - d);
        }
    };
    if (bath.density.is_tannor_meier())
        for (const auto& t : bath.density.tm_terms()) add_peak(t.Omega, t.Gamma);
    add_peak(0.0, 1.0 / bath.beta);

    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) {
                               return std::abs(a - b) <=
                                      1e-14 * (std::abs(a) + std::abs(b));
                           }),
               grid.end());
    return grid;
}

/// Free-pole decay modes from the upper-half-plane poles of a J_beta fit.
/// Each pole P = W + iG yields one mode on each hierarchy channel:
///   gamma = -W + iG carries the C(t) coefficient  conj(2i Res[P]),
///   gamma = +W + iG carries the conj(C) coefficient     2i Res[P],
/// which is what contour integration of (1/pi) int r(w) e^{-iwt} dw gives
/// when the fit is real on the real axis.
inline std::vector<DecayMode> fp_modes(const PoleSet& poleset) {
    std::vector<DecayMode> modes;
    double scale = 0.0, rmax = 0.0;
    for (const auto& p : poleset.poles) scale = std::max(scale, std::abs(p));
    for (const auto& r : poleset.residues) rmax = std::max(rmax, std::abs(r));
    for (std::size_t i = 0; i < poleset.poles.size(); ++i) {
        const auto& p = poleset.poles[i];
        if (std::abs(p.imag()) <= 1e-12 * scale) {
            // doublet artifacts straddling the axis carry no weight; a real
            // pole with real weight is an undamped mode and cannot be used
            if (std::abs(poleset.residues[i]) <= 1e-7 * rmax) continue;
            throw std::runtime_error(
                "fp_modes: pole on the real axis (undamped free pole)");
        }
        if (p.imag() < 0.0) continue;  // lower poles are the conjugate partners
        const Complex alpha1 = 2.0 * Complex(0.0, 1.0) * poleset.residues[i];
        modes.push_back({std::conj(alpha1), Complex(-p.real(), p.imag()),
                         Complex(0.0, 0.0), ModeFamily::FreePole});
        modes.push_back({Complex(0.0, 0.0), Complex(p.real(), p.imag()),
                         alpha1, ModeFamily::FreePole});
    }
    if (modes.empty())
        throw std::runtime_error("fp_modes: no upper-half-plane poles");
    return modes;
}

struct FpDecomposition {
    BarycentricFit fit;
    PoleSet poles;
    std::vector<DecayMode> modes;
    double correlation_error = 0.0;  // max |C_fp - C_exact| / |C(0)|
};

/// Tolerance ladder: tighten the AAA fit until the reconstructed C(t) matches
/// the quadrature oracle on [0, horizon] within target * |C(0)|. A nonzero
/// min_modes keeps tightening past the first hit, for runs that should match
/// a reference mode count rather than stop at the cheapest one.
inline FpDecomposition fp_decompose(const BathSpec& bath, double horizon,
                                    double target = 1e-3, int max_degree = 48,
                                    const std::vector<double>& sample_grid = {},
                                    double oracle_tol = 1e-10,
                                    std::size_t min_modes = 0) {
    const auto grid =
        sample_grid.empty() ? aaa_sample_grid(bath) : sample_grid;
    std::vector<double> jb(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        jb[i] = eval_thermal_sd(bath, grid[i]);

    const auto times = linspace(0.0, horizon, 201);
    const auto c_exact = correlation_exact(bath, times, oracle_tol);
    const double c0 = std::abs(c_exact.values.front());

    FpDecomposition best;
    double best_err = std::numeric_limits<double>::infinity();
    for (double tol = 1e-3; tol > 1e-14; tol *= 0.1) {
        BarycentricFit fit;
        try {
            // two vanishing numerator moments: the fit decays at infinity
            // like the density it represents, so its pole expansion carries
            // the full C(0) weight
            fit = aaa_fit(grid, jb, tol, max_degree, 2);
        } catch (const AaaError& e) {
            fit = e.best_fit;
        }
        if (fit.degree() < 2) continue;
        FpDecomposition d;
        d.fit = fit;
        d.poles = poles_and_residues(fit);
        try {
            d.modes = fp_modes(d.poles);
        } catch (const std::runtime_error&) {
            continue;
        }
        const auto c_fp = correlation_from_modes(d.modes, times);
        double dev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            dev = std::max(dev, std::abs(c_fp.values[i] - c_exact.values[i]));
        d.correlation_error = dev / c0;
        if (d.correlation_error < best_err || (best.modes.size() < min_modes &&
                                               d.modes.size() >= min_modes &&
                                               d.correlation_error <= target)) {
            best_err = d.correlation_error;
            best = d;
        }
        if (d.correlation_error <= target && d.modes.size() >= min_modes)
            return d;
        if (fit.max_rel_error > tol) break;  // degree cap reached, no progress
    }
    if (best_err <= target && best.modes.size() >= min_modes) return best;
    throw std::runtime_error(
        "fp_decompose: correlation target " + std::to_string(target) +
        " unreachable at max degree " + std::to_string(max_degree) +
        " (best " + std::to_string(best_err) + "); aaa_fit needs a larger "
        "degree or a denser sample grid");
}

}  // namespace heom

#endif  // HEOM_FP_MODES_HPP
