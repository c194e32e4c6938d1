#ifndef HEOM_DISCRETIZE_HPP
#define HEOM_DISCRETIZE_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heom/bath.hpp"
#include "heom/interp.hpp"
#include "heom/units.hpp"

namespace heom {

namespace detail {

/// Cumulative F(w) = int_0^w J/w' dw' on a uniform grid, Simpson per cell.
inline MonotoneCubic cumulative_j_over_w(const SpectralDensity& density,
                                         double omega_max, int n_grid) {
    const double slope0 = density.slope_at_zero();
    auto f = [&](double w) { return w == 0.0 ? slope0 : density(w) / w; };
    std::vector<double> x(n_grid), F(n_grid);
    double acc = 0.0;
    x[0] = 0.0;
    F[0] = 0.0;
    const double h = omega_max / static_cast<double>(n_grid - 1);
    for (int i = 1; i < n_grid; ++i) {
        const double a = x[i - 1], b = a + h;
        acc += h / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        x[i] = b;
        F[i] = acc;
    }
    return MonotoneCubic(std::move(x), std::move(F));
}

}  // namespace detail

/// Default sampling cutoff: where the cumulative reorganization energy
/// reaches 99.9% of its total.
inline double default_discretization_cutoff(const SpectralDensity& density) {
    const double pi = 3.14159265358979323846;
    const double total = pi * reorganization_energy(density);
    double hi = density.support_max();
    auto cum = detail::cumulative_j_over_w(density, hi, 4000);
    while (cum(hi) < 0.999 * total) {
        if (density.is_tabulated()) return hi;  // table ends here
        hi *= 1.5;
        cum = detail::cumulative_j_over_w(density, hi, 4000);
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cum(mid) < 0.999 * total ? lo : hi) = mid;
    }
    return hi;
}

/// Equal-reorganization-energy sampling: every mode carries the same share
/// eps = (1/M) int_0^wmax J/w dw, the frequencies sit at the half-integer
/// quantiles of the 1/w-weighted measure, and c_m^2 = (2/pi) w_m^2 eps, so
/// sum c^2/(2w^2) reproduces the truncated reorganization energy exactly.
inline std::vector<DiscreteMode> discretize_equal_lambda(
    const SpectralDensity& density, int n_modes, double omega_max = 0.0) {
    if (n_modes < 1) throw std::invalid_argument("need >= 1 mode");
    if (omega_max == 0.0) omega_max = default_discretization_cutoff(density);
    const int grid = 20000;
    if (n_modes > grid / 10)
        throw std::invalid_argument(
            "mode count exceeds the quadrature resolution of the cumulative "
            "integral");
    const auto cum = detail::cumulative_j_over_w(density, omega_max, grid);
    const double total = cum(omega_max);
    const double eps = total / static_cast<double>(n_modes);
    const double pi = 3.14159265358979323846;

    std::vector<DiscreteMode> modes(static_cast<std::size_t>(n_modes));
    for (int m = 0; m < n_modes; ++m) {
        const double target = (static_cast<double>(m) + 0.5) * eps;
        double lo = 0.0, hi = omega_max;
        while ((hi - lo) > 1e-12 * omega_max) {
            const double mid = 0.5 * (lo + hi);
            (cum(mid) < target ? lo : hi) = mid;
        }
        const double w = 0.5 * (lo + hi);
        modes[static_cast<std::size_t>(m)] = {w, w * std::sqrt(2.0 * eps / pi)};
    }
    return modes;
}

/// Two decay modes per sampled oscillator, weighted by the fluctuation-
/// dissipation pair n and 1+n; alpha_tilde is the crosswise coefficient.
inline std::vector<DecayMode> discrete_modes(
    const std::vector<DiscreteMode>& samples, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    std::vector<DecayMode> out;
    out.reserve(2 * samples.size());
    for (const auto& s : samples) {
        if (!(s.omega > 0.0))
            throw std::invalid_argument("discrete mode with omega <= 0");
        const double pref = s.c * s.c / (2.0 * s.omega);
        const double n_th = bose_occupancy(s.omega, beta);
        const double n_th1 = bose_occupancy_plus_one(s.omega, beta);
        out.push_back({Complex(pref * n_th, 0.0), Complex(s.omega, 0.0),
                       Complex(pref * n_th1, 0.0), ModeFamily::DiscretePos});
        out.push_back({Complex(pref * n_th1, 0.0), Complex(-s.omega, 0.0),
                       Complex(pref * n_th, 0.0), ModeFamily::DiscreteNeg});
    }
    return out;
}

/// Lorentzian broadening of a discrete mode list into a tabulated continuous
/// density with the same reorganization energy.
inline SpectralDensity broaden_lvc(const std::vector<DiscreteMode>& modes,
                                   double gamma, int grid = 6000) {
    if (modes.empty()) throw std::invalid_argument("empty mode list");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    double top = 0.0;
    for (const auto& m : modes) top = std::max(top, m.omega);
    top += 25.0 * gamma;
    std::vector<double> x(static_cast<std::size_t>(grid)),
        y(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        const double w = top * static_cast<double>(i) / (grid - 1);
        double s = 0.0;
        for (const auto& m : modes) {
            const double a = w - m.omega, b = w + m.omega;
            s += 0.5 * (m.c * m.c / m.omega) *
                 (gamma / (a * a + gamma * gamma) -
                  gamma / (b * b + gamma * gamma));
        }
        x[static_cast<std::size_t>(i)] = w;
        y[static_cast<std::size_t>(i)] = s;
    }
    y[0] = 0.0;  // antisymmetry pins J(0) = 0
    return SpectralDensity::tabulated(std::move(x), std::move(y));
}

/// CSV mode list: header `omega,coupling,unit`, one oscillator per row.
inline std::vector<DiscreteMode> load_lvc_csv(const std::string& path,
                                              int expected_modes = 0) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open LVC mode file " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty LVC mode file " + path);
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                s.end());
        return s;
    };
    if (strip(line) != "omega,coupling,unit")
        throw std::runtime_error(
            "LVC mode file must start with header 'omega,coupling,unit'");
    std::vector<DiscreteMode> modes;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        std::istringstream ss(line);
        std::string w_s, c_s, u_s;
        if (!std::getline(ss, w_s, ',') || !std::getline(ss, c_s, ',') ||
            !std::getline(ss, u_s))
            throw std::runtime_error("malformed row " + std::to_string(lineno) +
                                     " in " + path);
        const Unit unit = parse_unit(strip(u_s));
        const double scale = energy_to_au(1.0, unit);
        // couplings scale like energy^(3/2) in mass-weighted units
        modes.push_back({std::stod(w_s) * scale,
                         std::stod(c_s) * scale * std::sqrt(scale)});
    }
    if (expected_modes > 0 && static_cast<int>(modes.size()) != expected_modes)
        throw std::runtime_error(path + " holds " +
                                 std::to_string(modes.size()) +
                                 " modes, expected " +
                                 std::to_string(expected_modes));
    return modes;
}

}  // namespace heom

#endif  // HEOM_DISCRETIZE_HPP
