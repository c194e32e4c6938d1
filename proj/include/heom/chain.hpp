#ifndef HEOM_CHAIN_HPP
#define HEOM_CHAIN_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "heom/bath.hpp"
#include "heom/correlation.hpp"
#include "heom/quadrature.hpp"

namespace heom {

/// Nearest-neighbor oscillator chain unitarily equivalent to a star of bath
/// modes: site energies omega_j, hops t_j, and the system coupling t0 to
/// site 1. t0^2 equals the zeroth moment of the mapped measure.
struct ChainModel {
    double t0 = 0.0;
    std::vector<double> omegas;     // length N_ch
    std::vector<double> couplings;  // length N_ch - 1
    double beta = 0.0;              // bookkeeping for serialization
    double omega_min = 0.0, omega_max = 0.0;

    int length() const { return static_cast<int>(omegas.size()); }
};

/// Weighted star measure: points x_i with nonnegative weights w_i.
struct StarMeasure {
    std::vector<double> points;
    std::vector<double> weights;

    double moment(int k) const {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < points.size(); ++i) {
            long double p = 1.0L;
            for (int q = 0; q < k; ++q) p *= points[i];
            acc += static_cast<long double>(weights[i]) * p;
        }
        return static_cast<double>(acc);
    }
};

/// Lanczos (Stieltjes) tridiagonalization of diag(points) against the start
/// vector sqrt(weights), with full reorthogonalization in extended precision.
inline ChainModel chain_from_measure(const StarMeasure& measure, int n_chain) {
    const std::size_t n = measure.points.size();
    if (n_chain < 1) throw std::invalid_argument("chain length must be >= 1");
    if (n < static_cast<std::size_t>(n_chain))
        throw std::invalid_argument("measure must have >= N_ch points");

    long double mu0 = 0.0L;
    for (double w : measure.weights) {
        if (w < 0.0) throw std::invalid_argument("negative measure weight");
        mu0 += w;
    }
    if (mu0 <= 0.0L) throw std::invalid_argument("empty measure");

    ChainModel chain;
    chain.t0 = static_cast<double>(std::sqrt(mu0));

    std::vector<std::vector<long double>> basis;
    std::vector<long double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::sqrt(static_cast<long double>(measure.weights[i]) / mu0);
    basis.push_back(v);

    long double beta_prev = 0.0L;
    std::vector<long double> v_prev(n, 0.0L);
    for (int j = 0; j < n_chain; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            w[i] = static_cast<long double>(measure.points[i]) * v[i];
        long double alpha = 0.0L;
        for (std::size_t i = 0; i < n; ++i) alpha += v[i] * w[i];
        chain.omegas.push_back(static_cast<double>(alpha));
        if (j + 1 == n_chain) break;
        for (std::size_t i = 0; i < n; ++i)
            w[i] -= alpha * v[i] + beta_prev * v_prev[i];
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                long double dot = 0.0L;
                for (std::size_t i = 0; i < n; ++i) dot += b[i] * w[i];
                for (std::size_t i = 0; i < n; ++i) w[i] -= dot * b[i];
            }
        long double beta = 0.0L;
        for (std::size_t i = 0; i < n; ++i) beta += w[i] * w[i];
        beta = std::sqrt(beta);
        if (static_cast<double>(beta) < 1e-14 * chain.t0)
            throw std::runtime_error(
                "Lanczos breakdown after " + std::to_string(j + 1) +
                " chain sites (measure exhausted before the requested length)");
        chain.couplings.push_back(static_cast<double>(beta));
        v_prev = v;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / beta;
        basis.push_back(v);
        beta_prev = beta;
    }
    return chain;
}

/// Composite 15-point Gauss-Legendre discretization of J_beta(w)dw / pi on
/// [omega_min, omega_max], followed by the Lanczos chain construction.
inline ChainModel chain_map_thermal(const BathSpec& bath, int n_chain,
                                    double omega_min, double omega_max,
                                    int grid = 20000) {
    if (!(omega_min < omega_max))
        throw std::invalid_argument("need omega_min < omega_max");
    if (grid < 15 * n_chain)
        throw std::invalid_argument("measure grid too coarse for the chain");
    const double pi = 3.14159265358979323846;
    const int panels = std::max(1, grid / 15);
    StarMeasure measure;
    measure.points.reserve(static_cast<std::size_t>(panels) * 15);
    measure.weights.reserve(static_cast<std::size_t>(panels) * 15);
    const double h = (omega_max - omega_min) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = omega_min + p * h;
        const double mid = a + 0.5 * h, half = 0.5 * h;
        for (const auto& node : detail::gl15) {
            const double x = mid + half * node.x;
            const double jb = eval_thermal_sd(bath, x);
            measure.points.push_back(x);
            measure.weights.push_back(std::max(0.0, jb) * node.w * half / pi);
        }
    }
    ChainModel chain = chain_from_measure(measure, n_chain);
    chain.beta = bath.beta;
    chain.omega_min = omega_min;
    chain.omega_max = omega_max;
    return chain;
}

/// Chain directly from a finite star-mode list (w may be negative after the
/// thermal extension); star weights c^2 / (2|w|).
inline ChainModel chain_map_discrete(const std::vector<DiscreteMode>& modes,
                                     int n_chain) {
    StarMeasure measure;
    for (const auto& m : modes) {
        if (m.omega == 0.0)
            throw std::invalid_argument("star mode at omega = 0");
        measure.points.push_back(m.omega);
        measure.weights.push_back(m.c * m.c / (2.0 * std::abs(m.omega)));
    }
    return chain_from_measure(measure, n_chain);
}

/// Finite-temperature extension of a discrete mode list: couplings gain the
/// emission factor sqrt(1+n); mirrored negative-frequency modes with the
/// absorption factor sqrt(n) are added when n exceeds the threshold.
inline std::vector<DiscreteMode> thermal_extend_lvc(
    const std::vector<DiscreteMode>& modes, double beta,
    double threshold = 1e-8) {
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw std::invalid_argument("threshold must lie in (0, 1)");
    std::vector<DiscreteMode> out;
    out.reserve(2 * modes.size());
    for (const auto& m : modes) {
        const double n_th = bose_occupancy(m.omega, beta);
        out.push_back({m.omega, m.c * std::sqrt(1.0 + n_th)});
    }
    for (const auto& m : modes) {
        const double n_th = bose_occupancy(m.omega, beta);
        if (n_th > threshold)
            out.push_back({-m.omega, m.c * std::sqrt(n_th)});
    }
    return out;
}

/// First excitation reaches the chain end no earlier than this (hop-speed
/// bound); used to pick chain lengths that avoid reflections.
inline double chain_reflection_time(const ChainModel& chain) {
    double tmax = 0.0;
    for (double t : chain.couplings) tmax = std::max(tmax, std::abs(t));
    if (tmax == 0.0) return 1e300;
    return static_cast<double>(chain.length() - 1) / (2.0 * tmax);
}

}  // namespace heom

#endif  // HEOM_CHAIN_HPP
