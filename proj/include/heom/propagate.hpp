#ifndef HEOM_PROPAGATE_HPP
#define HEOM_PROPAGATE_HPP

#include <cmath>
#include <variant>
#include <vector>

#include "heom/heom.hpp"
#include "heom/integrators.hpp"

namespace heom {

using Integrator = std::variant<Rk4, Rk45>;

struct Trajectory {
    int n = 0;
    std::vector<double> times;                       // a.u.
    std::vector<std::vector<Complex>> rho;           // root ADO per sample
    std::vector<std::vector<double>> layer_norms;    // optional, per level

    Complex rho_at(std::size_t sample, int i, int j) const {
        return rho[sample][static_cast<std::size_t>(i) * n + j];
    }
};

/// 50 steps per fastest decay or system oscillation.
inline double default_rk4_dt(const HeomEngine& engine) {
    double gmax = 0.0;
    for (const auto& m : engine.modes()) gmax = std::max(gmax, std::abs(m.gamma));
    double hnorm = 0.0;
    // crude spectral bound: max row sum
    const auto& h = engine.hamiltonian();
    for (int i = 0; i < engine.dim(); ++i) {
        double row = 0.0;
        for (int j = 0; j < engine.dim(); ++j) row += std::abs(h(i, j));
        hnorm = std::max(hnorm, row);
    }
    const double rate = std::max(gmax, hnorm);
    return rate > 0.0 ? 0.02 / rate : 1.0;
}

inline Trajectory propagate(const HeomEngine& engine, HierarchyState state,
                            const std::vector<double>& sample_times,
                            const Integrator& integrator,
                            bool with_layer_norms = false) {
    engine.check_state(state);
    const int n = engine.dim();
    const int nn = n * n;
    Trajectory traj;
    traj.n = n;

    auto record = [&](double t, const std::vector<Complex>& y) {
        traj.times.push_back(t);
        traj.rho.emplace_back(y.begin(), y.begin() + nn);
        if (with_layer_norms) {
            const auto& hier = engine.hierarchy();
            std::vector<double> norms(static_cast<std::size_t>(hier.depth()) + 1,
                                      0.0);
            for (std::size_t p = 0; p < hier.size(); ++p) {
                double s = 0.0;
                const Complex* a = y.data() + p * nn;
                for (int e = 0; e < nn; ++e) s += std::norm(a[e]);
                norms[hier.level(p)] += s;
            }
            for (auto& v : norms) v = std::sqrt(v);
            traj.layer_norms.push_back(std::move(norms));
        }
    };

    auto rhs = [&engine](const std::vector<Complex>& y,
                         std::vector<Complex>& dy) { engine.rhs(y, dy); };

    if (std::holds_alternative<Rk4>(integrator)) {
        const double dt = std::get<Rk4>(integrator).dt;
        integrate_rk4(rhs, state.data, sample_times, dt, record);
    } else {
        integrate_rk45(rhs, state.data, sample_times, std::get<Rk45>(integrator),
                       record);
    }
    return traj;
}

}  // namespace heom

#endif  // HEOM_PROPAGATE_HPP
