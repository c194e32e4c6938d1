#ifndef HEOM_SPECTRAL_DENSITY_HPP
#define HEOM_SPECTRAL_DENSITY_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "heom/bose.hpp"
#include "heom/interp.hpp"
#include "heom/quadrature.hpp"

namespace heom {

/// One Ohmic-Lorentzian term p w / ([(w+W)^2+G^2][(w-W)^2+G^2]).
struct TannorMeierTerm {
    double p;
    double Omega;
    double Gamma;

    TannorMeierTerm(double p_, double Omega_, double Gamma_)
        : p(p_), Omega(Omega_), Gamma(Gamma_) {
        if (!(p > 0.0 && Omega > 0.0 && Gamma > 0.0))
            throw std::invalid_argument(
                "Tannor-Meier term requires p, Omega, Gamma > 0");
    }

    double operator()(double omega) const {
        const double a = (omega + Omega) * (omega + Omega) + Gamma * Gamma;
        const double b = (omega - Omega) * (omega - Omega) + Gamma * Gamma;
        return p * omega / (a * b);
    }

    /// Analytic continuation, needed at the Bose poles i nu_n.
    std::complex<double> operator()(std::complex<double> omega) const {
        const std::complex<double> a = (omega + Omega) * (omega + Omega) +
                                       Gamma * Gamma;
        const std::complex<double> b = (omega - Omega) * (omega - Omega) +
                                       Gamma * Gamma;
        return p * omega / (a * b);
    }

    /// d/dw at w = 0.
    double slope_at_zero() const {
        const double s = Omega * Omega + Gamma * Gamma;
        return p / (s * s);
    }
};

struct DiscreteMode {
    double omega;
    double c;
};

/// J(omega): antisymmetric by construction for every variant.
class SpectralDensity {
  public:
    struct TannorMeierSum {
        std::vector<TannorMeierTerm> terms;
    };
    struct DiscreteModes {
        std::vector<DiscreteMode> modes;
    };
    struct Tabulated {
        MonotoneCubic interp;  // positive half only, mirrored on evaluation
    };

    static SpectralDensity tannor_meier(std::vector<TannorMeierTerm> terms) {
        if (terms.empty())
            throw std::invalid_argument("Tannor-Meier sum needs >= 1 term");
        return SpectralDensity(TannorMeierSum{std::move(terms)});
    }

    static SpectralDensity discrete(std::vector<DiscreteMode> modes) {
        for (const auto& m : modes)
            if (!(m.omega > 0.0))
                throw std::invalid_argument("discrete mode frequencies must be > 0");
        return SpectralDensity(DiscreteModes{std::move(modes)});
    }

    /// Grid over omega >= 0, strictly increasing; evaluation is mirrored so
    /// that J(-w) = -J(w) exactly.
    static SpectralDensity tabulated(std::vector<double> omega,
                                     std::vector<double> value) {
        if (omega.empty() || omega.front() < 0.0)
            throw std::invalid_argument("tabulated grid must start at omega >= 0");
        return SpectralDensity(
            Tabulated{MonotoneCubic(std::move(omega), std::move(value))});
    }

    bool is_tannor_meier() const {
        return std::holds_alternative<TannorMeierSum>(v_);
    }
    bool is_discrete() const { return std::holds_alternative<DiscreteModes>(v_); }
    bool is_tabulated() const { return std::holds_alternative<Tabulated>(v_); }

    const std::vector<TannorMeierTerm>& tm_terms() const {
        return std::get<TannorMeierSum>(v_).terms;
    }
    const std::vector<DiscreteMode>& discrete_modes() const {
        return std::get<DiscreteModes>(v_).modes;
    }
    const MonotoneCubic& table() const { return std::get<Tabulated>(v_).interp; }

    double operator()(double omega) const {
        if (const auto* tm = std::get_if<TannorMeierSum>(&v_)) {
            double s = 0.0;
            for (const auto& t : tm->terms) s += t(omega);
            return s;
        }
        if (const auto* tab = std::get_if<Tabulated>(&v_)) {
            const double a = std::abs(omega);
            if (!tab->interp.contains(a))
                throw std::out_of_range(
                    "tabulated spectral density queried outside grid: omega = " +
                    std::to_string(omega));
            const double val = tab->interp(a);
            return omega < 0.0 ? -val : val;
        }
        throw std::logic_error(
            "pointwise evaluation is undefined for a discrete mode list; "
            "broaden it first");
    }

    /// J'(0), the Ohmic slope. Closed form for Tannor-Meier sums, centered
    /// finite difference (h = 1e-6 * grid scale) for tables.
    double slope_at_zero() const {
        if (const auto* tm = std::get_if<TannorMeierSum>(&v_)) {
            double s = 0.0;
            for (const auto& t : tm->terms) s += t.slope_at_zero();
            return s;
        }
        if (const auto* tab = std::get_if<Tabulated>(&v_)) {
            const double h = 1e-6 * tab->interp.x_max();
            return (*this)(h) / h;  // centered difference, using oddness
        }
        throw std::logic_error("slope undefined for a discrete mode list");
    }

    /// Upper edge of the numerically significant support on the positive axis.
    double support_max() const {
        if (const auto* tm = std::get_if<TannorMeierSum>(&v_)) {
            double m = 0.0;
            for (const auto& t : tm->terms)
                m = std::max(m, t.Omega + 10.0 * t.Gamma);
            return m;
        }
        if (const auto* tab = std::get_if<Tabulated>(&v_))
            return tab->interp.x_max();
        double m = 0.0;
        for (const auto& d : std::get<DiscreteModes>(v_).modes)
            m = std::max(m, d.omega);
        return m;
    }

  private:
    using Variant = std::variant<TannorMeierSum, DiscreteModes, Tabulated>;
    explicit SpectralDensity(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// lambda = (1/pi) int_0^inf J/w dw, adaptive quadrature for continuous
/// variants, the exact sum for discrete mode lists.
inline double reorganization_energy(const SpectralDensity& density,
                                    double tol = 1e-12) {
    if (density.is_discrete()) {
        double s = 0.0;
        for (const auto& m : density.discrete_modes())
            s += m.c * m.c / (2.0 * m.omega * m.omega);
        return s;
    }
    const double slope0 = density.slope_at_zero();
    auto f = [&](double w) { return w == 0.0 ? slope0 : density(w) / w; };
    const double pi = 3.14159265358979323846;
    if (density.is_tabulated()) {
        const double hi = density.table().x_max();
        return integrate_adaptive(f, 0.0, hi, tol * pi) / pi;
    }
    // Tannor-Meier tails fall off like p/w^4 only; substitute u = 1/w so the
    // tail integral is over a finite interval.
    const double W = density.support_max();
    const double head = integrate_adaptive(f, 0.0, W, tol * pi);
    auto tail_f = [&](double u) { return u == 0.0 ? 0.0 : density(1.0 / u) / u; };
    const double tail = integrate_adaptive(tail_f, 0.0, 1.0 / W, tol * pi);
    return (head + tail) / pi;
}

}  // namespace heom

#endif  // HEOM_SPECTRAL_DENSITY_HPP
