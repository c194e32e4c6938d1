// development scratch runner, replaced by real suites as modules land
#include <cstdio>
#include <vector>

#include "heom/bath.hpp"
#include "heom/correlation.hpp"
#include "heom/dephasing.hpp"
#include "heom/exp_fit.hpp"
#include "heom/spectral_density.hpp"
#include "heom/tm_modes.hpp"
#include "heom/units.hpp"

using namespace heom;

int main() {
    const UnitSystem& u = units();
    const double beta298 = u.beta_from_kelvin(298.0);
    const double beta10 = u.beta_from_kelvin(10.0);
    std::printf("beta 298K = %.10g, 10K = %.10g\n", beta298, beta10);

    auto j1 = SpectralDensity::tannor_meier({TannorMeierTerm(2e-9, 6e-3, 5e-3)});
    auto j2 = SpectralDensity::tannor_meier({TannorMeierTerm(2.2e-10, 6e-3, 1e-3)});

    std::printf("lambda J1 quad = %.10e (closed 1.6393442623e-3)\n",
                reorganization_energy(j1));
    std::printf("lambda J2 quad = %.10e (closed 1.4864864865e-3)\n",
                reorganization_energy(j2));

    Matrix sz_half(2, 2);
    sz_half << 0.5, 0.0, 0.0, -0.5;
    BathSpec bath1(j1, beta298, sz_half);
    BathSpec bath1c(j1, beta10, sz_half);

    // C(t) oracle vs residue expansion (TM poles + Matsubara)
    const double t_end = u.au_from_fs(500.0);
    auto times = linspace(0.0, t_end, 101);
    auto c_exact = correlation_exact(bath1, times, 1e-10);
    std::printf("C(0) 298K = %.8e %+.2ei\n", c_exact.values[0].real(),
                c_exact.values[0].imag());

    auto modes = tm_pole_modes(j1.tm_terms(), beta298);
    auto matsu = matsubara_modes(j1.tm_terms(), beta298, 1000);
    modes.insert(modes.end(), matsu.begin(), matsu.end());
    auto c_modes = correlation_from_modes(modes, times);
    double dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        dev = std::max(dev, std::abs(c_modes.values[i] - c_exact.values[i]));
    std::printf("max |C_modes - C_exact| = %.3e (C0 = %.3e) rel=%.3e\n", dev,
                std::abs(c_exact.values[0]),
                dev / std::abs(c_exact.values[0]));

    // conjugate channel must reproduce conj(C)
    auto c_conj = correlation_conjugate_from_modes(modes, times);
    double devc = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        devc = std::max(devc,
                        std::abs(c_conj.values[i] - std::conj(c_exact.values[i])));
    std::printf("max |Cbar_modes - conj(C_exact)| rel = %.3e\n",
                devc / std::abs(c_exact.values[0]));

    // |C| at 50 fs vs |C(0)|
    auto t50 = std::vector<double>{0.0, u.au_from_fs(50.0)};
    auto c50 = correlation_exact(bath1, t50, 1e-10);
    std::printf("|C(50fs)|/|C(0)| at 298K = %.4f (expect < 0.2)\n",
                std::abs(c50.values[1]) / std::abs(c50.values[0]));

    // decoherence: analytic vs discrete consistency through a delta-like J
    // single mode (w0, c0): discrete formula vs analytic on narrow Lorentzian
    {
        std::vector<DiscreteMode> dm = {{6e-3, 2e-4}};
        auto tt = linspace(0.0, u.au_from_fs(100.0), 21);
        auto d_disc = decoherence_discrete(dm, beta298, tt);
        // same mode as a very narrow TM peak: p such that J integrates to
        // (pi/2) c^2/w: lambda = c^2/(2 w^2) = p/(4 G (W^2+G^2))
        const double w0 = 6e-3, c0 = 2e-4, G = 1e-6;
        const double p = c0 * c0 / (2.0 * w0 * w0) * 4.0 * G * (w0 * w0 + G * G);
        auto jn = SpectralDensity::tannor_meier({TannorMeierTerm(p, w0, G)});
        BathSpec bn(jn, beta298, sz_half);
        auto d_ana = decoherence_analytic(bn, tt, 1e-10);
        double dd = 0.0;
        for (std::size_t i = 0; i < tt.size(); ++i)
            dd = std::max(dd, std::abs(d_ana[i] - d_disc[i]));
        std::printf("narrow-peak analytic vs discrete decoherence: max dev %.3e\n",
                    dd);
        std::printf("  D_disc(100fs) = %.6f, D_ana = %.6f\n", d_disc.back(),
                    d_ana.back());
    }

    // exponential fit: single-exponential recovery
    {
        auto tg = linspace(0.0, 2000.0, 600);
        std::vector<double> y(tg.size());
        for (std::size_t i = 0; i < tg.size(); ++i)
            y[i] = -std::exp(-0.01 * tg[i]);
        auto fit = fit_exponentials(tg, y, 1);
        std::printf("single-exp fit: a=%.12f b=%.12f rms=%.3e\n",
                    fit.terms[0].a, fit.terms[0].b, fit.rms);
    }

    // Matsubara tail fit for J1 at 10 K (the hard case)
    {
        const auto& terms = j1.tm_terms();
        const int count = auto_matsubara_count(terms, beta10, t_end);
        std::printf("auto Matsubara count at 10K: %d\n", count);
        auto grid = linspace(0.0, t_end, 2000);
        auto tail = matsubara_tail(terms, beta10, count, grid);
        std::printf("C_M1(0) = %.6e\n", tail[0]);
        auto fit = fit_exponentials(grid, tail, 4);
        std::printf("C_M1 4-term fit rms = %.6e (reported 6.41e-10)\n", fit.rms);
        for (const auto& term : fit.terms)
            std::printf("  a=%.6e b=%.6e\n", term.a, term.b);
    }
    return 0;
}
