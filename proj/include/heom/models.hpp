#ifndef HEOM_MODELS_HPP
#define HEOM_MODELS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heom/bath.hpp"
#include "heom/units.hpp"

namespace heom {

inline Matrix sigma_z_half() {
    Matrix s(2, 2);
    s << 0.5, 0.0, 0.0, -0.5;
    return s;
}

/// Qubit H_S = (dE/2) sigma_z diagonally coupled through S = sigma_z / 2:
/// populations freeze, the coherence decays with the closed-form law.
struct PureDephasingModel {
    double delta_e;
    BathSpec bath;

    Matrix hamiltonian() const {
        Matrix h(2, 2);
        h << 0.5 * delta_e, 0.0, 0.0, -0.5 * delta_e;
        return h;
    }
};

inline PureDephasingModel build_pure_dephasing(double delta_e,
                                               SpectralDensity density,
                                               double temperature_K) {
    const double beta = units().beta_from_kelvin(temperature_K);
    return PureDephasingModel{delta_e,
                              BathSpec(std::move(density), beta, sigma_z_half())};
}

/// Two excited states with a correlated tuning bath on the energies and a
/// coupling bath on the inter-state coupling.
struct TwoBathModel {
    double eps1, eps2, alpha_corr;
    BathSpec tuning_bath;    // S_d = |1><1| + alpha |2><2|
    BathSpec coupling_bath;  // S_od = |1><2| + |2><1|

    Matrix hamiltonian() const {
        Matrix h(2, 2);
        h << eps1, 0.0, 0.0, eps2;
        return h;
    }
};

inline Matrix tuning_coupling(double alpha_corr) {
    Matrix s(2, 2);
    s << 1.0, 0.0, 0.0, alpha_corr;
    return s;
}

inline Matrix offdiagonal_coupling() {
    Matrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

/// Ohmic-Lorentzian triples fitted to the dimer's tuning and coupling baths.
inline std::vector<TannorMeierTerm> dimer_tuning_terms() {
    return {TannorMeierTerm(5.30e-10, 1.078687e-2, 3.40e-4),
            TannorMeierTerm(1.06e-10, 7.6634e-3, 4.0e-4),
            TannorMeierTerm(5.30e-11, 5.4517e-3, 3.40e-4)};
}

inline std::vector<TannorMeierTerm> dimer_coupling_terms() {
    return {TannorMeierTerm(3.82e-10, 1.078275e-2, 3.40e-4),
            TannorMeierTerm(1.45e-10, 7.6634e-3, 4.0e-4),
            TannorMeierTerm(4.58e-11, 5.286e-3, 4.50e-4)};
}

inline TwoBathModel build_two_bath(double eps1, double eps2, double alpha_corr,
                                   std::vector<TannorMeierTerm> tuning,
                                   std::vector<TannorMeierTerm> coupling,
                                   double temperature_K) {
    const double beta = units().beta_from_kelvin(temperature_K);
    return TwoBathModel{
        eps1, eps2, alpha_corr,
        BathSpec(SpectralDensity::tannor_meier(std::move(tuning)), beta,
                 tuning_coupling(alpha_corr)),
        BathSpec(SpectralDensity::tannor_meier(std::move(coupling)), beta,
                 offdiagonal_coupling())};
}

/// Populations and coherence in the pi/4-rotated diabatic basis
/// |R>, |L> = (|1> +- |2>)/sqrt(2).
struct RotatedPopulations {
    double pop_r, pop_l;
    Complex coherence_rl;
};

inline RotatedPopulations rotate_basis_pi4(const Matrix& rho_s) {
    if (rho_s.rows() != 2 || rho_s.cols() != 2)
        throw std::invalid_argument("rotate_basis_pi4 needs a 2x2 density matrix");
    const double half_sum = 0.5 * (rho_s(0, 0).real() + rho_s(1, 1).real());
    const Complex r01 = rho_s(0, 1);
    RotatedPopulations out;
    out.pop_r = half_sum + r01.real();
    out.pop_l = half_sum - r01.real();
    out.coherence_rl = 0.5 * (rho_s(0, 0) - rho_s(1, 1)) -
                       Complex(0.0, 1.0) * Complex(r01.imag(), 0.0);
    return out;
}

}  // namespace heom

#endif  // HEOM_MODELS_HPP
