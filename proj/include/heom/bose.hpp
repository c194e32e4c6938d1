#ifndef HEOM_BOSE_HPP
#define HEOM_BOSE_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace heom {

/// Thermal occupancy n_beta(omega) = 1/(e^{beta omega} - 1).
/// Negative for omega < 0: n(-w) = -1 - n(w).
inline double bose_occupancy(double omega, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (omega == 0.0)
        throw std::invalid_argument(
            "bose_occupancy at omega = 0: evaluate thermal density via its "
            "omega -> 0 limit instead");
    return 1.0 / std::expm1(beta * omega);
}

/// 1 + n_beta(omega) = 1/(1 - e^{-beta omega}), stable for large |beta omega|.
inline double bose_occupancy_plus_one(double omega, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (omega == 0.0)
        throw std::invalid_argument(
            "bose_occupancy at omega = 0: evaluate thermal density via its "
            "omega -> 0 limit instead");
    return 1.0 / (-std::expm1(-beta * omega));
}

/// coth with the Laurent expansion 1/x + x/3 - x^3/45 below |x| = 1e-4,
/// where the direct formula loses the 1/x cancellation.
inline double coth(double x) {
    if (std::abs(x) < 1e-4) return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    // (1 + e^{-2|x|}) / (1 - e^{-2|x|}): no overflow for any x
    const double w = std::exp(-2.0 * std::abs(x));
    const double c = (1.0 + w) / (1.0 - w);
    return x > 0.0 ? c : -c;
}

inline std::complex<double> coth(std::complex<double> z) {
    if (std::abs(z) < 1e-4) return 1.0 / z + z / 3.0 - z * z * z / 45.0;
    if (z.real() < 0.0) return -coth(-z);
    const std::complex<double> w = std::exp(-2.0 * z);  // |w| < 1 for Re z > 0
    const std::complex<double> den = 1.0 - w;
    if (std::abs(den) < 1e-300) throw std::domain_error("coth pole hit");
    return (1.0 + w) / den;
}

}  // namespace heom

#endif  // HEOM_BOSE_HPP
