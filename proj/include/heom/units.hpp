#ifndef HEOM_UNITS_HPP
#define HEOM_UNITS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace heom {

/// Atomic units everywhere (hbar = 1). The two constants below are the single
/// source of truth for every conversion in the library.
struct UnitSystem {
    double hartree_per_kelvin = 3.166811563e-6;  // Boltzmann constant, Eh/K
    double fs_per_au_time = 0.02418884254;       // 1 a.u. of time in fs

    // derived, fixed by definition of the wavenumber and electronvolt
    static constexpr double hartree_per_inverse_cm = 4.5563352529120e-6;
    static constexpr double hartree_per_ev = 3.6749322175655e-2;

    double beta_from_kelvin(double temperature_K) const {
        if (temperature_K <= 0.0)
            throw std::invalid_argument("temperature must be positive");
        return 1.0 / (hartree_per_kelvin * temperature_K);
    }
    double kelvin_from_beta(double beta) const {
        if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
        return 1.0 / (hartree_per_kelvin * beta);
    }
    double au_from_fs(double t_fs) const { return t_fs / fs_per_au_time; }
    double fs_from_au(double t_au) const { return t_au * fs_per_au_time; }
};

inline const UnitSystem& units() {
    static const UnitSystem u{};
    return u;
}

enum class Unit { Au, Ev, InverseCm, Kelvin, Fs };

inline Unit parse_unit(const std::string& name) {
    if (name == "au") return Unit::Au;
    if (name == "ev") return Unit::Ev;
    if (name == "cm-1") return Unit::InverseCm;
    if (name == "kelvin") return Unit::Kelvin;
    if (name == "fs") return Unit::Fs;
    throw std::invalid_argument("unknown unit '" + name +
                                "' (accepted: au, ev, cm-1, kelvin, fs)");
}

/// Convert an energy-like quantity to atomic units. Kelvin converts via k_B.
inline double energy_to_au(double value, Unit unit) {
    const UnitSystem& u = units();
    switch (unit) {
        case Unit::Au: return value;
        case Unit::Ev: return value * UnitSystem::hartree_per_ev;
        case Unit::InverseCm: return value * UnitSystem::hartree_per_inverse_cm;
        case Unit::Kelvin: return value * u.hartree_per_kelvin;
        case Unit::Fs: throw std::invalid_argument("fs is not an energy unit");
    }
    throw std::logic_error("unreachable");
}

inline double time_to_au(double value, Unit unit) {
    switch (unit) {
        case Unit::Au: return value;
        case Unit::Fs: return units().au_from_fs(value);
        default: throw std::invalid_argument("not a time unit");
    }
}

}  // namespace heom

#endif  // HEOM_UNITS_HPP
