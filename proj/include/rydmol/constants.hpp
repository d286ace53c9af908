#pragma once

#include <string>

namespace rydmol {

/// Conversion factors between atomic units and the laboratory units used at
/// the I/O boundary. Everything inside the numeric core is hartree / bohr /
/// electron mass.
struct PhysicalConstants {
    double hartree_to_mhz = 6.579683920502e9;      // E_h / h in MHz
    double bohr_magneton_mhz_per_gauss = 1.39962449361;
    double amu_to_me = 1822.888486209;             // u / m_e
    double mass_rb87_amu = 86.909180531;
    double field_au_to_v_per_cm = 5.14220674763e9; // E_h / (e a_0) in V/cm
    std::string vintage = "CODATA 2018";

    /// Throws InputError when a value is non-positive or outside its sanity bound.
    void validate() const;
};

double energy_au_to_mhz(double hartree, const PhysicalConstants& c = {});
double energy_mhz_to_au(double mhz, const PhysicalConstants& c = {});

/// Reduced mass of the homonuclear 87Rb dimer, m(87Rb)/2, in electron masses.
double reduced_mass_rb2(const PhysicalConstants& c = {});

double field_v_per_cm_to_au(double v_per_cm, const PhysicalConstants& c = {});

}  // namespace rydmol
