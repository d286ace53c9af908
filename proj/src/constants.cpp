#include "rydmol/constants.hpp"

#include <cmath>

#include "rydmol/error.hpp"

namespace rydmol {

namespace {

void require_positive(double value, const char* name)
{
    if (!(std::isfinite(value) && value > 0.0)) {
        throw InputError(std::string("physical constant '") + name + "' must be finite and positive");
    }
}

}  // namespace

void PhysicalConstants::validate() const
{
    require_positive(hartree_to_mhz, "hartree_to_mhz");
    require_positive(bohr_magneton_mhz_per_gauss, "bohr_magneton_mhz_per_gauss");
    require_positive(amu_to_me, "amu_to_me");
    require_positive(mass_rb87_amu, "mass_rb87_amu");
    require_positive(field_au_to_v_per_cm, "field_au_to_v_per_cm");
    if (hartree_to_mhz < 6.5e9 || hartree_to_mhz > 6.7e9) {
        throw InputError("physical constant 'hartree_to_mhz' outside sanity bound [6.5e9, 6.7e9]");
    }
}

double energy_au_to_mhz(double hartree, const PhysicalConstants& c)
{
    return hartree * c.hartree_to_mhz;
}

double energy_mhz_to_au(double mhz, const PhysicalConstants& c)
{
    return mhz / c.hartree_to_mhz;
}

double reduced_mass_rb2(const PhysicalConstants& c)
{
    return 0.5 * c.mass_rb87_amu * c.amu_to_me;
}

double field_v_per_cm_to_au(double v_per_cm, const PhysicalConstants& c)
{
    return v_per_cm / c.field_au_to_v_per_cm;
}

}  // namespace rydmol
