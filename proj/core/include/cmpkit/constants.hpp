#pragma once

namespace cmpkit {

/// SI constants plus the YIG material numbers entering the coupling formula.
struct PhysicalConstants {
    double reduced_planck_j_s = 1.054571817e-34;
    double vacuum_permeability_t_m_per_a = 1.25663706212e-6;
    double bohr_magneton_j_per_t = 9.2740100783e-24;
    double lande_g = 2.0;
    double moment_per_site_bohr = 5.0;  // magnetic moment in units of mu_B
    double spin_density_per_m3 = 4.22e27;

    /// mu / (g_l * mu_B): the Bohr magneton cancels.
    double moment_ratio() const { return moment_per_site_bohr / lande_g; }

    /// mu0 * n_s * mu, the saturation implied by the spin density (~0.246 T).
    double implied_saturation_t() const {
        return vacuum_permeability_t_m_per_a * spin_density_per_m3 *
               moment_per_site_bohr * bohr_magneton_j_per_t;
    }

    void validate() const;
};

} // namespace cmpkit
