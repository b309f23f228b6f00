#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cmpkit/constants.hpp"
#include "cmpkit/geometry.hpp"

namespace cmpkit {

/// Discrete RF magnetic-field map on a uniform grid. Flat arrays are stored
/// x-fastest: flat = ix + nx * (iy + ny * iz). Field amplitudes share an
/// arbitrary common scale; the filling factor is scale-invariant.
struct FieldMap {
    Vec3 spacing_m{};
    std::array<int, 3> shape{};
    std::vector<double> hx, hy, hz;
    std::vector<std::uint8_t> in_sample;

    std::size_t cell_count() const {
        return static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
    }
    double cell_volume_m3() const { return spacing_m[0] * spacing_m[1] * spacing_m[2]; }
    /// Cell-center position of a flat index.
    Vec3 position_m(std::size_t flat) const;

    void validate() const;

    static FieldMap load_json(const std::string& path);
    void save_json(const std::string& path) const;
};

enum class CouplingRegime { SC, USC, DSC };

std::string to_string(CouplingRegime regime);

struct CouplingResult {
    double eta = 0.0;
    double g_over_2pi_ghz = 0.0;
    double g_over_omega = 0.0;
    CouplingRegime regime = CouplingRegime::SC;
};

/// Filling factor
///   eta = sqrt((I_u^2 + I_v^2) / (V_m * E)),
/// where I_u, I_v integrate the two field components transverse to the bias
/// axis over the sample volume and E integrates |h|^2 over the whole map.
/// Midpoint sums with the cell volume as weight. Throws UndefinedFillingError
/// when the map carries no field energy.
double filling_factor(const FieldMap& map, Axis bias_axis);

/// Coupling strength in GHz:
///   g/2pi = eta * sqrt(omega) * (gamma / 4pi) * sqrt(mu/(g_l mu_B) * mu0 * hbar * n_s)
/// with omega = 2pi f in rad/s. The only place angular SI units appear.
double coupling_strength_ghz(double eta, double cavity_freq_ghz,
                             const PhysicalConstants& constants = {},
                             double gyro_ghz_per_t = 28.0);

/// Cavity frequency at which g/omega reaches 1 for a given filling factor:
///   f = 2pi * (eta * K)^2 with K the material constant from the g formula.
double dsc_threshold_frequency_ghz(double eta, const PhysicalConstants& constants = {},
                                   double gyro_ghz_per_t = 28.0);

/// SC for g/w < 0.1, USC for 0.1 <= g/w < 1, DSC for g/w >= 1.
CouplingRegime classify_regime(double g_over_omega);

struct TableConsistency {
    double g_over_omega = 0.0;
    double g_sq_over_omega_ghz = 0.0;  // (g/2pi)^2 / f_BM
};

/// Recompute the two derived table columns from g/2pi and f_BM.
TableConsistency table_consistency(double g_over_2pi_ghz, double f_bm_ghz);

/// Filling factor, coupling strength and regime for a field map in one call.
CouplingResult coupling_from_map(const FieldMap& map, Axis bias_axis, double cavity_freq_ghz,
                                 const PhysicalConstants& constants = {},
                                 double gyro_ghz_per_t = 28.0);

} // namespace cmpkit
