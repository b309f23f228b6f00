#include "cmpkit/coupling.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cmpkit/errors.hpp"

namespace cmpkit {

void PhysicalConstants::validate() const {
    const double vals[] = {reduced_planck_j_s, vacuum_permeability_t_m_per_a,
                           bohr_magneton_j_per_t, lande_g, moment_per_site_bohr,
                           spin_density_per_m3};
    for (double v : vals) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument("physical constants must be strictly positive");
        }
    }
}

Vec3 FieldMap::position_m(std::size_t flat) const {
    const std::size_t nx = shape[0];
    const std::size_t ny = shape[1];
    const std::size_t ix = flat % nx;
    const std::size_t iy = (flat / nx) % ny;
    const std::size_t iz = flat / (nx * ny);
    return {(ix + 0.5) * spacing_m[0], (iy + 0.5) * spacing_m[1], (iz + 0.5) * spacing_m[2]};
}

void FieldMap::validate() const {
    for (int i = 0; i < 3; ++i) {
        if (!(spacing_m[i] > 0.0)) throw InvalidArgument("field map spacing must be positive");
        if (shape[i] < 1) throw InvalidArgument("field map shape must be at least 1 per axis");
    }
    const std::size_t n = cell_count();
    if (n == 0) throw InvalidArgument("field map needs at least one cell");
    if (hx.size() != n || hy.size() != n || hz.size() != n || in_sample.size() != n) {
        throw InvalidArgument("field map arrays must match shape");
    }
    bool any_sample = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(hx[i]) || !std::isfinite(hy[i]) || !std::isfinite(hz[i])) {
            throw InvalidArgument("field map values must be finite");
        }
        any_sample = any_sample || in_sample[i] != 0;
    }
    if (!any_sample) throw InvalidArgument("field map needs at least one in-sample cell");
}

FieldMap FieldMap::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open field map: " + path, path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed field map JSON (" + std::string(e.what()) + "): " + path,
                      path);
    }
    FieldMap m;
    try {
        const auto sp = j.at("spacing_m");
        const auto sh = j.at("shape");
        for (int i = 0; i < 3; ++i) {
            m.spacing_m[i] = sp.at(i).get<double>();
            m.shape[i] = sh.at(i).get<int>();
        }
        m.hx = j.at("hx").get<std::vector<double>>();
        m.hy = j.at("hy").get<std::vector<double>>();
        m.hz = j.at("hz").get<std::vector<double>>();
        for (auto v : j.at("in_sample")) {
            m.in_sample.push_back(v.get<bool>() ? 1 : 0);
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("field map JSON missing fields (" + std::string(e.what()) + "): " + path,
                      path);
    }
    m.validate();
    return m;
}

void FieldMap::save_json(const std::string& path) const {
    validate();
    nlohmann::json j;
    j["spacing_m"] = spacing_m;
    j["shape"] = shape;
    j["hx"] = hx;
    j["hy"] = hy;
    j["hz"] = hz;
    std::vector<bool> mask(in_sample.begin(), in_sample.end());
    j["in_sample"] = mask;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write field map: " + path, path);
    out << j.dump(1) << "\n";
}

std::string to_string(CouplingRegime regime) {
    switch (regime) {
        case CouplingRegime::SC: return "SC";
        case CouplingRegime::USC: return "USC";
        case CouplingRegime::DSC: return "DSC";
    }
    return "?";
}

double filling_factor(const FieldMap& map, Axis bias_axis) {
    map.validate();
    const int k = static_cast<int>(bias_axis);
    const int u = (k + 1) % 3;
    const int v = (k + 2) % 3;
    const double* comps[3] = {map.hx.data(), map.hy.data(), map.hz.data()};
    const double dv = map.cell_volume_m3();

    double int_u = 0.0, int_v = 0.0, energy = 0.0;
    double sample_volume = 0.0;
    const std::size_t n = map.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = comps[0][i];
        const double y = comps[1][i];
        const double z = comps[2][i];
        energy += (x * x + y * y + z * z) * dv;
        if (map.in_sample[i]) {
            int_u += comps[u][i] * dv;
            int_v += comps[v][i] * dv;
            sample_volume += dv;
        }
    }
    if (energy <= 0.0) {
        throw UndefinedFillingError("filling factor undefined for an all-zero field map");
    }
    const double eta = std::sqrt((int_u * int_u + int_v * int_v) / (sample_volume * energy));
    return std::min(eta, 1.0);  // Cauchy-Schwarz bound, up to roundoff
}

namespace {

// sqrt(mu/(g_l mu_B) * mu0 * hbar * n_s) * gamma/(4 pi): Hz per sqrt(rad/s).
double material_constant(const PhysicalConstants& c, double gyro_ghz_per_t) {
    const double gamma = 2.0 * M_PI * gyro_ghz_per_t * 1e9;  // rad/s per T
    return gamma / (4.0 * M_PI) *
           std::sqrt(c.moment_ratio() * c.vacuum_permeability_t_m_per_a *
                     c.reduced_planck_j_s * c.spin_density_per_m3);
}

} // namespace

double coupling_strength_ghz(double eta, double cavity_freq_ghz,
                             const PhysicalConstants& constants, double gyro_ghz_per_t) {
    constants.validate();
    if (eta < 0.0 || eta > 1.0) throw InvalidArgument("filling factor must be in [0, 1]");
    if (!(cavity_freq_ghz > 0.0)) throw InvalidArgument("cavity frequency must be positive");
    const double omega = 2.0 * M_PI * cavity_freq_ghz * 1e9;  // rad/s
    const double g_hz = eta * std::sqrt(omega) * material_constant(constants, gyro_ghz_per_t);
    return g_hz / 1e9;
}

double dsc_threshold_frequency_ghz(double eta, const PhysicalConstants& constants,
                                   double gyro_ghz_per_t) {
    constants.validate();
    if (!(eta > 0.0) || eta > 1.0) throw InvalidArgument("filling factor must be in (0, 1]");
    // g/2pi = eta sqrt(omega) K and g/omega = 1 at omega = (2 pi eta K)^2.
    const double k = material_constant(constants, gyro_ghz_per_t);
    return 2.0 * M_PI * (eta * k) * (eta * k) / 1e9;
}

CouplingRegime classify_regime(double g_over_omega) {
    if (g_over_omega < 0.0) throw InvalidArgument("g/omega must be non-negative");
    if (g_over_omega < 0.1) return CouplingRegime::SC;
    if (g_over_omega < 1.0) return CouplingRegime::USC;
    return CouplingRegime::DSC;
}

TableConsistency table_consistency(double g_over_2pi_ghz, double f_bm_ghz) {
    if (!(f_bm_ghz > 0.0)) throw InvalidArgument("cavity frequency must be positive");
    return {g_over_2pi_ghz / f_bm_ghz, g_over_2pi_ghz * g_over_2pi_ghz / f_bm_ghz};
}

CouplingResult coupling_from_map(const FieldMap& map, Axis bias_axis, double cavity_freq_ghz,
                                 const PhysicalConstants& constants, double gyro_ghz_per_t) {
    CouplingResult r;
    r.eta = filling_factor(map, bias_axis);
    r.g_over_2pi_ghz = coupling_strength_ghz(r.eta, cavity_freq_ghz, constants, gyro_ghz_per_t);
    r.g_over_omega = r.g_over_2pi_ghz / cavity_freq_ghz;
    r.regime = classify_regime(r.g_over_omega);
    return r;
}

} // namespace cmpkit
