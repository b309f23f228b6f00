#include "cmpkit/fmr.hpp"

#include <cmath>

#include "cmpkit/errors.hpp"

namespace cmpkit {

void FmrParams::validate() const {
    if (!(gyro_ghz_per_t > 0.0)) {
        throw InvalidArgument("gyromagnetic ratio must be positive");
    }
    geometry.validate();
    demag.validate();
}

FmrParams FmrParams::for_geometry(const SampleGeometry& geom, double gyro_ghz_per_t) {
    FmrParams p;
    p.gyro_ghz_per_t = gyro_ghz_per_t;
    p.geometry = geom;
    p.demag = demag_center(geom);
    return p;
}

FmrParams FmrParams::yig_slab_default() { return for_geometry(SampleGeometry::yig_slab()); }

double internal_field_t(double applied_t, const FmrParams& params) {
    const double n_bias = params.demag.diag(params.geometry.bias_axis);
    return applied_t - n_bias * params.geometry.saturation_t;
}

double fmr_frequency_ghz(double applied_t, const FmrParams& params) {
    params.validate();
    const int k = static_cast<int>(params.geometry.bias_axis);
    const int i = (k + 1) % 3;
    const int j = (k + 2) % 3;
    const double ms = params.geometry.saturation_t;
    const auto& n = params.demag.n;

    // |B| folds in the symmetric +-H measurement; the internal field then
    // enters the ellipsoid form with the plain transverse components, which
    // is the (|B| + (N_ii - N_kk) Ms) Kittel expression rearranged.
    const double b_int = std::abs(applied_t) - n[k][k] * ms;
    const double fac_i = b_int + n[i][i] * ms;
    const double fac_j = b_int + n[j][j] * ms;
    const double fe_sq = fac_i * fac_j;
    if (fac_i < 0.0 || fac_j < 0.0) {
        throw UnsaturatedError("field below saturation for this geometry", applied_t);
    }

    const double offdiag = (n[i][j] + n[j][i]) * ms;
    const double f0_sq = fe_sq - offdiag * offdiag;
    if (f0_sq < 0.0) {
        throw UnsaturatedError("off-diagonal demag correction exceeds the ellipsoid term",
                               applied_t);
    }
    return params.gyro_ghz_per_t * std::sqrt(f0_sq);
}

} // namespace cmpkit
