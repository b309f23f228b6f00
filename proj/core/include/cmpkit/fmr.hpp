#pragma once

#include "cmpkit/geometry.hpp"

namespace cmpkit {

/// Inputs for the slab ferromagnetic-resonance frequency. The demag tensor is
/// a single representative tensor (center-evaluated by default, matching the
/// analytic treatment; a volume average may be substituted).
struct FmrParams {
    double gyro_ghz_per_t = 28.0;  // gamma / 2pi
    SampleGeometry geometry{};
    DemagTensor demag{};

    void validate() const;

    /// Params with the demag tensor evaluated at the sample center.
    static FmrParams for_geometry(const SampleGeometry& geom, double gyro_ghz_per_t = 28.0);
    /// Default YIG slab at center evaluation.
    static FmrParams yig_slab_default();
};

/// Effective static field inside the sample: applied - N_bias * mu0*Ms.
double internal_field_t(double applied_t, const FmrParams& params);

/// Kittel-form resonance frequency in GHz for the prism, even in the sign of
/// the applied field. The internal field (internal_field_t of |applied|)
/// enters the ellipsoid form as
///   f_e = gyro * sqrt((B_i + N_xx mu0Ms)(B_i + N_yy mu0Ms))
/// which for an ellipsoid is identical to the textbook
///   gyro * sqrt((|B| + (N_xx-N_zz) mu0Ms)(|B| + (N_yy-N_zz) mu0Ms)),
/// then corrected by the off-diagonal term
///   f0 = sqrt(f_e^2 - (gyro * (N_xy+N_yx) mu0Ms)^2).
/// Indices here are relative to the bias axis (bias plays the role of z).
/// Throws UnsaturatedError (carrying the field) when a radicand is negative.
double fmr_frequency_ghz(double applied_t, const FmrParams& params);

} // namespace cmpkit
