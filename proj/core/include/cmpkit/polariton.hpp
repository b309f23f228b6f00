#pragma once

#include <string>

namespace cmpkit {

enum class DispersionModel { Rwa, DickeFull, DickeSuperradiant, Hopfield, ShiftedDicke };

std::string to_string(DispersionModel model);
/// Accepts "rwa", "dicke", "superradiant", "hopfield", "shifted-dicke".
DispersionModel dispersion_model_from_string(const std::string& name);

struct DispersionModelParams {
    double cavity_freq_ghz = 0.0;   // f_BM
    double coupling_ghz = 0.0;      // g / 2pi
    double magnon_shift_ghz = 0.0;  // Delta_m / 2pi (ShiftedDicke)
    double hopfield_prefactor = 1.0;
    DispersionModel model = DispersionModel::DickeFull;
    // Evaluate the modified-Hopfield dispersion exactly as printed (cavity
    // frequency squared appearing twice) instead of the corrected form whose
    // d = 0 limit recovers the full Dicke dispersion.
    bool hopfield_literal = false;

    void validate() const;
};

/// Lower/upper polariton branch frequencies in GHz.
struct BranchPair {
    double lower_ghz = 0.0;
    double upper_ghz = 0.0;
};

/// Full Dicke dispersion (co- and counter-rotating terms):
///   w_pm^2 = (w^2 + wm^2 +- sqrt((w^2 - wm^2)^2 + 16 g^2 w wm)) / 2.
/// Throws UnstableRegimeError when the lower radicand is negative,
/// i.e. g > sqrt(w * wm) / 2.
BranchPair dicke_full(const DispersionModelParams& params, double magnon_freq_ghz);

/// Rotating-wave approximation:
///   w_pm = (w + wm)/2 +- sqrt(((w - wm)/2)^2 + g^2).
BranchPair rwa(const DispersionModelParams& params, double magnon_freq_ghz);

/// Superradiant-phase Dicke dispersion with gt = 2 g / w:
///   w_pm^2 = (w^2 + gt^4 wm^2 +- sqrt((w^2 - gt^4 wm^2)^2 + 4 w^2 wm^2)) / 2.
/// Valid for g/w >= 0.5; throws PhaseValidityError below that.
BranchPair dicke_superradiant(const DispersionModelParams& params, double magnon_freq_ghz);

/// Hopfield dispersion with diamagnetic prefactor d and D = g^2 / wm:
///   w_pm^2 = (w^2 + 4 d D w + wm^2 +- sqrt((w^2 + 4 d D w - wm^2)^2 + 16 g^2 w wm)) / 2.
/// d = 1 is the standard model; d = 0 reduces to dicke_full exactly.
/// Throws SingularDiamagneticError for wm = 0 with g > 0 and d != 0.
BranchPair hopfield(const DispersionModelParams& params, double magnon_freq_ghz);

/// dicke_full evaluated at wm + magnon_shift.
BranchPair shifted_dicke(const DispersionModelParams& params, double magnon_freq_ghz);

/// Dispatch on params.model.
BranchPair branches(const DispersionModelParams& params, double magnon_freq_ghz);

/// Branch evaluation that never throws: radicands are clamped at zero and the
/// superradiant phase check is skipped. Used inside optimizers whose iterates
/// may momentarily leave the stable region.
BranchPair branches_clamped(const DispersionModelParams& params, double magnon_freq_ghz);

/// Zero-field offset of the upper polariton above the bare cavity frequency
/// for the shifted-Dicke model. The zero-field magnon frequency defaults to 0,
/// so the dispersion is evaluated at wm = Delta_m.
/// Requires params.model == ShiftedDicke.
double zero_field_gap_ghz(const DispersionModelParams& params,
                          double zero_field_magnon_ghz = 0.0);

} // namespace cmpkit
