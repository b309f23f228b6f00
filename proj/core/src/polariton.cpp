#include "cmpkit/polariton.hpp"

#include <algorithm>
#include <cmath>

#include "cmpkit/errors.hpp"

namespace cmpkit {

std::string to_string(DispersionModel model) {
    switch (model) {
        case DispersionModel::Rwa: return "rwa";
        case DispersionModel::DickeFull: return "dicke";
        case DispersionModel::DickeSuperradiant: return "superradiant";
        case DispersionModel::Hopfield: return "hopfield";
        case DispersionModel::ShiftedDicke: return "shifted-dicke";
    }
    return "?";
}

DispersionModel dispersion_model_from_string(const std::string& name) {
    if (name == "rwa") return DispersionModel::Rwa;
    if (name == "dicke") return DispersionModel::DickeFull;
    if (name == "superradiant") return DispersionModel::DickeSuperradiant;
    if (name == "hopfield") return DispersionModel::Hopfield;
    if (name == "shifted-dicke") return DispersionModel::ShiftedDicke;
    throw InvalidArgument("unknown dispersion model: " + name);
}

void DispersionModelParams::validate() const {
    if (!(cavity_freq_ghz > 0.0)) throw InvalidArgument("cavity frequency must be positive");
    if (coupling_ghz < 0.0) throw InvalidArgument("coupling must be non-negative");
    if (magnon_shift_ghz < 0.0) throw InvalidArgument("magnon shift must be non-negative");
    if (model == DispersionModel::DickeSuperradiant &&
        coupling_ghz / cavity_freq_ghz < 0.5) {
        throw PhaseValidityError("superradiant dispersion requires g/omega >= 0.5");
    }
}

namespace {

// Shared quadratic-eigenvalue shape: w_pm^2 = (sum +- sqrt(inner)) / 2.
BranchPair from_squares(double sum, double inner, bool clamp) {
    const double root = std::sqrt(std::max(inner, 0.0));
    double lo2 = 0.5 * (sum - root);
    const double up2 = 0.5 * (sum + root);
    if (lo2 < 0.0) {
        // absorb roundoff at the boundary, reject genuine instability
        if (!clamp && lo2 < -1e-12 * std::max(1.0, std::abs(sum))) {
            throw UnstableRegimeError(
                "lower polariton branch squared frequency is negative (g exceeds "
                "sqrt(w*wm)/2)");
        }
        lo2 = 0.0;
    }
    return {std::sqrt(lo2), std::sqrt(up2)};
}

BranchPair dicke_impl(double w, double wm, double g, bool clamp) {
    const double w2 = w * w;
    const double wm2 = wm * wm;
    const double diff = w2 - wm2;
    return from_squares(w2 + wm2, diff * diff + 16.0 * g * g * w * wm, clamp);
}

BranchPair hopfield_impl(double w, double wm, double g, double d, bool literal, bool clamp) {
    if (wm == 0.0 && g > 0.0 && d != 0.0) {
        if (!clamp) {
            throw SingularDiamagneticError(
                "diamagnetic term g^2/wm diverges at zero magnon frequency");
        }
        wm = 1e-9 * std::max(w, 1.0);
    }
    const double w2 = w * w;
    const double wm2 = wm * wm;
    const double dd = (d != 0.0 && g != 0.0) ? 4.0 * d * (g * g / wm) * w : 0.0;
    // As printed the dispersion repeats the cavity term; the corrected form
    // reads the second occurrence as wm^2 so that d = 0 recovers the full
    // Dicke dispersion.
    const double sum = literal ? (w2 + dd + w2) : (w2 + dd + wm2);
    const double diff = w2 + dd - wm2;
    return from_squares(sum, diff * diff + 16.0 * g * g * w * wm, clamp);
}

BranchPair superradiant_impl(double w, double wm, double g, bool clamp) {
    if (!clamp && g < 0.5 * w) {
        throw PhaseValidityError("superradiant dispersion requires g/omega >= 0.5");
    }
    const double gt = (w > 0.0) ? 2.0 * g / w : 0.0;
    const double gt4 = gt * gt * gt * gt;
    const double w2 = w * w;
    const double m2 = gt4 * wm * wm;
    const double diff = w2 - m2;
    return from_squares(w2 + m2, diff * diff + 4.0 * w2 * wm * wm, clamp);
}

BranchPair dispatch(const DispersionModelParams& p, double wm, bool clamp) {
    switch (p.model) {
        case DispersionModel::Rwa: return rwa(p, wm);
        case DispersionModel::DickeFull:
            return dicke_impl(p.cavity_freq_ghz, wm, p.coupling_ghz, clamp);
        case DispersionModel::DickeSuperradiant:
            return superradiant_impl(p.cavity_freq_ghz, wm, p.coupling_ghz, clamp);
        case DispersionModel::Hopfield:
            return hopfield_impl(p.cavity_freq_ghz, wm, p.coupling_ghz,
                                 p.hopfield_prefactor, p.hopfield_literal, clamp);
        case DispersionModel::ShiftedDicke:
            return dicke_impl(p.cavity_freq_ghz, wm + p.magnon_shift_ghz, p.coupling_ghz,
                              clamp);
    }
    throw InvalidArgument("unknown dispersion model");
}

void require_magnon(double wm) {
    if (wm < 0.0) throw InvalidArgument("magnon frequency must be non-negative");
}

} // namespace

BranchPair dicke_full(const DispersionModelParams& params, double magnon_freq_ghz) {
    require_magnon(magnon_freq_ghz);
    return dicke_impl(params.cavity_freq_ghz, magnon_freq_ghz, params.coupling_ghz, false);
}

BranchPair rwa(const DispersionModelParams& params, double magnon_freq_ghz) {
    require_magnon(magnon_freq_ghz);
    const double w = params.cavity_freq_ghz;
    const double wm = magnon_freq_ghz;
    const double g = params.coupling_ghz;
    const double mid = 0.5 * (w + wm);
    const double half = 0.5 * (w - wm);
    const double root = std::sqrt(half * half + g * g);
    return {std::max(mid - root, 0.0), mid + root};
}

BranchPair dicke_superradiant(const DispersionModelParams& params, double magnon_freq_ghz) {
    require_magnon(magnon_freq_ghz);
    return superradiant_impl(params.cavity_freq_ghz, magnon_freq_ghz, params.coupling_ghz,
                             false);
}

BranchPair hopfield(const DispersionModelParams& params, double magnon_freq_ghz) {
    require_magnon(magnon_freq_ghz);
    return hopfield_impl(params.cavity_freq_ghz, magnon_freq_ghz, params.coupling_ghz,
                         params.hopfield_prefactor, params.hopfield_literal, false);
}

BranchPair shifted_dicke(const DispersionModelParams& params, double magnon_freq_ghz) {
    require_magnon(magnon_freq_ghz);
    return dicke_impl(params.cavity_freq_ghz, magnon_freq_ghz + params.magnon_shift_ghz,
                      params.coupling_ghz, false);
}

BranchPair branches(const DispersionModelParams& params, double magnon_freq_ghz) {
    require_magnon(magnon_freq_ghz);
    return dispatch(params, magnon_freq_ghz, false);
}

BranchPair branches_clamped(const DispersionModelParams& params, double magnon_freq_ghz) {
    return dispatch(params, std::max(magnon_freq_ghz, 0.0), true);
}

double zero_field_gap_ghz(const DispersionModelParams& params, double zero_field_magnon_ghz) {
    if (params.model != DispersionModel::ShiftedDicke) {
        throw InvalidArgument("zero-field gap is defined for the shifted-Dicke model");
    }
    if (zero_field_magnon_ghz < 0.0) {
        throw InvalidArgument("zero-field magnon frequency must be non-negative");
    }
    // Only the upper branch enters; the lower branch may be imaginary at zero
    // field in the strong-shift regime, so the clamped evaluation is used.
    const BranchPair b = branches_clamped(params, zero_field_magnon_ghz);
    return b.upper_ghz - params.cavity_freq_ghz;
}

} // namespace cmpkit
