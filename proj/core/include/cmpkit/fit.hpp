#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cmpkit/fmr.hpp"
#include "cmpkit/polariton.hpp"
#include "cmpkit/spectrum.hpp"

namespace cmpkit {

/// Named parameter record shared by fits across models. Unused entries keep
/// their defaults (e.g. delta_m for the plain Dicke model).
struct FitParameters {
    double f_bm_ghz = 0.0;
    double g_ghz = 0.0;
    double delta_m_ghz = 0.0;
    double f_dm_ghz = 0.0;
    double d = 1.0;

    double get(const std::string& name) const;
    void set(const std::string& name, double value);
};

/// Parameter names understood by FitProblem::fixed and bounds:
/// "f_bm", "g", "delta_m", "f_dm", "d".
const std::vector<std::string>& fit_parameter_names();

struct FitProblem {
    BranchData data;
    DispersionModel model = DispersionModel::ShiftedDicke;
    FmrParams fmr{};
    std::set<std::string> fixed;
    // Empty -> derived via initial_guess(data).
    std::optional<FitParameters> guess;
    // Per-parameter [lo, hi] overrides. Defaults: g in (0, f_bm],
    // delta_m in [0, 2 f_bm] (tracking the current f_bm), others positive.
    std::map<std::string, std::pair<double, double>> bounds;
    int max_iterations = 200;
    bool hopfield_literal = false;
};

enum class ConvergenceReason { GradientNorm, StepSize, None };

std::string to_string(ConvergenceReason reason);

struct FitResult {
    FitParameters params{};
    FitParameters stderrs{};         // Gauss-Newton standard errors; 0 for held parameters
    double residual_rms_ghz = 0.0;
    int iterations = 0;
    bool converged = false;
    ConvergenceReason reason = ConvergenceReason::None;
    double gradient_norm = 0.0;
    std::vector<double> objective_trace;  // accepted sum-of-squares values
    std::vector<std::string> free_names;
};

/// Damped Gauss-Newton least squares on branch positions: lower/upper points
/// route through the selected dispersion (magnon frequency from the FMR of
/// the data point's field), dark points through the constant f_dm. Damping is
/// multiplicative on the normal-matrix diagonal (x10 on reject, /10 on
/// accept, initial 1e-3). Converges on relative step < 1e-9 or gradient
/// infinity-norm < 1e-10. Data points are canonically sorted first, so the
/// result is independent of input order.
/// Throws InvalidArgument for bad problems and RankDeficientError (naming the
/// parameter) when the normal equations are singular. Non-convergence after
/// max_iterations returns converged = false rather than throwing.
FitResult fit(const FitProblem& problem);

/// Fold fields to |field|, keeping duplicates (doubles symmetric sweeps).
BranchData symmetrize(const BranchData& data);

/// Deterministic starting point: f_dm = median of dark points, f_bm = midpoint
/// between the lower branch's maximum and the upper branch's minimum,
/// g = half the minimum upper-lower separation, delta_m = 0.
/// Throws InvalidArgument when either branch is absent (an explicit guess is
/// then required).
FitParameters initial_guess(const BranchData& data);

} // namespace cmpkit
