#include "cmpkit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "cmpkit/errors.hpp"

namespace cmpkit {

namespace {

constexpr const char* kNames[] = {"f_bm", "g", "delta_m", "f_dm", "d"};
constexpr int kNumParams = 5;
constexpr double kStepTol = 1e-9;
constexpr double kGradTol = 1e-10;

int name_index(const std::string& name) {
    for (int i = 0; i < kNumParams; ++i) {
        if (name == kNames[i]) return i;
    }
    throw InvalidArgument("unknown fit parameter: " + name);
}

} // namespace

double FitParameters::get(const std::string& name) const {
    switch (name_index(name)) {
        case 0: return f_bm_ghz;
        case 1: return g_ghz;
        case 2: return delta_m_ghz;
        case 3: return f_dm_ghz;
        default: return d;
    }
}

void FitParameters::set(const std::string& name, double value) {
    switch (name_index(name)) {
        case 0: f_bm_ghz = value; break;
        case 1: g_ghz = value; break;
        case 2: delta_m_ghz = value; break;
        case 3: f_dm_ghz = value; break;
        default: d = value; break;
    }
}

const std::vector<std::string>& fit_parameter_names() {
    static const std::vector<std::string> names(kNames, kNames + kNumParams);
    return names;
}

std::string to_string(ConvergenceReason reason) {
    switch (reason) {
        case ConvergenceReason::GradientNorm: return "gradient";
        case ConvergenceReason::StepSize: return "step";
        case ConvergenceReason::None: return "none";
    }
    return "?";
}

BranchData symmetrize(const BranchData& data) {
    BranchData out = data;
    for (auto& p : out.points) p.field_t = std::abs(p.field_t);
    return out;
}

FitParameters initial_guess(const BranchData& data) {
    double lower_max = -std::numeric_limits<double>::infinity();
    double upper_min = std::numeric_limits<double>::infinity();
    bool have_lower = false, have_upper = false;
    std::vector<double> darks;
    // minimum upper-lower separation over fields where both are present
    std::map<double, std::pair<double, double>> by_field;  // field -> (max lower, min upper)
    for (const auto& p : data.points) {
        switch (p.label) {
            case BranchLabel::Dark:
                darks.push_back(p.freq_ghz);
                break;
            case BranchLabel::Lower: {
                have_lower = true;
                lower_max = std::max(lower_max, p.freq_ghz);
                auto& e = by_field.try_emplace(p.field_t, -1.0, -1.0).first->second;
                e.first = std::max(e.first, p.freq_ghz);
                break;
            }
            case BranchLabel::Upper: {
                have_upper = true;
                upper_min = std::min(upper_min, p.freq_ghz);
                auto& e = by_field.try_emplace(p.field_t, -1.0, -1.0).first->second;
                e.second = e.second < 0.0 ? p.freq_ghz : std::min(e.second, p.freq_ghz);
                break;
            }
        }
    }
    if (!have_lower || !have_upper) {
        throw InvalidArgument(
            "initial guess needs both branches; supply an explicit starting point");
    }
    double min_sep = std::numeric_limits<double>::infinity();
    for (const auto& [field, lu] : by_field) {
        if (lu.first >= 0.0 && lu.second >= 0.0) min_sep = std::min(min_sep, lu.second - lu.first);
    }
    if (!std::isfinite(min_sep)) min_sep = upper_min - lower_max;

    FitParameters q;
    q.f_bm_ghz = 0.5 * (lower_max + upper_min);
    q.g_ghz = std::max(0.5 * min_sep, 1e-3);
    q.delta_m_ghz = 0.0;
    q.d = 1.0;
    if (!darks.empty()) {
        std::sort(darks.begin(), darks.end());
        const std::size_t n = darks.size();
        q.f_dm_ghz = n % 2 ? darks[n / 2] : 0.5 * (darks[n / 2 - 1] + darks[n / 2]);
    }
    return q;
}

namespace {

struct Point {
    double field_t;
    double y_ghz;
    BranchLabel label;
    double wm_ghz;  // magnon frequency at this field (unused for dark)
};

// solve A x = b for SPD A (n x n, row-major); returns false if not positive definite
bool cholesky_solve(std::vector<double> a, std::vector<double> b, int n,
                    std::vector<double>& x) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (s <= 0.0) return false;
                a[i * n + i] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
    }
    // forward then backward substitution
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= a[k * n + i] * x[k];
        x[i] = s / a[i * n + i];
    }
    return true;
}

} // namespace

FitResult fit(const FitProblem& problem) {
    if (problem.data.empty()) throw InvalidArgument("fit data must be non-empty");

    // canonical order makes the result independent of input ordering
    std::vector<BranchPoint> sorted = problem.data.points;
    std::sort(sorted.begin(), sorted.end(), [](const BranchPoint& a, const BranchPoint& b) {
        if (a.field_t != b.field_t) return a.field_t < b.field_t;
        if (a.label != b.label) return static_cast<int>(a.label) < static_cast<int>(b.label);
        return a.freq_ghz < b.freq_ghz;
    });

    bool has_dark = false;
    for (const auto& p : sorted) has_dark = has_dark || p.label == BranchLabel::Dark;

    // free parameter set for this problem
    std::vector<bool> in_model(kNumParams, false);
    in_model[0] = in_model[1] = true;
    if (problem.model == DispersionModel::ShiftedDicke) in_model[2] = true;
    if (problem.model == DispersionModel::Hopfield) in_model[4] = true;
    in_model[3] = true;  // f_dm is part of every data model
    for (const auto& name : problem.fixed) {
        if (!in_model[name_index(name)]) {
            throw InvalidArgument("fixed parameter '" + name +
                                  "' is not part of the chosen model");
        }
    }
    std::vector<int> free_idx;
    for (int i = 0; i < kNumParams; ++i) {
        const bool wanted = in_model[i] && (i != 3 || has_dark);
        if (wanted && !problem.fixed.count(kNames[i])) free_idx.push_back(i);
    }
    const int np = static_cast<int>(free_idx.size());
    if (np == 0) throw InvalidArgument("no free parameters left to fit");
    if (static_cast<int>(sorted.size()) < 3 * np) {
        throw InvalidArgument("need at least 3 data points per free parameter");
    }

    FitParameters start = problem.guess ? *problem.guess : initial_guess(problem.data);

    // magnon frequency per point, cached per distinct field
    std::map<double, double> wm_cache;
    std::vector<Point> pts;
    pts.reserve(sorted.size());
    for (const auto& p : sorted) {
        double wm = 0.0;
        if (p.label != BranchLabel::Dark) {
            auto it = wm_cache.find(p.field_t);
            if (it == wm_cache.end()) {
                it = wm_cache.emplace(p.field_t, fmr_frequency_ghz(p.field_t, problem.fmr)).first;
            }
            wm = it->second;
        }
        pts.push_back({p.field_t, p.freq_ghz, p.label, wm});
    }

    auto predict = [&](const double* th, const Point& p) {
        if (p.label == BranchLabel::Dark) return th[3];
        DispersionModelParams mp;
        mp.cavity_freq_ghz = th[0];
        mp.coupling_ghz = th[1];
        mp.magnon_shift_ghz = th[2];
        mp.hopfield_prefactor = th[4];
        mp.model = problem.model;
        mp.hopfield_literal = problem.hopfield_literal;
        const BranchPair bp = branches_clamped(mp, p.wm_ghz);
        return p.label == BranchLabel::Lower ? bp.lower_ghz : bp.upper_ghz;
    };

    auto project = [&](double* th) {
        auto clamp_named = [&](int idx, double lo, double hi) {
            auto it = problem.bounds.find(kNames[idx]);
            if (it != problem.bounds.end()) {
                lo = it->second.first;
                hi = it->second.second;
            }
            th[idx] = std::clamp(th[idx], lo, hi);
        };
        const double inf = std::numeric_limits<double>::infinity();
        clamp_named(0, 1e-9, inf);                      // f_bm > 0
        clamp_named(1, 1e-12 * std::max(1.0, th[0]), th[0]);  // g in (0, f_bm]
        clamp_named(2, 0.0, 2.0 * th[0]);               // delta_m in [0, 2 f_bm]
        clamp_named(3, 0.0, inf);
        clamp_named(4, 0.0, inf);
    };

    double theta[kNumParams] = {start.f_bm_ghz, start.g_ghz, start.delta_m_ghz,
                                start.f_dm_ghz, start.d};
    project(theta);

    const std::size_t m = pts.size();
    auto residuals = [&](const double* th, std::vector<double>& r) {
        r.resize(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = predict(th, pts[i]) - pts[i].y_ghz;
    };
    auto sumsq = [](const std::vector<double>& r) {
        double s = 0.0;
        for (double v : r) s += v * v;
        return s;
    };

    std::vector<double> r, r_try, jac(m * np);
    residuals(theta, r);
    double ssq = sumsq(r);

    FitResult result;
    result.objective_trace.push_back(ssq);
    for (int k : free_idx) result.free_names.push_back(kNames[k]);

    double lambda = 1e-3;
    bool converged = false;
    ConvergenceReason reason = ConvergenceReason::None;
    double grad_norm = 0.0;
    int iter = 0;

    std::vector<double> jtj(np * np), jtr(np), delta;
    std::vector<double> rp(m), rm_(m);

    for (iter = 0; iter < problem.max_iterations && !converged; ++iter) {
        // central-difference Jacobian over the free parameters
        for (int c = 0; c < np; ++c) {
            const int k = free_idx[c];
            const double h = std::max(1e-6 * std::abs(theta[k]), 1e-9);
            double tp[kNumParams], tm[kNumParams];
            std::copy(theta, theta + kNumParams, tp);
            std::copy(theta, theta + kNumParams, tm);
            tp[k] += h;
            tm[k] -= h;
            residuals(tp, rp);
            residuals(tm, rm_);
            const double inv = 1.0 / (2.0 * h);
            for (std::size_t i = 0; i < m; ++i) jac[i * np + c] = (rp[i] - rm_[i]) * inv;
        }

        std::fill(jtj.begin(), jtj.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (int c = 0; c < np; ++c) {
                const double jic = jac[i * np + c];
                jtr[c] += jic * r[i];
                for (int c2 = 0; c2 <= c; ++c2) jtj[c * np + c2] += jic * jac[i * np + c2];
            }
        }
        for (int c = 0; c < np; ++c)
            for (int c2 = c + 1; c2 < np; ++c2) jtj[c * np + c2] = jtj[c2 * np + c];

        double max_diag = 0.0;
        for (int c = 0; c < np; ++c) max_diag = std::max(max_diag, jtj[c * np + c]);
        for (int c = 0; c < np; ++c) {
            if (jtj[c * np + c] <= 1e-16 * max_diag || max_diag == 0.0) {
                throw RankDeficientError(
                    std::string("normal equations singular: parameter '") + kNames[free_idx[c]] +
                        "' is unidentifiable from the data",
                    kNames[free_idx[c]]);
            }
        }

        grad_norm = 0.0;
        for (int c = 0; c < np; ++c) grad_norm = std::max(grad_norm, std::abs(jtr[c]));
        if (grad_norm < kGradTol) {
            converged = true;
            reason = ConvergenceReason::GradientNorm;
            break;
        }

        bool accepted = false;
        while (!accepted && lambda < 1e14) {
            std::vector<double> damped = jtj;
            for (int c = 0; c < np; ++c) damped[c * np + c] += lambda * jtj[c * np + c];
            std::vector<double> rhs(np);
            for (int c = 0; c < np; ++c) rhs[c] = -jtr[c];
            if (!cholesky_solve(damped, rhs, np, delta)) {
                lambda *= 10.0;
                continue;
            }
            double trial[kNumParams];
            std::copy(theta, theta + kNumParams, trial);
            for (int c = 0; c < np; ++c) trial[free_idx[c]] += delta[c];
            project(trial);

            double step_sq = 0.0, scale_sq = 0.0;
            for (int c = 0; c < np; ++c) {
                const int k = free_idx[c];
                const double moved = trial[k] - theta[k];
                step_sq += moved * moved;
                scale_sq += theta[k] * theta[k];
            }
            const bool tiny_step =
                std::sqrt(step_sq) < kStepTol * (std::sqrt(scale_sq) + kStepTol);

            residuals(trial, r_try);
            const double ssq_try = sumsq(r_try);
            if (ssq_try < ssq) {
                std::copy(trial, trial + kNumParams, theta);
                r.swap(r_try);
                ssq = ssq_try;
                result.objective_trace.push_back(ssq);
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (tiny_step) {
                    converged = true;
                    reason = ConvergenceReason::StepSize;
                }
            } else if (tiny_step) {
                // the iterate cannot move by more than the step tolerance:
                // noise-floor optimum reached
                converged = true;
                reason = ConvergenceReason::StepSize;
                accepted = true;  // leave the damping loop without changing theta
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) break;  // damping exhausted
    }

    result.params = {theta[0], theta[1], theta[2], theta[3], theta[4]};
    result.stderrs = {0.0, 0.0, 0.0, 0.0, 0.0};
    result.iterations = iter;
    result.converged = converged;
    result.reason = reason;
    result.gradient_norm = grad_norm;
    result.residual_rms_ghz = std::sqrt(ssq / static_cast<double>(m));

    // Gauss-Newton standard errors from the undamped normal matrix at the solution.
    {
        for (int c = 0; c < np; ++c) {
            const int k = free_idx[c];
            const double h = std::max(1e-6 * std::abs(theta[k]), 1e-9);
            double tp[kNumParams], tm[kNumParams];
            std::copy(theta, theta + kNumParams, tp);
            std::copy(theta, theta + kNumParams, tm);
            tp[k] += h;
            tm[k] -= h;
            residuals(tp, rp);
            residuals(tm, rm_);
            const double inv = 1.0 / (2.0 * h);
            for (std::size_t i = 0; i < m; ++i) jac[i * np + c] = (rp[i] - rm_[i]) * inv;
        }
        std::fill(jtj.begin(), jtj.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (int c = 0; c < np; ++c) {
                for (int c2 = 0; c2 <= c; ++c2) {
                    jtj[c * np + c2] += jac[i * np + c] * jac[i * np + c2];
                }
            }
        }
        for (int c = 0; c < np; ++c)
            for (int c2 = c + 1; c2 < np; ++c2) jtj[c * np + c2] = jtj[c2 * np + c];

        const double dof = static_cast<double>(m) - np;
        const double s2 = dof > 0.0 ? ssq / dof : 0.0;
        for (int c = 0; c < np; ++c) {
            std::vector<double> e(np, 0.0), col;
            e[c] = 1.0;
            if (cholesky_solve(jtj, e, np, col) && col[c] > 0.0) {
                result.stderrs.set(kNames[free_idx[c]], std::sqrt(s2 * col[c]));
            }
        }
    }
    return result;
}

} // namespace cmpkit
