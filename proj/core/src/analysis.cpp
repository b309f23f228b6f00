#include "cmpkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cmpkit/errors.hpp"
#include "svg_util.hpp"

namespace cmpkit {

QuadraticFit quadratic_regression(std::span<const std::pair<double, double>> points) {
    std::set<double> distinct;
    for (const auto& [x, y] : points) distinct.insert(x);
    if (distinct.size() < 3) {
        throw InvalidArgument("quadratic regression needs at least 3 distinct x values");
    }

    // Centered design for conditioning: u = x - mean(x), y = A u^2 + B u + C.
    const std::size_t n = points.size();
    double mean_x = 0.0;
    for (const auto& [x, y] : points) mean_x += x;
    mean_x /= static_cast<double>(n);

    double s[5] = {};  // sums of u^k, k = 0..4
    double t0 = 0.0, t1 = 0.0, t2 = 0.0;
    for (const auto& [x, y] : points) {
        const double u = x - mean_x;
        const double u2 = u * u;
        s[0] += 1.0;
        s[1] += u;
        s[2] += u2;
        s[3] += u2 * u;
        s[4] += u2 * u2;
        t0 += y;
        t1 += y * u;
        t2 += y * u2;
    }
    // normal equations for (C, B, A)
    double m[3][4] = {
        {s[0], s[1], s[2], t0},
        {s[1], s[2], s[3], t1},
        {s[2], s[3], s[4], t2},
    };
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        if (std::abs(m[piv][col]) < 1e-12 * std::max(1.0, std::abs(s[0]))) {
            throw InvalidArgument("quadratic regression design is rank-deficient");
        }
        std::swap(m[col], m[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    const double c_u = m[0][3] / m[0][0];
    const double b_u = m[1][3] / m[1][1];
    const double a_u = m[2][3] / m[2][2];

    QuadraticFit fit;
    fit.a = a_u;
    fit.b = b_u - 2.0 * a_u * mean_x;
    fit.c = c_u - b_u * mean_x + a_u * mean_x * mean_x;

    const double mean_y = t0 / static_cast<double>(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [x, y] : points) {
        const double f = fit.a * x * x + fit.b * x + fit.c;
        ss_res += (y - f) * (y - f);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

std::vector<std::pair<double, double>> gap_curve(double cavity_freq_ghz,
                                                 double delta_m_over_omega,
                                                 std::span<const double> g_over_omega) {
    if (!(cavity_freq_ghz > 0.0)) throw InvalidArgument("cavity frequency must be positive");
    if (delta_m_over_omega < 0.0) throw InvalidArgument("delta_m/omega must be non-negative");
    std::vector<std::pair<double, double>> out;
    out.reserve(g_over_omega.size());
    for (double r : g_over_omega) {
        if (r < 0.0) throw InvalidArgument("g/omega must be non-negative");
        DispersionModelParams p;
        p.model = DispersionModel::ShiftedDicke;
        p.cavity_freq_ghz = cavity_freq_ghz;
        p.coupling_ghz = r * cavity_freq_ghz;
        p.magnon_shift_ghz = delta_m_over_omega * cavity_freq_ghz;
        out.emplace_back(r, zero_field_gap_ghz(p) / cavity_freq_ghz);
    }
    return out;
}

AnalysisReport analyze_records(const std::vector<CavityRecord>& records,
                               const std::vector<FitResult>& fits) {
    if (records.empty()) throw InvalidArgument("no records to analyze");
    AnalysisReport rep;
    rep.rows = records;
    rep.fits = fits;

    std::vector<std::pair<double, double>> dm_ratio_pts, dm_g2_pts;
    for (const auto& r : records) {
        r.validate();
        RowConsistency rc;
        const TableConsistency tc = table_consistency(r.g_ghz, r.f_bm_ghz);
        rc.g_over_omega_recomputed = tc.g_over_omega;
        rc.g_over_omega_delta = tc.g_over_omega - r.g_over_omega;
        rc.g_sq_recomputed_ghz = tc.g_sq_over_omega_ghz;
        rc.g_sq_delta_ghz = tc.g_sq_over_omega_ghz - r.g_sq_over_omega_ghz;

        DispersionModelParams p;
        p.model = DispersionModel::ShiftedDicke;
        p.cavity_freq_ghz = r.f_bm_ghz;
        p.coupling_ghz = r.g_ghz;
        p.magnon_shift_ghz = r.delta_m_ghz;
        rc.gap_recomputed_ghz = zero_field_gap_ghz(p);
        rc.gap_delta_ghz = rc.gap_recomputed_ghz - r.f_gap_ghz;
        rc.regime = classify_regime(tc.g_over_omega);
        rep.row_checks.push_back(rc);

        rep.max_consistency_delta =
            std::max({rep.max_consistency_delta, std::abs(rc.g_over_omega_delta),
                      std::abs(rc.g_sq_delta_ghz)});
        rep.max_gap_delta_ghz = std::max(rep.max_gap_delta_ghz, std::abs(rc.gap_delta_ghz));
        if (std::abs(rc.gap_delta_ghz) <= 0.03) ++rep.gap_within_003;

        dm_ratio_pts.emplace_back(tc.g_over_omega, r.delta_m_ghz / r.f_bm_ghz);
        dm_g2_pts.emplace_back(tc.g_sq_over_omega_ghz, r.delta_m_ghz);
    }
    rep.dm_ratio_vs_g_ratio = quadratic_regression(dm_ratio_pts);
    rep.dm_vs_g_sq_over_omega = quadratic_regression(dm_g2_pts);
    return rep;
}

namespace {

nlohmann::ordered_json fit_json(const FitResult& f) {
    nlohmann::ordered_json j;
    j["params"] = {{"f_bm_ghz", f.params.f_bm_ghz},
                   {"g_ghz", f.params.g_ghz},
                   {"delta_m_ghz", f.params.delta_m_ghz},
                   {"f_dm_ghz", f.params.f_dm_ghz},
                   {"d", f.params.d}};
    j["stderr"] = {{"f_bm_ghz", f.stderrs.f_bm_ghz},
                   {"g_ghz", f.stderrs.g_ghz},
                   {"delta_m_ghz", f.stderrs.delta_m_ghz},
                   {"f_dm_ghz", f.stderrs.f_dm_ghz},
                   {"d", f.stderrs.d}};
    j["residual_rms_ghz"] = f.residual_rms_ghz;
    j["iterations"] = f.iterations;
    j["converged"] = f.converged;
    j["reason"] = to_string(f.reason);
    j["free_parameters"] = f.free_names;
    return j;
}

} // namespace

std::string report_json(const AnalysisReport& rep) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        const auto& c = rep.row_checks[i];
        nlohmann::ordered_json row;
        row["label"] = r.label;
        if (r.d_gap_um) row["d_um"] = *r.d_gap_um;
        row["f_dm_ghz"] = r.f_dm_ghz;
        row["f_bm_ghz"] = r.f_bm_ghz;
        row["g_ghz"] = r.g_ghz;
        row["delta_m_ghz"] = r.delta_m_ghz;
        row["g_over_omega"] = {{"printed", r.g_over_omega},
                               {"recomputed", c.g_over_omega_recomputed},
                               {"delta", c.g_over_omega_delta}};
        row["g_sq_over_omega_ghz"] = {{"printed", r.g_sq_over_omega_ghz},
                                      {"recomputed", c.g_sq_recomputed_ghz},
                                      {"delta", c.g_sq_delta_ghz}};
        row["f_gap_ghz"] = {{"printed", r.f_gap_ghz},
                            {"recomputed", c.gap_recomputed_ghz},
                            {"delta", c.gap_delta_ghz}};
        row["regime"] = to_string(c.regime);
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["consistency"] = {{"max_abs_delta", rep.max_consistency_delta},
                        {"tolerance", 0.01},
                        {"pass", rep.max_consistency_delta <= 0.01}};
    j["gap"] = {{"max_abs_delta_ghz", rep.max_gap_delta_ghz},
                {"tolerance_ghz", 0.08},
                {"rows_within_0.03", rep.gap_within_003},
                {"pass", rep.max_gap_delta_ghz <= 0.08 && rep.gap_within_003 >= 10}};
    auto reg = [](const QuadraticFit& q) {
        return nlohmann::ordered_json{
            {"a", q.a}, {"b", q.b}, {"c", q.c}, {"r_squared", q.r_squared}};
    };
    j["regression"] = {{"dm_over_w_vs_g_over_w", reg(rep.dm_ratio_vs_g_ratio)},
                       {"dm_vs_g_sq_over_2piw", reg(rep.dm_vs_g_sq_over_omega)}};
    if (!rep.fits.empty()) {
        nlohmann::ordered_json fits = nlohmann::ordered_json::array();
        for (const auto& f : rep.fits) fits.push_back(fit_json(f));
        j["fits"] = fits;
    }
    return j.dump(1) + "\n";
}

void write_report(const AnalysisReport& rep, const std::string& json_path,
                  const std::string& plot_dir) {
    {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw IoError("cannot write report: " + json_path, json_path);
        out << report_json(rep);
    }
    if (plot_dir.empty()) return;

    std::error_code ec;
    std::filesystem::create_directories(plot_dir, ec);
    if (ec) throw IoError("cannot create plot directory: " + plot_dir, plot_dir);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(plot_dir) / name).string();
    };

    std::vector<std::pair<double, double>> dm_ratio_pts, dm_g2_pts;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        dm_ratio_pts.emplace_back(rep.row_checks[i].g_over_omega_recomputed,
                                  rep.rows[i].delta_m_ghz / rep.rows[i].f_bm_ghz);
        dm_g2_pts.emplace_back(rep.row_checks[i].g_sq_recomputed_ghz, rep.rows[i].delta_m_ghz);
    }

    {
        svg::Plot plot("magnon shift ratio vs coupling ratio", "g/w", "dm/w");
        plot.add_scatter(dm_ratio_pts, "#1f77b4", "table rows");
        const auto& q = rep.dm_ratio_vs_g_ratio;
        std::vector<std::pair<double, double>> curve;
        double xlo = dm_ratio_pts[0].first, xhi = xlo;
        for (const auto& [x, y] : dm_ratio_pts) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
        }
        for (int i = 0; i <= 100; ++i) {
            const double x = xlo + (xhi - xlo) * i / 100.0;
            curve.emplace_back(x, q.a * x * x + q.b * x + q.c);
        }
        plot.add_curve(curve, "#d62728", "quadratic fit");
        plot.write(path("dm_ratio_vs_g_ratio.svg"));
    }
    {
        svg::Plot plot("magnon shift vs g^2/2pi w", "g^2/2pi w [GHz]", "dm/2pi [GHz]");
        plot.add_scatter(dm_g2_pts, "#2ca02c", "table rows");
        plot.write(path("dm_vs_g_sq_over_omega.svg"));
    }
    {
        svg::Plot plot("zero-field gap curves", "g/w", "gap/w");
        std::vector<double> sweep;
        for (int i = 0; i <= 120; ++i) sweep.push_back(0.005 * i);
        const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
        int ci = 0;
        for (double dm_ratio : {0.1, 0.2, 0.3, 0.5}) {
            char name[32];
            std::snprintf(name, sizeof name, "dm/w = %.1f", dm_ratio);
            plot.add_curve(gap_curve(1.0, dm_ratio, sweep), colors[ci % 4], name);
            ++ci;
        }
        plot.write(path("gap_curves.svg"));
    }
}

} // namespace cmpkit
