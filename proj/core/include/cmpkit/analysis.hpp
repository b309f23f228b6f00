#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmpkit/coupling.hpp"
#include "cmpkit/fit.hpp"

namespace cmpkit {

/// One cavity configuration row: fitted frequencies plus the derived columns.
struct CavityRecord {
    std::string label;
    std::optional<double> d_gap_um;  // post-lid distance where known
    double f_dm_ghz = 0.0;
    double f_bm_ghz = 0.0;
    double g_ghz = 0.0;
    double g_over_omega = 0.0;       // printed column
    double g_sq_over_omega_ghz = 0.0;
    double delta_m_ghz = 0.0;
    double f_gap_ghz = 0.0;

    /// f_dm < f_bm (the dark mode is the lowest mode) and positive frequencies.
    void validate() const;
};

/// Bundled reference table: the 14 cavity rows used by `reproduce`.
const std::vector<CavityRecord>& reference_cavity_table();

/// The bundled table as CSV text (same layout as load_cavity_table_csv).
std::string reference_cavity_table_csv();

/// CSV columns: label, d_um, f_DM, f_BM, g_2pi, g_over_w, g2_over_2piw, delta_m, f_gap.
std::vector<CavityRecord> load_cavity_table_csv(const std::string& path);
void save_cavity_table_csv(const std::vector<CavityRecord>& rows, const std::string& path);

struct QuadraticFit {
    double a = 0.0;  // leading coefficient
    double b = 0.0;
    double c = 0.0;
    double r_squared = 0.0;
};

/// Least-squares parabola y = a x^2 + b x + c with R^2.
/// Throws InvalidArgument for fewer than 3 distinct x values (rank loss).
QuadraticFit quadratic_regression(std::span<const std::pair<double, double>> points);

/// Zero-field gap sweep: (g/w, gap/w) at fixed delta_m/w ratio.
std::vector<std::pair<double, double>> gap_curve(double cavity_freq_ghz,
                                                 double delta_m_over_omega,
                                                 std::span<const double> g_over_omega);

/// Per-row recomputation of the derived columns and the zero-field gap.
struct RowConsistency {
    double g_over_omega_recomputed = 0.0;
    double g_over_omega_delta = 0.0;
    double g_sq_recomputed_ghz = 0.0;
    double g_sq_delta_ghz = 0.0;
    double gap_recomputed_ghz = 0.0;
    double gap_delta_ghz = 0.0;
    CouplingRegime regime = CouplingRegime::SC;
};

struct AnalysisReport {
    std::vector<CavityRecord> rows;
    std::vector<RowConsistency> row_checks;
    QuadraticFit dm_ratio_vs_g_ratio;    // delta_m/w vs g/w
    QuadraticFit dm_vs_g_sq_over_omega;  // delta_m vs g^2/2pi w
    double max_consistency_delta = 0.0;
    double max_gap_delta_ghz = 0.0;
    int gap_within_003 = 0;
    std::vector<FitResult> fits;
};

/// Run the consistency, gap and regression analyses over a set of rows.
AnalysisReport analyze_records(const std::vector<CavityRecord>& records,
                               const std::vector<FitResult>& fits = {});

/// Serialize the report as JSON text. Byte-deterministic for identical inputs.
std::string report_json(const AnalysisReport& report);

/// Write the JSON report to json_path and, when plot_dir is non-empty, the
/// scatter/curve SVG plots into it. Throws IoError on write failure.
void write_report(const AnalysisReport& report, const std::string& json_path,
                  const std::string& plot_dir);

} // namespace cmpkit
