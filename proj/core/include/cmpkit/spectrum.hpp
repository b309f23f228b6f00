#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cmpkit/fmr.hpp"
#include "cmpkit/polariton.hpp"

namespace cmpkit {

/// |S21| magnitude in dB on an (applied field x probe frequency) grid.
/// Row-major, field-major: value(i_field, i_freq).
struct Spectrum2D {
    std::vector<double> field_t;    // strictly increasing
    std::vector<double> freq_ghz;   // strictly increasing
    std::vector<double> magnitude_db;
    // Field columns where the FMR was below saturation: only the bare cavity
    // and dark lines were drawn there.
    std::vector<std::size_t> masked_fields;

    double& at(std::size_t fi, std::size_t qi) { return magnitude_db[fi * freq_ghz.size() + qi]; }
    double at(std::size_t fi, std::size_t qi) const { return magnitude_db[fi * freq_ghz.size() + qi]; }

    void validate() const;

    /// CSV layout: header row "field_mT, f1, f2, ..." with frequencies in GHz;
    /// each body row starts with the field in mT followed by dB magnitudes.
    static Spectrum2D load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
};

enum class BranchLabel { Lower, Upper, Dark };

std::string to_string(BranchLabel label);
BranchLabel branch_label_from_string(const std::string& name);

struct BranchPoint {
    double field_t = 0.0;
    double freq_ghz = 0.0;
    BranchLabel label = BranchLabel::Lower;
};

struct BranchData {
    std::vector<BranchPoint> points;

    bool empty() const { return points.empty(); }

    /// CSV columns: field_mT, freq_GHz, label.
    static BranchData load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
};

struct Linewidths {
    double cavity_ghz = 0.08;
    double magnon_ghz = 0.08;
    double dark_ghz = 0.05;
};

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;

    std::vector<double> values() const;
    void validate() const;
};

struct SynthesisOptions {
    Linewidths linewidths{};
    double dark_weight = 0.6;        // constant dark-line amplitude; 0 disables the line
    double noise_floor_db = -60.0;
    double snr_db = 0.0;             // <= 0 means noiseless
    std::uint64_t seed = 0;
};

/// Lorentzian-sum |S21| synthesis. Peaks sit exactly at the model branch
/// frequencies; lower/upper amplitudes are the photonic fractions from
/// tan(2 theta) = 2g / (w - wm_eff) and the per-branch width mixes the cavity
/// and magnon widths by the same fractions. Unsaturated fields are masked
/// (cavity + dark lines only) and listed in Spectrum2D::masked_fields.
Spectrum2D synthesize(const DispersionModelParams& model, const FmrParams& fmr,
                      double dark_freq_ghz, const GridSpec& fields_t,
                      const GridSpec& freqs_ghz, const SynthesisOptions& options = {});

struct ExtractionOptions {
    // Maximum frequency jump between adjacent field columns for a tracked
    // branch; <= 0 selects max(10 grid steps, 2.5% of the frequency span).
    double jump_limit_ghz = 0.0;
};

struct ExtractionResult {
    BranchData branches;
    std::size_t skipped_columns = 0;  // columns with no peak above threshold
};

/// Per-column local maxima above threshold_db, refined by a three-point
/// parabola in dB, then associated to {dark, lower, upper} by frequency
/// ordering at the best-populated column and nearest-neighbor continuity
/// across columns. Requires at least 3 frequency samples.
ExtractionResult extract_branches(const Spectrum2D& spectrum, double threshold_db,
                                  const ExtractionOptions& options = {});

} // namespace cmpkit
