#include "cmpkit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "cmpkit/errors.hpp"
#include "csv_util.hpp"

namespace cmpkit {

void Spectrum2D::validate() const {
    if (field_t.size() < 1 || freq_ghz.size() < 1) {
        throw InvalidArgument("spectrum axes must be non-empty");
    }
    for (std::size_t i = 1; i < field_t.size(); ++i) {
        if (!(field_t[i] > field_t[i - 1])) {
            throw InvalidArgument("field axis must be strictly increasing");
        }
    }
    for (std::size_t i = 1; i < freq_ghz.size(); ++i) {
        if (!(freq_ghz[i] > freq_ghz[i - 1])) {
            throw InvalidArgument("frequency axis must be strictly increasing");
        }
    }
    if (magnitude_db.size() != field_t.size() * freq_ghz.size()) {
        throw InvalidArgument("magnitude array does not match axes");
    }
    for (double v : magnitude_db) {
        if (!std::isfinite(v)) throw InvalidArgument("magnitude must be finite");
    }
}

Spectrum2D Spectrum2D::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spectrum: " + path, path);
    Spectrum2D s;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty spectrum file: " + path, path);
    auto header = csv::split(line);
    if (header.size() < 2) throw IoError("spectrum header needs frequencies: " + path, path);
    for (std::size_t i = 1; i < header.size(); ++i) {
        s.freq_ghz.push_back(csv::to_double(header[i]));
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = csv::split(line);
        if (cells.size() != header.size()) {
            throw IoError("ragged spectrum row in " + path, path);
        }
        s.field_t.push_back(csv::to_double(cells[0]) * 1e-3);  // mT -> T
        for (std::size_t i = 1; i < cells.size(); ++i) {
            s.magnitude_db.push_back(csv::to_double(cells[i]));
        }
    }
    s.validate();
    return s;
}

void Spectrum2D::save_csv(const std::string& path) const {
    validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write spectrum: " + path, path);
    out << "field_mT";
    for (double f : freq_ghz) out << ',' << csv::format(f);
    out << '\n';
    for (std::size_t fi = 0; fi < field_t.size(); ++fi) {
        out << csv::format(field_t[fi] * 1e3);
        for (std::size_t qi = 0; qi < freq_ghz.size(); ++qi) out << ',' << csv::format(at(fi, qi));
        out << '\n';
    }
}

std::string to_string(BranchLabel label) {
    switch (label) {
        case BranchLabel::Lower: return "lower";
        case BranchLabel::Upper: return "upper";
        case BranchLabel::Dark: return "dark";
    }
    return "?";
}

BranchLabel branch_label_from_string(const std::string& name) {
    if (name == "lower") return BranchLabel::Lower;
    if (name == "upper") return BranchLabel::Upper;
    if (name == "dark") return BranchLabel::Dark;
    throw InvalidArgument("unknown branch label: " + name);
}

BranchData BranchData::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open branch data: " + path, path);
    BranchData data;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find("field") != std::string::npos) continue;  // header
        }
        auto cells = csv::split(line);
        if (cells.size() != 3) throw IoError("branch row needs 3 columns in " + path, path);
        data.points.push_back({csv::to_double(cells[0]) * 1e-3, csv::to_double(cells[1]),
                               branch_label_from_string(cells[2])});
    }
    return data;
}

void BranchData::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write branch data: " + path, path);
    out << "field_mT,freq_GHz,label\n";
    for (const auto& p : points) {
        out << csv::format(p.field_t * 1e3) << ',' << csv::format(p.freq_ghz) << ','
            << to_string(p.label) << '\n';
    }
}

std::vector<double> GridSpec::values() const {
    validate();
    std::vector<double> v(steps);
    if (steps == 1) {
        v[0] = start;
        return v;
    }
    const double h = (stop - start) / (steps - 1);
    for (int i = 0; i < steps; ++i) v[i] = start + h * i;
    return v;
}

void GridSpec::validate() const {
    if (steps < 1) throw InvalidArgument("grid needs at least one step");
    if (steps > 1 && !(stop > start)) {
        throw InvalidArgument("grid stop must exceed start");
    }
}

namespace {

// Unit-peak Lorentzian with full width at half maximum `width`.
double lorentzian(double f, double center, double width) {
    const double u = 2.0 * (f - center) / width;
    return 1.0 / (1.0 + u * u);
}

struct Line {
    double freq;
    double width;
    double weight;
};

} // namespace

Spectrum2D synthesize(const DispersionModelParams& model, const FmrParams& fmr,
                      double dark_freq_ghz, const GridSpec& fields_t, const GridSpec& freqs_ghz,
                      const SynthesisOptions& options) {
    model.validate();
    fmr.validate();
    if (!(options.linewidths.cavity_ghz > 0.0) || !(options.linewidths.magnon_ghz > 0.0) ||
        !(options.linewidths.dark_ghz > 0.0)) {
        throw InvalidArgument("linewidths must be positive");
    }

    Spectrum2D s;
    s.field_t = fields_t.values();
    s.freq_ghz = freqs_ghz.values();
    s.magnitude_db.assign(s.field_t.size() * s.freq_ghz.size(), 0.0);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double noise_amp = options.snr_db > 0.0 ? std::pow(10.0, -options.snr_db / 20.0) : 0.0;
    const double floor_lin = std::pow(10.0, options.noise_floor_db / 20.0);

    for (std::size_t fi = 0; fi < s.field_t.size(); ++fi) {
        std::vector<Line> lines;
        if (options.dark_weight > 0.0) {
            lines.push_back({dark_freq_ghz, options.linewidths.dark_ghz, options.dark_weight});
        }
        bool masked = false;
        double wm = 0.0;
        try {
            wm = fmr_frequency_ghz(s.field_t[fi], fmr);
        } catch (const UnsaturatedError&) {
            masked = true;
        }
        if (masked) {
            // no magnon line; the bare cavity remains
            lines.push_back({model.cavity_freq_ghz, options.linewidths.cavity_ghz, 1.0});
            s.masked_fields.push_back(fi);
        } else {
            const double wm_eff = model.model == DispersionModel::ShiftedDicke
                                      ? wm + model.magnon_shift_ghz
                                      : wm;
            const BranchPair bp = branches_clamped(model, wm);
            // theta in [0, pi/2]; photon fraction cos^2 for the upper branch
            // (cavity-like when the magnon sits below the cavity), sin^2 for
            // the lower.
            const double theta =
                0.5 * std::atan2(2.0 * model.coupling_ghz, model.cavity_freq_ghz - wm_eff);
            const double c = std::cos(theta);
            const double sn = std::sin(theta);
            const double w_upper = c * c;
            const double w_lower = sn * sn;
            const auto mix = [&](double photon) {
                return photon * options.linewidths.cavity_ghz +
                       (1.0 - photon) * options.linewidths.magnon_ghz;
            };
            if (w_lower > 0.0) lines.push_back({bp.lower_ghz, mix(w_lower), w_lower});
            if (w_upper > 0.0) lines.push_back({bp.upper_ghz, mix(w_upper), w_upper});
        }

        for (std::size_t qi = 0; qi < s.freq_ghz.size(); ++qi) {
            double lin = 0.0;
            for (const Line& l : lines) lin += l.weight * lorentzian(s.freq_ghz[qi], l.freq, l.width);
            if (noise_amp > 0.0) lin += noise_amp * gauss(rng);
            s.at(fi, qi) = 20.0 * std::log10(std::max(lin, floor_lin));
        }
    }
    return s;
}

namespace {

struct Peak {
    double freq;
    double level_db;
};

std::vector<Peak> column_peaks(const Spectrum2D& s, std::size_t fi, double threshold_db) {
    const std::size_t nq = s.freq_ghz.size();
    std::vector<Peak> peaks;
    for (std::size_t j = 1; j + 1 < nq; ++j) {
        const double m0 = s.at(fi, j - 1);
        const double m1 = s.at(fi, j);
        const double m2 = s.at(fi, j + 1);
        if (m1 < threshold_db || !(m1 > m0) || !(m1 >= m2)) continue;
        // parabolic vertex through the three dB samples
        const double den = m0 - 2.0 * m1 + m2;
        double delta = den < 0.0 ? 0.5 * (m0 - m2) / den : 0.0;
        delta = std::clamp(delta, -0.5, 0.5);
        const double step = s.freq_ghz[j + 1] - s.freq_ghz[j];
        peaks.push_back({s.freq_ghz[j] + delta * step, m1});
    }
    return peaks;
}

} // namespace

ExtractionResult extract_branches(const Spectrum2D& spectrum, double threshold_db,
                                  const ExtractionOptions& options) {
    spectrum.validate();
    if (spectrum.freq_ghz.size() < 3) {
        throw InvalidArgument("extraction needs at least 3 frequency samples per column");
    }

    const std::size_t nf = spectrum.field_t.size();
    std::vector<std::vector<Peak>> all(nf);
    std::size_t skipped = 0;
    std::size_t best_col = nf;  // first column with the global max peak count
    std::size_t best_count = 0;
    for (std::size_t fi = 0; fi < nf; ++fi) {
        all[fi] = column_peaks(spectrum, fi, threshold_db);
        if (all[fi].empty()) ++skipped;
        if (all[fi].size() > best_count) {
            best_count = all[fi].size();
            best_col = fi;
        }
    }

    ExtractionResult result;
    result.skipped_columns = skipped;
    if (best_count == 0) return result;  // flat spectrum: nothing tracked

    const double span = spectrum.freq_ghz.back() - spectrum.freq_ghz.front();
    const double step = span / static_cast<double>(spectrum.freq_ghz.size() - 1);
    const double jump =
        options.jump_limit_ghz > 0.0 ? options.jump_limit_ghz : std::max(10.0 * step, 0.025 * span);

    // Labels engaged at the seed column, lowest frequency first.
    const std::size_t n_labels = std::min<std::size_t>(best_count, 3);
    std::vector<BranchLabel> labels;
    if (n_labels == 3) labels = {BranchLabel::Dark, BranchLabel::Lower, BranchLabel::Upper};
    else if (n_labels == 2) labels = {BranchLabel::Lower, BranchLabel::Upper};
    else labels = {BranchLabel::Upper};

    // Seed track frequencies: the n_labels strongest peaks, sorted ascending.
    std::vector<Peak> seed = all[best_col];
    std::sort(seed.begin(), seed.end(),
              [](const Peak& a, const Peak& b) { return a.level_db > b.level_db; });
    seed.resize(n_labels);
    std::sort(seed.begin(), seed.end(),
              [](const Peak& a, const Peak& b) { return a.freq < b.freq; });
    std::vector<double> track(n_labels);
    for (std::size_t t = 0; t < n_labels; ++t) track[t] = seed[t].freq;

    // Sequential pass outward from the seed column in both directions.
    std::vector<std::size_t> order;
    for (std::size_t fi = best_col; fi < nf; ++fi) order.push_back(fi);
    for (std::size_t fi = best_col; fi-- > 0;) order.push_back(fi);

    std::vector<double> track_state = track;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t fi = order[oi];
        if (fi == best_col && oi != 0) track_state = track;  // restart for the backward pass
        const auto& peaks = all[fi];
        if (peaks.empty()) continue;

        // greedy one-to-one nearest matching within the jump limit
        struct Cand {
            double dist;
            std::size_t peak;
            std::size_t trk;
        };
        std::vector<Cand> cands;
        for (std::size_t p = 0; p < peaks.size(); ++p) {
            for (std::size_t t = 0; t < n_labels; ++t) {
                const double d = std::abs(peaks[p].freq - track_state[t]);
                if (d <= jump) cands.push_back({d, p, t});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.dist != b.dist) return a.dist < b.dist;
            if (a.trk != b.trk) return a.trk < b.trk;
            return a.peak < b.peak;
        });
        std::vector<bool> peak_used(peaks.size(), false), trk_used(n_labels, false);
        for (const Cand& c : cands) {
            if (peak_used[c.peak] || trk_used[c.trk]) continue;
            peak_used[c.peak] = true;
            trk_used[c.trk] = true;
            track_state[c.trk] = peaks[c.peak].freq;
            result.branches.points.push_back(
                {spectrum.field_t[fi], peaks[c.peak].freq, labels[c.trk]});
        }
    }

    std::sort(result.branches.points.begin(), result.branches.points.end(),
              [](const BranchPoint& a, const BranchPoint& b) {
                  if (a.field_t != b.field_t) return a.field_t < b.field_t;
                  return a.freq_ghz < b.freq_ghz;
              });
    return result;
}

} // namespace cmpkit
