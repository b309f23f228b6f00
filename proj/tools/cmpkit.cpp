// cmpkit: cavity-magnon polariton toolkit CLI.
//
// Subcommands: demag, fmr, dispersion, eta, coupling, simulate, extract,
// fit, gap, analyze, reproduce. Flags take fields in mT and frequencies in
// GHz; emitted CSV columns follow the formats documented in the README.
// Exit codes: 0 ok, 1 computation error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmpkit/analysis.hpp"
#include "cmpkit/coupling.hpp"
#include "cmpkit/errors.hpp"
#include "cmpkit/fit.hpp"
#include "cmpkit/fmr.hpp"
#include "cmpkit/geometry.hpp"
#include "cmpkit/polariton.hpp"
#include "cmpkit/spectrum.hpp"

namespace {

using nlohmann::ordered_json;

struct RunConfig {
    double gamma_ghz_per_t = 28.0;
    double mu0_ms_t = 0.176;
    double spin_density = 4.22e27;
    double moment_bohr = 5.0;
    double lande_g = 2.0;
    std::string out_dir;
    bool verbose = false;

    void validate() const {
        for (double v : {gamma_ghz_per_t, mu0_ms_t, spin_density, moment_bohr, lande_g}) {
            if (!(v > 0.0)) throw cmpkit::InvalidArgument("constants overrides must be positive");
        }
        if (!out_dir.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(out_dir, ec);
            if (ec || !std::filesystem::is_directory(out_dir)) {
                throw cmpkit::IoError("output directory is not writable: " + out_dir, out_dir);
            }
        }
    }

    cmpkit::PhysicalConstants constants() const {
        cmpkit::PhysicalConstants c;
        c.spin_density_per_m3 = spin_density;
        c.moment_per_site_bohr = moment_bohr;
        c.lande_g = lande_g;
        return c;
    }
};

struct GeometryOpts {
    std::vector<double> dims_mm = {0.61, 6.09, 3.82};  // full edges: x, y, z
    std::string bias_axis = "z";
    int average_resolution = 0;  // 0: center evaluation

    cmpkit::Axis axis() const {
        if (bias_axis == "x") return cmpkit::Axis::X;
        if (bias_axis == "y") return cmpkit::Axis::Y;
        if (bias_axis == "z") return cmpkit::Axis::Z;
        throw cmpkit::InvalidArgument("bias axis must be one of x, y, z");
    }

    cmpkit::SampleGeometry geometry(const RunConfig& cfg) const {
        if (dims_mm.size() != 3) throw cmpkit::InvalidArgument("--dims needs three values");
        cmpkit::SampleGeometry g;
        for (int i = 0; i < 3; ++i) g.half_dims_m[i] = 0.5 * dims_mm[i] * 1e-3;
        g.saturation_t = cfg.mu0_ms_t;
        g.bias_axis = axis();
        g.validate();
        return g;
    }

    cmpkit::FmrParams fmr(const RunConfig& cfg) const {
        const auto geom = geometry(cfg);
        cmpkit::FmrParams p;
        p.gyro_ghz_per_t = cfg.gamma_ghz_per_t;
        p.geometry = geom;
        p.demag = average_resolution > 0 ? cmpkit::demag_volume_average(geom, average_resolution)
                                         : cmpkit::demag_center(geom);
        return p;
    }
};

void add_geometry_options(CLI::App* cmd, GeometryOpts& opts) {
    cmd->add_option("--dims", opts.dims_mm,
                    "sample edge lengths in mm (x,y,z); default 0.61,6.09,3.82")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--bias-axis", opts.bias_axis, "static field axis: x, y or z");
    cmd->add_option("--demag-average", opts.average_resolution,
                    "volume-average the demag tensor on an N^3 grid instead of center");
}

struct Sweep {
    double start = 0.0, stop = 0.0;
    int steps = 0;
};

Sweep parse_sweep(const std::string& text, const char* what) {
    Sweep s;
    if (std::sscanf(text.c_str(), "%lf,%lf,%d", &s.start, &s.stop, &s.steps) != 3 ||
        s.steps < 1) {
        throw cmpkit::InvalidArgument(std::string("expected start,stop,steps for ") + what);
    }
    return s;
}

std::vector<double> sweep_values(const Sweep& s) {
    cmpkit::GridSpec grid{s.start, s.stop, s.steps};
    return grid.values();
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw cmpkit::IoError("cannot write: " + path, path);
    return file;
}

ordered_json fit_result_json(const cmpkit::FitResult& res) {
    ordered_json j;
    j["params"] = {{"f_bm_ghz", res.params.f_bm_ghz},
                   {"g_ghz", res.params.g_ghz},
                   {"delta_m_ghz", res.params.delta_m_ghz},
                   {"f_dm_ghz", res.params.f_dm_ghz},
                   {"d", res.params.d}};
    j["stderr"] = {{"f_bm_ghz", res.stderrs.f_bm_ghz},
                   {"g_ghz", res.stderrs.g_ghz},
                   {"delta_m_ghz", res.stderrs.delta_m_ghz},
                   {"f_dm_ghz", res.stderrs.f_dm_ghz},
                   {"d", res.stderrs.d}};
    j["residual_rms_ghz"] = res.residual_rms_ghz;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["reason"] = to_string(res.reason);
    j["free_parameters"] = res.free_names;
    return j;
}

double parse_assignment(const std::string& text, std::string& name) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw cmpkit::InvalidArgument("expected name=value, got '" + text + "'");
    }
    name = text.substr(0, eq);
    try {
        return std::stod(text.substr(eq + 1));
    } catch (const std::exception&) {
        throw cmpkit::InvalidArgument("bad value in '" + text + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavity-magnon polariton toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value configuration file");

    // constants/overrides are checked before any subcommand callback runs
    RunConfig cfg;
    app.parse_complete_callback([&] { cfg.validate(); });

    app.add_option("--gamma-ghz-per-t", cfg.gamma_ghz_per_t, "gyromagnetic ratio / 2pi [GHz/T]")
        ->envname("CMPKIT_GAMMA_GHZ_PER_T");
    app.add_option("--mu0-ms-t", cfg.mu0_ms_t, "saturation mu0*Ms [T]")
        ->envname("CMPKIT_MU0_MS_T");
    app.add_option("--spin-density", cfg.spin_density, "spin density [1/m^3]")
        ->envname("CMPKIT_SPIN_DENSITY");
    app.add_option("--moment-bohr", cfg.moment_bohr, "moment per site [mu_B]")
        ->envname("CMPKIT_MOMENT_BOHR");
    app.add_option("--lande-g", cfg.lande_g, "Lande g-factor")->envname("CMPKIT_LANDE_G");
    app.add_option("--out-dir", cfg.out_dir, "default output directory")
        ->envname("CMPKIT_OUT_DIR");
    app.add_flag("-v,--verbose", cfg.verbose, "progress chatter on stderr");

    // ---- demag ----
    auto* cmd_demag = app.add_subcommand("demag", "demagnetizing tensor of the sample prism");
    GeometryOpts demag_geo;
    add_geometry_options(cmd_demag, demag_geo);
    std::vector<double> demag_point_mm = {0.0, 0.0, 0.0};
    cmd_demag->add_option("--point", demag_point_mm, "evaluation point in mm (default center)")
        ->delimiter(',')
        ->expected(3);
    cmd_demag->callback([&] {
        const auto geom = demag_geo.geometry(cfg);
        cmpkit::DemagTensor t;
        if (demag_geo.average_resolution > 0) {
            t = cmpkit::demag_volume_average(geom, demag_geo.average_resolution);
        } else {
            t = cmpkit::demag_at(geom, {demag_point_mm[0] * 1e-3, demag_point_mm[1] * 1e-3,
                                        demag_point_mm[2] * 1e-3});
        }
        ordered_json j;
        j["components"] = t.n;
        if (t.eval_point_m) {
            j["eval_point_mm"] = {(*t.eval_point_m)[0] * 1e3, (*t.eval_point_m)[1] * 1e3,
                                  (*t.eval_point_m)[2] * 1e3};
        } else {
            j["eval_point_mm"] = "volume-averaged";
        }
        j["trace"] = t.trace();
        std::cout << j.dump(1) << "\n";
    });

    // ---- fmr ----
    auto* cmd_fmr = app.add_subcommand("fmr", "ferromagnetic resonance vs applied field");
    GeometryOpts fmr_geo;
    add_geometry_options(cmd_fmr, fmr_geo);
    std::string fmr_sweep_text;
    std::string fmr_out;
    cmd_fmr->add_option("--field-sweep", fmr_sweep_text, "start,stop,steps in mT")->required();
    cmd_fmr->add_option("-o,--out", fmr_out, "output CSV (default stdout)");
    cmd_fmr->callback([&] {
        const auto params = fmr_geo.fmr(cfg);
        const auto sweep = parse_sweep(fmr_sweep_text, "--field-sweep");
        std::ofstream file;
        auto& out = open_out(file, fmr_out);
        out << "field_T,fmr_GHz\n";
        int skipped = 0;
        for (double mt : sweep_values(sweep)) {
            const double b = mt * 1e-3;
            try {
                out << b << ',' << cmpkit::fmr_frequency_ghz(b, params) << '\n';
            } catch (const cmpkit::UnsaturatedError&) {
                ++skipped;
            }
        }
        if (skipped > 0) {
            std::cerr << "skipped " << skipped << " unsaturated field points\n";
        }
    });

    // ---- dispersion ----
    auto* cmd_disp = app.add_subcommand("dispersion", "polariton branches over a field sweep");
    GeometryOpts disp_geo;
    add_geometry_options(cmd_disp, disp_geo);
    std::string disp_model = "dicke";
    double disp_fbm = 0.0, disp_g = 0.0, disp_dm = 0.0, disp_d = 1.0;
    std::string disp_sweep_text, disp_out;
    bool disp_literal = false;
    cmd_disp->add_option("--model", disp_model,
                         "rwa | dicke | superradiant | hopfield | shifted-dicke");
    cmd_disp->add_option("--f-bm", disp_fbm, "cavity frequency [GHz]")->required();
    cmd_disp->add_option("--g", disp_g, "coupling strength [GHz]")->required();
    cmd_disp->add_option("--delta-m", disp_dm, "magnon shift [GHz]");
    cmd_disp->add_option("--d", disp_d, "Hopfield diamagnetic prefactor");
    cmd_disp->add_flag("--hopfield-literal", disp_literal,
                       "use the as-printed modified-Hopfield dispersion");
    cmd_disp->add_option("--sweep,--fmr-sweep", disp_sweep_text, "start,stop,steps in mT")
        ->required();
    cmd_disp->add_option("-o,--out", disp_out, "output CSV (default stdout)");
    cmd_disp->callback([&] {
        const auto params = disp_geo.fmr(cfg);
        cmpkit::DispersionModelParams mp;
        mp.model = cmpkit::dispersion_model_from_string(disp_model);
        mp.cavity_freq_ghz = disp_fbm;
        mp.coupling_ghz = disp_g;
        mp.magnon_shift_ghz = disp_dm;
        mp.hopfield_prefactor = disp_d;
        mp.hopfield_literal = disp_literal;
        mp.validate();
        const auto sweep = parse_sweep(disp_sweep_text, "--sweep");
        std::ofstream file;
        auto& out = open_out(file, disp_out);
        out << "field_T,fmr_GHz,lower_GHz,upper_GHz\n";
        int skipped = 0;
        for (double mt : sweep_values(sweep)) {
            const double b = mt * 1e-3;
            try {
                const double wm = cmpkit::fmr_frequency_ghz(b, params);
                const auto bp = cmpkit::branches(mp, wm);
                out << b << ',' << wm << ',' << bp.lower_ghz << ',' << bp.upper_ghz << '\n';
            } catch (const cmpkit::Error&) {
                ++skipped;
            }
        }
        if (skipped > 0) {
            std::cerr << "skipped " << skipped << " field points (unsaturated or unstable)\n";
        }
    });

    // ---- eta ----
    auto* cmd_eta = app.add_subcommand("eta", "filling factor of a field map");
    std::string eta_file, eta_axis = "z";
    cmd_eta->add_option("map", eta_file, "field map JSON")->required();
    cmd_eta->add_option("--bias-axis", eta_axis, "static field axis");
    cmd_eta->callback([&] {
        GeometryOpts g;
        g.bias_axis = eta_axis;
        const auto map = cmpkit::FieldMap::load_json(eta_file);
        ordered_json j;
        j["eta"] = cmpkit::filling_factor(map, g.axis());
        std::cout << j.dump(1) << "\n";
    });

    // ---- coupling ----
    auto* cmd_coup = app.add_subcommand("coupling", "coupling strength and regime from eta");
    double coup_eta = -1.0, coup_fbm = 0.0;
    std::string coup_map, coup_axis = "z";
    cmd_coup->add_option("--eta", coup_eta, "filling factor in [0, 1]");
    cmd_coup->add_option("--map", coup_map, "field map JSON (computes eta)");
    cmd_coup->add_option("--bias-axis", coup_axis, "static field axis for --map");
    cmd_coup->add_option("--f-bm", coup_fbm, "cavity frequency [GHz]")->required();
    cmd_coup->callback([&] {
        double eta = coup_eta;
        if (!coup_map.empty()) {
            GeometryOpts g;
            g.bias_axis = coup_axis;
            eta = cmpkit::filling_factor(cmpkit::FieldMap::load_json(coup_map), g.axis());
        }
        if (eta < 0.0) {
            throw cmpkit::InvalidArgument("provide --eta or --map");
        }
        const auto constants = cfg.constants();
        const double g2pi =
            cmpkit::coupling_strength_ghz(eta, coup_fbm, constants, cfg.gamma_ghz_per_t);
        const double ratio = g2pi / coup_fbm;
        ordered_json j;
        j["eta"] = eta;
        j["g_over_2pi_ghz"] = g2pi;
        j["g_over_omega"] = ratio;
        j["regime"] = to_string(cmpkit::classify_regime(ratio));
        if (eta > 0.0) {
            j["dsc_threshold_ghz"] =
                cmpkit::dsc_threshold_frequency_ghz(eta, constants, cfg.gamma_ghz_per_t);
        }
        std::cout << j.dump(1) << "\n";
    });

    // ---- simulate ----
    auto* cmd_sim = app.add_subcommand("simulate", "synthesize an |S21| spectrum");
    GeometryOpts sim_geo;
    add_geometry_options(cmd_sim, sim_geo);
    std::string sim_model = "shifted-dicke";
    double sim_fbm = 0.0, sim_g = 0.0, sim_dm = 0.0, sim_d = 1.0, sim_fdm = 0.0;
    std::string sim_fields_text, sim_freqs_text, sim_out;
    std::vector<double> sim_linewidths = {0.08, 0.08, 0.05};
    double sim_dark_weight = 0.6, sim_floor = -60.0, sim_snr = 0.0;
    std::uint64_t sim_seed = 0;
    cmd_sim->add_option("--model", sim_model, "dispersion model");
    cmd_sim->add_option("--f-bm", sim_fbm, "cavity frequency [GHz]")->required();
    cmd_sim->add_option("--g", sim_g, "coupling strength [GHz]")->required();
    cmd_sim->add_option("--delta-m", sim_dm, "magnon shift [GHz]");
    cmd_sim->add_option("--d", sim_d, "Hopfield prefactor");
    cmd_sim->add_option("--f-dm", sim_fdm, "dark mode frequency [GHz]");
    cmd_sim->add_option("--fields", sim_fields_text, "start,stop,steps in mT")->required();
    cmd_sim->add_option("--freqs", sim_freqs_text, "start,stop,steps in GHz")->required();
    cmd_sim->add_option("--linewidths", sim_linewidths, "cavity,magnon,dark FWHM [GHz]")
        ->delimiter(',')
        ->expected(3);
    cmd_sim->add_option("--dark-weight", sim_dark_weight, "dark line amplitude (0 disables)");
    cmd_sim->add_option("--noise-floor-db", sim_floor, "dB floor");
    cmd_sim->add_option("--snr-db", sim_snr, "additive noise SNR in dB (0 = noiseless)");
    cmd_sim->add_option("--seed", sim_seed, "noise RNG seed");
    cmd_sim->add_option("-o,--out", sim_out, "output CSV")->required();
    cmd_sim->callback([&] {
        cmpkit::DispersionModelParams mp;
        mp.model = cmpkit::dispersion_model_from_string(sim_model);
        mp.cavity_freq_ghz = sim_fbm;
        mp.coupling_ghz = sim_g;
        mp.magnon_shift_ghz = sim_dm;
        mp.hopfield_prefactor = sim_d;
        const auto fields = parse_sweep(sim_fields_text, "--fields");
        const auto freqs = parse_sweep(sim_freqs_text, "--freqs");
        cmpkit::SynthesisOptions opt;
        opt.linewidths = {sim_linewidths[0], sim_linewidths[1], sim_linewidths[2]};
        opt.dark_weight = sim_dark_weight;
        opt.noise_floor_db = sim_floor;
        opt.snr_db = sim_snr;
        opt.seed = sim_seed;
        const auto spec = cmpkit::synthesize(
            mp, sim_geo.fmr(cfg), sim_fdm,
            {fields.start * 1e-3, fields.stop * 1e-3, fields.steps},
            {freqs.start, freqs.stop, freqs.steps}, opt);
        spec.save_csv(sim_out);
        if (!spec.masked_fields.empty()) {
            std::cerr << spec.masked_fields.size() << " field columns below saturation\n";
        }
        if (cfg.verbose) {
            std::cerr << "wrote " << spec.field_t.size() << " x " << spec.freq_ghz.size()
                      << " spectrum to " << sim_out << "\n";
        }
    });

    // ---- extract ----
    auto* cmd_ext = app.add_subcommand("extract", "extract branch points from a spectrum");
    std::string ext_file, ext_out;
    double ext_threshold = -25.0, ext_jump = 0.0;
    cmd_ext->add_option("spectrum", ext_file, "spectrum CSV")->required();
    cmd_ext->add_option("--threshold-db", ext_threshold, "peak detection threshold");
    cmd_ext->add_option("--jump-limit", ext_jump, "max column-to-column jump [GHz]");
    cmd_ext->add_option("-o,--out", ext_out, "output CSV (default stdout)");
    cmd_ext->callback([&] {
        const auto spec = cmpkit::Spectrum2D::load_csv(ext_file);
        cmpkit::ExtractionOptions opt;
        opt.jump_limit_ghz = ext_jump;
        const auto res = cmpkit::extract_branches(spec, ext_threshold, opt);
        if (res.skipped_columns > 0) {
            std::cerr << "skipped " << res.skipped_columns << " columns without peaks\n";
        }
        if (ext_out.empty()) {
            std::cout << "field_mT,freq_GHz,label\n";
            for (const auto& p : res.branches.points) {
                std::cout << p.field_t * 1e3 << ',' << p.freq_ghz << ','
                          << to_string(p.label) << '\n';
            }
        } else {
            res.branches.save_csv(ext_out);
        }
    });

    // ---- fit ----
    auto* cmd_fit = app.add_subcommand("fit", "least-squares branch fit");
    GeometryOpts fit_geo;
    add_geometry_options(cmd_fit, fit_geo);
    std::string fit_file, fit_model = "shifted-dicke";
    std::vector<std::string> fit_fix, fit_guess;
    bool fit_symmetrize = false, fit_literal = false;
    int fit_max_iter = 200;
    cmd_fit->add_option("branches", fit_file, "branch CSV")->required();
    cmd_fit->add_option("--model", fit_model, "dispersion model");
    cmd_fit->add_option("--fix", fit_fix, "hold a parameter: name=value (repeatable)");
    cmd_fit->add_option("--guess", fit_guess, "initial value: name=value (repeatable)");
    cmd_fit->add_flag("--symmetrize", fit_symmetrize, "fold fields to |field| first");
    cmd_fit->add_flag("--hopfield-literal", fit_literal, "as-printed Hopfield variant");
    cmd_fit->add_option("--max-iter", fit_max_iter, "iteration cap");
    cmd_fit->callback([&] {
        cmpkit::FitProblem prob;
        prob.data = cmpkit::BranchData::load_csv(fit_file);
        if (fit_symmetrize) prob.data = cmpkit::symmetrize(prob.data);
        prob.model = cmpkit::dispersion_model_from_string(fit_model);
        prob.fmr = fit_geo.fmr(cfg);
        prob.max_iterations = fit_max_iter;
        prob.hopfield_literal = fit_literal;

        std::optional<cmpkit::FitParameters> guess;
        if (!fit_guess.empty() || !fit_fix.empty()) {
            cmpkit::FitParameters q;
            bool any_guess = false;
            try {
                q = cmpkit::initial_guess(prob.data);
                any_guess = true;
            } catch (const cmpkit::Error&) {
                // explicit values must cover what the data cannot seed
            }
            for (const auto& text : fit_guess) {
                std::string name;
                const double value = parse_assignment(text, name);
                q.set(name, value);
                any_guess = true;
            }
            for (const auto& text : fit_fix) {
                std::string name;
                const double value = parse_assignment(text, name);
                q.set(name, value);
                prob.fixed.insert(name);
                any_guess = true;
            }
            if (!any_guess) {
                throw cmpkit::InvalidArgument("could not assemble an initial guess");
            }
            guess = q;
        }
        prob.guess = guess;

        const auto res = cmpkit::fit(prob);
        std::cout << fit_result_json(res).dump(1) << "\n";
        if (!res.converged) {
            throw cmpkit::Error("fit did not converge within the iteration cap");
        }
    });

    // ---- gap ----
    auto* cmd_gap = app.add_subcommand("gap", "zero-field gap of the shifted-Dicke model");
    double gap_fbm = 0.0, gap_g = 0.0, gap_dm = 0.0, gap_zf = 0.0, gap_dm_ratio = -1.0;
    std::string gap_sweep_text, gap_out;
    cmd_gap->add_option("--f-bm", gap_fbm, "cavity frequency [GHz]")->required();
    cmd_gap->add_option("--g", gap_g, "coupling strength [GHz]");
    cmd_gap->add_option("--delta-m", gap_dm, "magnon shift [GHz]");
    cmd_gap->add_option("--zero-field-magnon", gap_zf, "zero-field magnon frequency [GHz]");
    cmd_gap->add_option("--sweep", gap_sweep_text,
                        "g/omega sweep start,stop,steps (emits a CSV curve)");
    cmd_gap->add_option("--dm-ratio", gap_dm_ratio, "delta_m/omega for --sweep");
    cmd_gap->add_option("-o,--out", gap_out, "output CSV for --sweep (default stdout)");
    cmd_gap->callback([&] {
        if (!gap_sweep_text.empty()) {
            if (gap_dm_ratio < 0.0) {
                throw cmpkit::InvalidArgument("--sweep needs --dm-ratio");
            }
            const auto sweep = parse_sweep(gap_sweep_text, "--sweep");
            const auto curve =
                cmpkit::gap_curve(gap_fbm, gap_dm_ratio, sweep_values(sweep));
            std::ofstream file;
            auto& out = open_out(file, gap_out);
            out << "g_over_omega,gap_over_omega\n";
            for (const auto& [x, y] : curve) out << x << ',' << y << '\n';
            return;
        }
        cmpkit::DispersionModelParams mp;
        mp.model = cmpkit::DispersionModel::ShiftedDicke;
        mp.cavity_freq_ghz = gap_fbm;
        mp.coupling_ghz = gap_g;
        mp.magnon_shift_ghz = gap_dm;
        ordered_json j;
        j["gap_ghz"] = cmpkit::zero_field_gap_ghz(mp, gap_zf);
        std::cout << j.dump(1) << "\n";
    });

    // ---- analyze ----
    auto* cmd_an = app.add_subcommand("analyze", "consistency, gap and regression report");
    std::string an_tables, an_out = "report.json", an_plots;
    cmd_an->add_option("--tables", an_tables, "cavity table CSV")->required();
    cmd_an->add_option("--out", an_out, "report JSON path");
    cmd_an->add_option("--plots", an_plots, "directory for SVG plots");
    cmd_an->callback([&] {
        const auto rows = cmpkit::load_cavity_table_csv(an_tables);
        const auto rep = cmpkit::analyze_records(rows);
        cmpkit::write_report(rep, an_out, an_plots);
        std::cout << "report: " << an_out << " (" << rows.size() << " rows, max consistency "
                  << rep.max_consistency_delta << ", max gap delta " << rep.max_gap_delta_ghz
                  << " GHz)\n";
    });

    // ---- reproduce ----
    auto* cmd_rep = app.add_subcommand(
        "reproduce", "run the bundled-table consistency + gap + regression pipeline");
    std::string rep_tables, rep_dir = "cmpkit-report";
    cmd_rep->add_option("--tables", rep_tables, "override the bundled cavity table");
    cmd_rep->add_option("--out-dir", rep_dir, "report output directory");
    cmd_rep->callback([&] {
        const auto rows = rep_tables.empty() ? cmpkit::reference_cavity_table()
                                             : cmpkit::load_cavity_table_csv(rep_tables);
        const auto rep = cmpkit::analyze_records(rows);
        std::error_code ec;
        std::filesystem::create_directories(rep_dir, ec);
        if (ec) throw cmpkit::IoError("cannot create " + rep_dir, rep_dir);
        const auto json_path = (std::filesystem::path(rep_dir) / "report.json").string();
        cmpkit::write_report(rep, json_path, rep_dir);

        const bool consistency_ok = rep.max_consistency_delta <= 0.01;
        const bool gap_ok = rep.max_gap_delta_ghz <= 0.08 && rep.gap_within_003 >= 10;
        const bool trend_ok = rep.dm_ratio_vs_g_ratio.a > 0.0;
        std::printf("consistency: %s (max |delta| %.4f, tol 0.01, %zu rows)\n",
                    consistency_ok ? "PASS" : "FAIL", rep.max_consistency_delta,
                    rep.rows.size());
        std::printf("zero-field gap: %s (max |delta| %.4f GHz, tol 0.08; %d rows within 0.03)\n",
                    gap_ok ? "PASS" : "FAIL", rep.max_gap_delta_ghz, rep.gap_within_003);
        std::printf("shift trend: %s (quadratic leading coefficient %.3f, R^2 %.3f)\n",
                    trend_ok ? "PASS" : "FAIL", rep.dm_ratio_vs_g_ratio.a,
                    rep.dm_ratio_vs_g_ratio.r_squared);
        std::printf("report written to %s\n", json_path.c_str());
        if (!(consistency_ok && gap_ok && trend_ok)) {
            throw cmpkit::Error("reproduction checks failed");
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cmpkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
