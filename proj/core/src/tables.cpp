#include <fstream>
#include <sstream>

#include "cmpkit/analysis.hpp"
#include "cmpkit/errors.hpp"
#include "csv_util.hpp"

namespace cmpkit {

void CavityRecord::validate() const {
    if (!(f_dm_ghz > 0.0) || !(f_bm_ghz > 0.0) || !(g_ghz > 0.0)) {
        throw InvalidArgument("cavity record frequencies must be positive");
    }
    if (!(f_dm_ghz < f_bm_ghz)) {
        throw InvalidArgument("dark mode must sit below the bright mode (" + label + ")");
    }
    if (delta_m_ghz < 0.0 || f_gap_ghz < 0.0) {
        throw InvalidArgument("shift and gap must be non-negative (" + label + ")");
    }
}

const std::vector<CavityRecord>& reference_cavity_table() {
    static const std::vector<CavityRecord> rows = {
        {"CAV01-a", 116.0, 3.75, 7.65, 2.68, 0.35, 0.94, 2.35, 0.58},
        {"CAV01-b", 75.0, 3.19, 7.31, 2.62, 0.36, 0.94, 2.29, 0.54},
        {"CAV01-c", 65.0, 3.05, 7.16, 2.56, 0.36, 0.92, 2.31, 0.54},
        {"CAV01-d", 36.0, 2.40, 6.44, 2.41, 0.37, 0.90, 2.27, 0.64},
        {"CAV01-e", 10.0, 1.38, 4.46, 2.03, 0.46, 0.92, 2.39, 0.87},
        {"CAV01-f", 3.0, 0.81, 2.80, 1.64, 0.59, 0.96, 2.59, 1.22},
        {"CAV02-a", std::nullopt, 4.06, 9.79, 2.72, 0.28, 0.76, 1.63, 0.24},
        {"CAV02-b", std::nullopt, 3.26, 8.76, 2.59, 0.30, 0.77, 1.71, 0.30},
        {"CAV02-c", std::nullopt, 3.01, 8.32, 2.52, 0.30, 0.76, 1.74, 0.31},
        {"CAV02-d", std::nullopt, 2.64, 7.63, 2.42, 0.32, 0.77, 1.69, 0.34},
        {"CAV03-a", std::nullopt, 3.02, 5.53, 0.65, 0.12, 0.08, 0.33, 0.01},
        {"CAV03-b", std::nullopt, 2.29, 4.36, 0.69, 0.16, 0.11, 0.29, 0.02},
        {"CAV03-c", std::nullopt, 1.44, 2.92, 0.63, 0.22, 0.14, 0.37, 0.02},
        {"CAV03-d", std::nullopt, 1.30, 2.35, 0.58, 0.25, 0.14, 0.50, 0.05},
    };
    return rows;
}

namespace {

std::string table_csv(const std::vector<CavityRecord>& rows) {
    std::ostringstream out;
    out << "label,d_um,f_DM,f_BM,g_2pi,g_over_w,g2_over_2piw,delta_m,f_gap\n";
    for (const auto& r : rows) {
        out << r.label << ',';
        if (r.d_gap_um) out << csv::format(*r.d_gap_um);
        out << ',' << csv::format(r.f_dm_ghz) << ',' << csv::format(r.f_bm_ghz) << ','
            << csv::format(r.g_ghz) << ',' << csv::format(r.g_over_omega) << ','
            << csv::format(r.g_sq_over_omega_ghz) << ',' << csv::format(r.delta_m_ghz) << ','
            << csv::format(r.f_gap_ghz) << '\n';
    }
    return out.str();
}

} // namespace

std::string reference_cavity_table_csv() { return table_csv(reference_cavity_table()); }

std::vector<CavityRecord> load_cavity_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open table: " + path, path);
    std::vector<CavityRecord> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find("label") != std::string::npos) continue;
        }
        auto cells = csv::split(line);
        if (cells.size() != 9) {
            throw IoError("table row needs 9 columns in " + path, path);
        }
        CavityRecord r;
        r.label = cells[0];
        if (!cells[1].empty()) r.d_gap_um = csv::to_double(cells[1]);
        r.f_dm_ghz = csv::to_double(cells[2]);
        r.f_bm_ghz = csv::to_double(cells[3]);
        r.g_ghz = csv::to_double(cells[4]);
        r.g_over_omega = csv::to_double(cells[5]);
        r.g_sq_over_omega_ghz = csv::to_double(cells[6]);
        r.delta_m_ghz = csv::to_double(cells[7]);
        r.f_gap_ghz = csv::to_double(cells[8]);
        r.validate();
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw IoError("table has no rows: " + path, path);
    return rows;
}

void save_cavity_table_csv(const std::vector<CavityRecord>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write table: " + path, path);
    out << table_csv(rows);
}

} // namespace cmpkit
