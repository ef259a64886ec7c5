#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"
#include "qbat/metrics.hpp"
#include "qbat/sweeps.hpp"

namespace qbat {

/// Numeric table with a header row; serialized as comma-separated text with
/// LF line endings and 12 significant digits.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_csv(const CsvTable& table, std::ostream& os) {
    for (std::size_t k = 0; k < table.header.size(); ++k) os << (k ? "," : "") << table.header[k];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_number(row[k]);
        os << '\n';
    }
}

/// Writes to a temporary file next to `path` and renames it into place, so a
/// failed write never leaves a partial file behind.
inline void write_csv(const CsvTable& table, const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::random_device rd;
    const fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rd() % 1000000));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        write_csv(table, out);
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into '" + path.string() + "'");
    }
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) t.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable to_table(const Trajectory& traj, const BatterySpectrum& spectrum) {
    CsvTable t{{"t[1/Omega0]", "P1", "P2", "P3", "energy[hbar*Omega0]", "ergotropy[hbar*Omega0]"}, {}};
    t.rows.reserve(traj.size());
    for (const auto& s : traj.samples) {
        const auto p = populations(s.rho);
        t.rows.push_back({s.t, p[0], p[1], p[2], energy(s.rho, spectrum), ergotropy(s.rho, spectrum)});
    }
    return t;
}

inline CsvTable to_table(const TauSweepResult& r) {
    CsvTable t{{"omega0_tau[dimensionless]", "ergotropy[hbar*Omega0]", "power[hbar*Omega0^2]"}, {}};
    for (const auto& row : r.rows) t.rows.push_back({row.omega0_tau, row.ergotropy, row.power});
    return t;
}

inline CsvTable to_table(const std::vector<PhiSweepRow>& r) {
    CsvTable t{{"phi[rad]", "p_max[hbar*Omega0^2]", "tau_star[Omega0*tau]", "c_at_max[hbar*Omega0]"}, {}};
    for (const auto& row : r) t.rows.push_back({row.phi, row.best.p_max, row.best.tau_star, row.best.c_at_max});
    return t;
}

/// Long format, phi-major.
inline CsvTable to_table(const ContourResult& r) {
    CsvTable t{{"phi[rad]", "omega0_tau[dimensionless]", "energy[hbar*Omega0]", "power[hbar*Omega0^2]"}, {}};
    for (std::size_t i = 0; i < r.phi_grid.size(); ++i)
        for (std::size_t j = 0; j < r.tau_grid.size(); ++j) t.rows.push_back({r.phi_grid[i], r.tau_grid[j], r.energy[i][j], r.power[i][j]});
    return t;
}

}  // namespace qbat
