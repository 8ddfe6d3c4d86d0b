#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvdp/convergence.hpp"
#include "fvdp/diagnostics.hpp"
#include "fvdp/driftdiffusion.hpp"
#include "fvdp/mesh.hpp"

namespace fvdp {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string csv_number(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::ofstream csv_open(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
    return out;
}

inline void write_diagnostics_csv(const std::string& path,
                                  std::span<const DiagnosticsRecord> records) {
    auto out = csv_open(path);
    out << "time,mass,entropy,dissipation,l1_to_equilibrium\n";
    for (const auto& r : records)
        out << csv_number(r.time) << ',' << csv_number(r.mass) << ',' << csv_number(r.entropy)
            << ',' << csv_number(r.dissipation) << ',' << csv_number(r.l1_to_equilibrium) << '\n';
}

inline void write_snapshot_csv(const std::string& path, std::span<const double> values,
                               const MeshND& mesh) {
    if (values.size() != mesh.cell_count())
        throw std::invalid_argument("csv: snapshot shape mismatch");
    auto out = csv_open(path);
    const int d = mesh.dim();
    out << (d == 1 ? "x,u" : d == 2 ? "x,y,u" : "x,y,z,u") << '\n';
    for (std::size_t c = 0; c < values.size(); ++c) {
        const auto x = mesh.cell_center(c);
        for (int a = 0; a < d; ++a) out << csv_number(x[a]) << ',';
        out << csv_number(values[c]) << '\n';
    }
}

inline void write_dd_snapshot_csv(const std::string& path, const DDState& state,
                                  const MeshND& mesh) {
    auto out = csv_open(path);
    const int d = mesh.dim();
    out << (d == 1 ? "x,N,P,V" : "x,y,N,P,V") << '\n';
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const auto x = mesh.cell_center(c);
        for (int a = 0; a < d; ++a) out << csv_number(x[a]) << ',';
        out << csv_number(state.N[c]) << ',' << csv_number(state.P[c]) << ','
            << csv_number(state.V[c]) << '\n';
    }
}

inline void write_dd_records_csv(const std::string& path, std::span<const DDRecord> records) {
    auto out = csv_open(path);
    out << "time,mass_N,mass_P,energy,dissipation,l1_to_equilibrium\n";
    for (const auto& r : records)
        out << csv_number(r.time) << ',' << csv_number(r.mass_N) << ',' << csv_number(r.mass_P)
            << ',' << csv_number(r.energy) << ',' << csv_number(r.dissipation) << ','
            << csv_number(r.l1_to_equilibrium) << '\n';
}

inline void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
    auto out = csv_open(path);
    out << "n_cells,l1_error,order\n";
    for (const auto& row : table.rows) {
        out << row.n_cells << ',' << csv_number(row.l1_error) << ',';
        if (std::isfinite(row.order)) out << csv_number(row.order);
        out << '\n';
    }
}

}  // namespace fvdp
