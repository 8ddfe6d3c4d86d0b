#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvdp {

/// 1D cell-centered mesh. Interface i+1/2 separates cells i and i+1;
/// interface_distances[k] is the center-to-center distance across interface k,
/// with the boundary convention d = center-to-boundary-face (half a cell on
/// uniform grids).
struct Mesh1D {
    std::vector<double> interfaces;           // size n+1, strictly increasing
    std::vector<double> centers;              // size n
    std::vector<double> widths;               // size n
    std::vector<double> interface_distances;  // size n+1

    int n_cells() const { return static_cast<int>(centers.size()); }
    double a() const { return interfaces.front(); }
    double b() const { return interfaces.back(); }
    double length() const { return b() - a(); }

    bool is_uniform(double rel_tol = 1e-12) const {
        const double w0 = widths.front();
        for (double w : widths)
            if (std::abs(w - w0) > rel_tol * std::abs(w0)) return false;
        return true;
    }
};

inline Mesh1D build_nonuniform_1d(std::vector<double> interfaces) {
    if (interfaces.size() < 2)
        throw std::invalid_argument("mesh: need at least 2 interface coordinates");
    for (std::size_t i = 0; i + 1 < interfaces.size(); ++i)
        if (!(interfaces[i] < interfaces[i + 1]))
            throw std::invalid_argument("mesh: interfaces must be strictly increasing");

    Mesh1D m;
    m.interfaces = std::move(interfaces);
    const std::size_t n = m.interfaces.size() - 1;
    m.centers.resize(n);
    m.widths.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.centers[i] = 0.5 * (m.interfaces[i] + m.interfaces[i + 1]);
        m.widths[i] = m.interfaces[i + 1] - m.interfaces[i];
    }
    m.interface_distances.resize(n + 1);
    m.interface_distances[0] = m.centers[0] - m.interfaces[0];
    m.interface_distances[n] = m.interfaces[n] - m.centers[n - 1];
    for (std::size_t k = 1; k < n; ++k)
        m.interface_distances[k] = m.centers[k] - m.centers[k - 1];
    return m;
}

inline Mesh1D build_uniform_1d(double a, double b, int n_cells) {
    if (!(a < b)) throw std::invalid_argument("mesh: require a < b");
    if (n_cells < 1) throw std::invalid_argument("mesh: require n_cells >= 1");
    std::vector<double> ifaces(static_cast<std::size_t>(n_cells) + 1);
    const double dx = (b - a) / n_cells;
    for (int k = 0; k <= n_cells; ++k) ifaces[k] = a + k * dx;
    ifaces[n_cells] = b;  // exact endpoint
    return build_nonuniform_1d(std::move(ifaces));
}

/// Cartesian product of 1 to 3 Mesh1D axes. Flattened cell indexing is
/// row-major over axes in declaration order.
struct MeshND {
    std::vector<Mesh1D> axes;

    int dim() const { return static_cast<int>(axes.size()); }

    std::size_t cell_count() const {
        std::size_t c = 1;
        for (const auto& ax : axes) c *= static_cast<std::size_t>(ax.n_cells());
        return c;
    }

    std::size_t axis_stride(int axis) const {
        std::size_t s = 1;
        for (int a = dim() - 1; a > axis; --a) s *= static_cast<std::size_t>(axes[a].n_cells());
        return s;
    }

    std::size_t flat_index(const std::array<int, 3>& idx) const {
        std::size_t f = 0;
        for (int a = 0; a < dim(); ++a)
            f = f * static_cast<std::size_t>(axes[a].n_cells()) + static_cast<std::size_t>(idx[a]);
        return f;
    }

    std::array<int, 3> multi_index(std::size_t flat) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = dim() - 1; a >= 0; --a) {
            const auto n = static_cast<std::size_t>(axes[a].n_cells());
            idx[a] = static_cast<int>(flat % n);
            flat /= n;
        }
        return idx;
    }

    std::array<double, 3> cell_center(std::size_t flat) const {
        const auto idx = multi_index(flat);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < dim(); ++a) x[a] = axes[a].centers[idx[a]];
        return x;
    }

    double cell_volume(std::size_t flat) const {
        const auto idx = multi_index(flat);
        double v = 1.0;
        for (int a = 0; a < dim(); ++a) v *= axes[a].widths[idx[a]];
        return v;
    }

    /// Measure of the face transverse to `axis` through the cell at `idx`.
    double transverse_measure(int axis, const std::array<int, 3>& idx) const {
        double v = 1.0;
        for (int a = 0; a < dim(); ++a)
            if (a != axis) v *= axes[a].widths[idx[a]];
        return v;
    }
};

inline MeshND build_cartesian(std::vector<Mesh1D> axes) {
    if (axes.empty() || axes.size() > 3)
        throw std::invalid_argument("mesh: dimension must be 1, 2 or 3");
    return MeshND{std::move(axes)};
}

inline double total_mass(const std::vector<double>& values, const MeshND& mesh) {
    double m = 0.0;
    for (std::size_t c = 0; c < values.size(); ++c) m += mesh.cell_volume(c) * values[c];
    return m;
}

/// Volume-weighted 2x coarsening of cell averages on a uniform mesh with an
/// even cell count per axis. Preserves total mass exactly.
inline std::vector<double> restrict_halving(const std::vector<double>& fine,
                                            const MeshND& fine_mesh) {
    if (fine.size() != fine_mesh.cell_count())
        throw std::invalid_argument("restrict_halving: value/mesh size mismatch");
    std::array<int, 3> nc{1, 1, 1};
    for (int a = 0; a < fine_mesh.dim(); ++a) {
        const auto& ax = fine_mesh.axes[a];
        if (ax.n_cells() % 2 != 0)
            throw std::invalid_argument("restrict_halving: per-axis cell count must be even");
        if (!ax.is_uniform())
            throw std::invalid_argument("restrict_halving: mesh must be uniform");
        nc[a] = ax.n_cells() / 2;
    }
    std::size_t coarse_count = 1;
    for (int a = 0; a < fine_mesh.dim(); ++a) coarse_count *= static_cast<std::size_t>(nc[a]);

    const int d = fine_mesh.dim();
    std::vector<double> coarse(coarse_count, 0.0);
    // children have equal volume on a uniform mesh, so the volume-weighted
    // average is the plain average over 2^d children
    const double inv_children = 1.0 / static_cast<double>(1 << d);
    for (std::size_t f = 0; f < fine.size(); ++f) {
        const auto idx = fine_mesh.multi_index(f);
        std::size_t cflat = 0;
        for (int a = 0; a < d; ++a)
            cflat = cflat * static_cast<std::size_t>(nc[a]) + static_cast<std::size_t>(idx[a] / 2);
        coarse[cflat] += fine[f] * inv_children;
    }
    return coarse;
}

/// The 2x-coarsened companion of a uniform mesh (for convergence studies).
inline MeshND coarsen_halving(const MeshND& fine_mesh) {
    std::vector<Mesh1D> axes;
    axes.reserve(fine_mesh.axes.size());
    for (const auto& ax : fine_mesh.axes) {
        if (ax.n_cells() % 2 != 0 || !ax.is_uniform())
            throw std::invalid_argument("coarsen_halving: need uniform mesh with even counts");
        axes.push_back(build_uniform_1d(ax.a(), ax.b(), ax.n_cells() / 2));
    }
    return build_cartesian(std::move(axes));
}

}  // namespace fvdp
