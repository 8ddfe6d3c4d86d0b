#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fvdp/boundary.hpp"
#include "fvdp/mesh.hpp"

namespace fvdp::detail {

/// Fill a ghosted line buffer ug of size n+4 whose interior slots
/// ug[2..n+1] already hold the cell values.
inline void fill_ghosts(std::span<double> ug, const AxisBc& bc) {
    const std::size_t n = ug.size() - 4;
    switch (bc.left.kind) {
        case BcKind::periodic:
            ug[0] = ug[n];
            ug[1] = ug[n + 1];
            break;
        case BcKind::neumann_zero_flux:
        case BcKind::zero_gradient:
            ug[1] = ug[2];
            ug[0] = ug[3];
            break;
        case BcKind::dirichlet:
            ug[0] = ug[1] = bc.left.value;
            break;
    }
    switch (bc.right.kind) {
        case BcKind::periodic:
            ug[n + 2] = ug[2];
            ug[n + 3] = ug[3];
            break;
        case BcKind::neumann_zero_flux:
        case BcKind::zero_gradient:
            ug[n + 2] = ug[n + 1];
            ug[n + 3] = ug[n];
            break;
        case BcKind::dirichlet:
            ug[n + 2] = ug[n + 3] = bc.right.value;
            break;
    }
}

/// Center-to-center distances across the n+1 interfaces of one axis,
/// with the periodic wrap distance substituted at both ends when needed.
inline std::vector<double> axis_distances(const Mesh1D& ax, bool periodic) {
    std::vector<double> dist = ax.interface_distances;
    if (periodic) {
        const double wrap = dist.front() + dist.back();
        dist.front() = wrap;
        dist.back() = wrap;
    }
    return dist;
}

/// Visit every grid line along `axis`. The callback receives the line id
/// and an indexer j -> flat cell index for cells j = 0..n-1 of the line.
template <class Fn>
inline void for_each_line(const MeshND& mesh, int axis, Fn&& fn) {
    const int d = mesh.dim();
    const std::size_t n = static_cast<std::size_t>(mesh.axes[axis].n_cells());
    std::size_t outer = 1, inner = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(mesh.axes[a].n_cells());
    for (int a = axis + 1; a < d; ++a) inner *= static_cast<std::size_t>(mesh.axes[a].n_cells());

    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) {
            const std::size_t base = o * n * inner + i;
            const std::size_t line_id = o * inner + i;
            fn(line_id, [base, inner](std::size_t j) { return base + j * inner; });
        }
    }
}

}  // namespace fvdp::detail
