#pragma once

#include <array>
#include <span>
#include <vector>

#include "fvdp/boundary.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"

namespace fvdp {

/// Per-axis centered difference quotients dV_{i+1/2} of the model potential,
/// one array of n+1 values per axis (the catalog potentials are separable,
/// so the quotient along an axis depends on that axis only). Boundary
/// entries use the boundary face as the outer evaluation point; they are
/// unused for zero-flux sides.
inline std::vector<std::vector<double>> potential_gradients(const ProblemModel& model,
                                                            const MeshND& mesh,
                                                            const BoundaryCondition& bc) {
    std::vector<std::vector<double>> dv(mesh.dim());
    for (int a = 0; a < mesh.dim(); ++a) {
        const Mesh1D& ax = mesh.axes[a];
        const int n = ax.n_cells();
        const auto dist = detail::axis_distances(ax, bc.axes[a].periodic());
        dv[a].assign(static_cast<std::size_t>(n) + 1, 0.0);
        if (model.dv_constant) {
            for (auto& v : dv[a]) v = *model.dv_constant;
            continue;
        }
        auto V1 = [&](double x) {
            std::array<double, 3> p{0.0, 0.0, 0.0};
            p[a] = x;
            return model.V_at(std::span<const double>(p.data(), mesh.dim()));
        };
        for (int k = 1; k < n; ++k)
            dv[a][k] = (V1(ax.centers[k]) - V1(ax.centers[k - 1])) / dist[k];
        dv[a][0] = (V1(ax.centers[0]) - V1(ax.a())) / dist[0];
        dv[a][n] = (V1(ax.b()) - V1(ax.centers[n - 1])) / dist[n];
    }
    return dv;
}

}  // namespace fvdp
