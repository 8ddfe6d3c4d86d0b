#pragma once

#include <stdexcept>
#include <vector>

namespace fvdp {

/// zero_gradient mirrors the interior like neumann_zero_flux but still
/// evaluates the interface flux (outflow), instead of forcing it to zero.
enum class BcKind { periodic, neumann_zero_flux, dirichlet, zero_gradient };

struct BcSide {
    BcKind kind = BcKind::neumann_zero_flux;
    double value = 0.0;  // dirichlet only

    static BcSide periodic() { return {BcKind::periodic, 0.0}; }
    static BcSide neumann() { return {BcKind::neumann_zero_flux, 0.0}; }
    static BcSide dirichlet(double v) { return {BcKind::dirichlet, v}; }
    static BcSide zero_gradient() { return {BcKind::zero_gradient, 0.0}; }

    friend bool operator==(const BcSide&, const BcSide&) = default;
};

struct AxisBc {
    BcSide left, right;

    bool periodic() const { return left.kind == BcKind::periodic; }

    void validate() const {
        if ((left.kind == BcKind::periodic) != (right.kind == BcKind::periodic))
            throw std::invalid_argument("bc: periodic must be declared on both sides of an axis");
    }

    friend bool operator==(const AxisBc&, const AxisBc&) = default;
};

struct BoundaryCondition {
    std::vector<AxisBc> axes;

    void validate(int dim) const {
        if (static_cast<int>(axes.size()) != dim)
            throw std::invalid_argument("bc: one AxisBc per mesh axis required");
        for (const auto& ab : axes) ab.validate();
    }

    static BoundaryCondition uniform(int dim, AxisBc ab) {
        BoundaryCondition bc;
        bc.axes.assign(dim, ab);
        return bc;
    }

    friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

}  // namespace fvdp
