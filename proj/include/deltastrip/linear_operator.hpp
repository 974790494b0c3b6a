#pragma once

#include <vector>

#include "deltastrip/strip.hpp"

namespace deltastrip {

/**
 * Discrete L = -d_xx - w d_yy + c + gamma*delta_0(x) on a StripGrid.
 *
 * The matrix is the Hessian of the trapezoid-weighted quadratic form
 *   kinetic_x + w*kinetic_y + c*M + gamma*T
 * under the quadrature inner product, so the delta enters as gamma/hx on the
 * x = 0 column. Unknowns are the interior columns; the x-boundary columns are
 * Dirichlet and always map to 0.
 *
 * solve() diagonalizes the mirrored Neumann stencil with the cosine basis
 * cos(k*pi*j/(ny-1)) (orthogonal for the trapezoid weights) and runs one
 * tridiagonal solve in x per transverse mode.
 */
class StripOperator {
public:
    StripOperator(const StripGrid& grid, double y_weight, double shift, double gamma);

    Field apply(const Field& u) const;
    Field solve(const Field& rhs) const;

    const StripGrid& grid() const { return grid_; }
    double shift() const { return shift_; }

    /// Eigenvalue of the mirrored Neumann stencil for transverse mode k.
    double transverse_eigenvalue(int k) const { return mu_[static_cast<std::size_t>(k)]; }

private:
    StripGrid grid_;
    double y_weight_;
    double shift_;
    double gamma_;
    std::vector<double> basis_;     // basis_[k*ny + j] = cos(k*pi*j/(ny-1))
    std::vector<double> norms_;     // sum_j wy_j basis^2
    std::vector<double> mu_;        // transverse eigenvalues
    std::vector<double> upper_;     // Thomas factorization, per mode, nx-2 entries
    std::vector<double> inv_pivot_;
};

}  // namespace deltastrip
