#include "deltastrip/linear_operator.hpp"

#include <cmath>
#include <numbers>

namespace deltastrip {

StripOperator::StripOperator(const StripGrid& grid, double y_weight, double shift, double gamma)
    : grid_(grid), y_weight_(y_weight), shift_(shift), gamma_(gamma) {
    const int nx = grid_.nx();
    const int ny = grid_.ny();
    const auto uny = static_cast<std::size_t>(ny);
    basis_.resize(uny * uny);
    norms_.assign(uny, 0.0);
    mu_.resize(uny);
    const double hy = grid_.hy();
    for (int k = 0; k < ny; ++k) {
        const double theta = std::numbers::pi * k / (ny - 1);
        mu_[static_cast<std::size_t>(k)] = (2.0 - 2.0 * std::cos(theta)) / (hy * hy);
        for (int j = 0; j < ny; ++j) {
            const double v = std::cos(theta * j);
            basis_[static_cast<std::size_t>(k) * uny + static_cast<std::size_t>(j)] = v;
            norms_[static_cast<std::size_t>(k)] += grid_.wy(j) * v * v;
        }
    }

    const int n = nx - 2;
    const auto un = static_cast<std::size_t>(n);
    upper_.assign(uny * un, 0.0);
    inv_pivot_.assign(uny * un, 0.0);
    const double hx = grid_.hx();
    const double off = -1.0 / (hx * hx);
    const int c = grid_.center() - 1;  // interior index of the defect column
    for (int k = 0; k < ny; ++k) {
        const double base = 2.0 / (hx * hx) + shift_ + y_weight_ * mu_[static_cast<std::size_t>(k)];
        double prev_upper = 0.0;
        for (int i = 0; i < n; ++i) {
            double diag = base + (i == c ? gamma_ / hx : 0.0);
            const double pivot = diag - (i > 0 ? off * prev_upper : 0.0);
            if (!(pivot > 0.0)) {
                throw Error(ErrorKind::ConsistencyError,
                            "shifted strip operator is not positive definite; increase the shift");
            }
            const std::size_t at = static_cast<std::size_t>(k) * un + static_cast<std::size_t>(i);
            inv_pivot_[at] = 1.0 / pivot;
            upper_[at] = off / pivot;
            prev_upper = upper_[at];
        }
    }
}

Field StripOperator::apply(const Field& u) const {
    Field out = laplacian_x(u);
    out.axpy(y_weight_, laplacian_y_neumann(u));
    out *= -1.0;
    out.axpy(shift_, u);
    const int c = grid_.center();
    for (int j = 0; j < grid_.ny(); ++j) out(c, j) += gamma_ / grid_.hx() * u(c, j);
    out.zero_x_boundary();
    return out;
}

Field StripOperator::solve(const Field& rhs) const {
    const int nx = grid_.nx();
    const int ny = grid_.ny();
    const int n = nx - 2;
    const auto uny = static_cast<std::size_t>(ny);
    const auto un = static_cast<std::size_t>(n);
    const double off = -1.0 / (grid_.hx() * grid_.hx());

    // Forward transform of the interior columns: modal[k*n + i].
    std::vector<double> modal(uny * un, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < ny; ++k) {
            double s = 0.0;
            const double* row = &basis_[static_cast<std::size_t>(k) * uny];
            for (int j = 0; j < ny; ++j) s += grid_.wy(j) * row[j] * rhs(i + 1, j);
            modal[static_cast<std::size_t>(k) * un + static_cast<std::size_t>(i)] =
                s / norms_[static_cast<std::size_t>(k)];
        }
    }

    for (int k = 0; k < ny; ++k) {
        double* d = &modal[static_cast<std::size_t>(k) * un];
        const double* up = &upper_[static_cast<std::size_t>(k) * un];
        const double* ip = &inv_pivot_[static_cast<std::size_t>(k) * un];
        d[0] *= ip[0];
        for (int i = 1; i < n; ++i) d[i] = (d[i] - off * d[i - 1]) * ip[i];
        for (int i = n - 2; i >= 0; --i) d[i] -= up[i] * d[i + 1];
    }

    Field out(grid_);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < ny; ++j) {
            double s = 0.0;
            for (int k = 0; k < ny; ++k) {
                s += basis_[static_cast<std::size_t>(k) * uny + static_cast<std::size_t>(j)] *
                     modal[static_cast<std::size_t>(k) * un + static_cast<std::size_t>(i)];
            }
            out(i + 1, j) = s;
        }
    }
    return out;
}

}  // namespace deltastrip
