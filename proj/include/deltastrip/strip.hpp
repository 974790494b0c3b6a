#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deltastrip/error.hpp"

namespace deltastrip {

/**
 * Uniform grid on the truncated normalized strip [-X, X] x [0, 1].
 *
 * nx is odd so that x = 0 is a grid line (the defect line). The transverse
 * direction carries Neumann conditions at y = 0 and y = 1, the x ends carry a
 * homogeneous Dirichlet closure. Node (i, j) sits at (-X + i*hx, j*hy).
 */
class StripGrid {
public:
    StripGrid() = default;

    static StripGrid make(double x_extent, int nx, int ny);

    /// max(16, 10/sqrt(omega - gamma_-^2/4)): decay budget for e^{-sqrt(omega)|x|}.
    static double default_extent(double omega, double gamma);

    double x_extent() const { return x_extent_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    int center() const { return (nx_ - 1) / 2; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(j);
    }

    double x(int i) const { return -x_extent_ + i * hx_; }
    double y(int j) const { return j * hy_; }

    // Trapezoid weights.
    double wx(int i) const { return (i == 0 || i == nx_ - 1) ? 0.5 * hx_ : hx_; }
    double wy(int j) const { return (j == 0 || j == ny_ - 1) ? 0.5 * hy_ : hy_; }

    bool is_boundary_x(int i) const { return i == 0 || i == nx_ - 1; }

    /// True when X >= 8/sqrt(omega_min).
    bool decay_budget_ok(double omega_min) const;

    friend bool operator==(const StripGrid&, const StripGrid&) = default;

private:
    StripGrid(double x_extent, int nx, int ny);

    double x_extent_ = 1.0;
    int nx_ = 3;
    int ny_ = 2;
    double hx_ = 1.0;
    double hy_ = 1.0;
};

/// Real grid function on a StripGrid, stored row-major as values[i*ny + j].
class Field {
public:
    Field() = default;
    explicit Field(const StripGrid& grid);
    Field(const StripGrid& grid, std::vector<double> values);

    template <typename F>
        requires std::invocable<F, double, double>
    static Field from_function(const StripGrid& grid, F&& f) {
        Field out(grid);
        for (int i = 0; i < grid.nx(); ++i) {
            for (int j = 0; j < grid.ny(); ++j) {
                out(i, j) = f(grid.x(i), grid.y(j));
            }
        }
        return out;
    }

    const StripGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

    bool all_finite() const;
    double max_abs() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    /// this += s * other
    Field& axpy(double s, const Field& other);

    void zero_x_boundary();

private:
    void require_same_grid(const Field& other) const;

    StripGrid grid_{};
    std::vector<double> values_{};
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/**
 * Problem parameters of the delta-defect NLS on the strip.
 *
 * L enters only as the transverse kinetic weight 1/L^2 of the rescaled strip.
 */
struct ProblemParams {
    double p = 3.0;
    double gamma = 0.0;
    double omega = 1.0;
    double L = 1.0;
    double m = 1.0;

    double y_weight() const { return 1.0 / (L * L); }
};

/// Spectral floor of -d_xx + gamma*delta: gamma^2/4 for gamma < 0, else 0.
inline double omega_floor(double gamma) { return gamma < 0.0 ? 0.25 * gamma * gamma : 0.0; }

/// Reason the (p, gamma, omega, L) tuple is not admissible for the action problem.
std::optional<std::string> action_violation(const ProblemParams& params);
/// Reason the (p, gamma, L, m) tuple is not admissible for the energy problem.
std::optional<std::string> energy_violation(const ProblemParams& params);

void require_action_admissible(const ProblemParams& params);
void require_energy_admissible(const ProblemParams& params);

// Discrete operators -------------------------------------------------------

/// Centered second difference in x at interior columns; boundary columns hold
/// the Dirichlet data and map to 0.
Field laplacian_x(const Field& u);

/// Centered second difference in y with mirrored ghost points at y = 0, 1.
Field laplacian_y_neumann(const Field& u);

/// Transverse trapezoid rule of |u(0, y)|^2 on the x = 0 grid line.
double trace_sq(const Field& u);

/// 2D trapezoid rule of integrand(u(x, y)).
template <typename F>
    requires std::invocable<F, double>
double quadrature(const Field& u, F&& integrand) {
    const StripGrid& g = u.grid();
    double total = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        double row = 0.0;
        for (int j = 0; j < g.ny(); ++j) {
            row += g.wy(j) * integrand(u(i, j));
        }
        total += g.wx(i) * row;
    }
    return total;
}

/// Quadrature inner product <a, b>.
double inner(const Field& a, const Field& b);
/// Quadrature-weighted L2 norm.
double norm_l2(const Field& u);
double mass(const Field& u);

/// Discrete ||d_x u||^2: forward differences on every x cell, trapezoid in y.
double kinetic_x(const Field& u);
/// Discrete ||d_y u||^2: forward differences on every y cell, trapezoid in x.
double kinetic_y(const Field& u);

/// Mass centroid (1/M) * sum w x u^2.
double centroid_x(const Field& u);

}  // namespace deltastrip
