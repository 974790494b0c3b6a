#include "deltastrip/strip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace deltastrip {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InadmissibleParams: return "inadmissible_params";
        case ErrorKind::InvalidGrid: return "invalid_grid";
        case ErrorKind::ZeroField: return "zero_field";
        case ErrorKind::ProjectionUndefined: return "projection_undefined";
        case ErrorKind::BranchAmbiguity: return "branch_ambiguity";
        case ErrorKind::BracketNotFound: return "bracket_not_found";
        case ErrorKind::ConsistencyError: return "consistency_error";
        case ErrorKind::StepFailure: return "step_failure";
        case ErrorKind::OnDiagonal: return "on_diagonal";
        case ErrorKind::SingularFormula: return "singular_formula";
        case ErrorKind::ParseError: return "parse_error";
        case ErrorKind::ValidationError: return "validation_error";
        case ErrorKind::IoError: return "io_error";
    }
    return "unknown";
}

// StripGrid -----------------------------------------------------------------

StripGrid::StripGrid(double x_extent, int nx, int ny)
    : x_extent_(x_extent),
      nx_(nx),
      ny_(ny),
      hx_(2.0 * x_extent / (nx - 1)),
      hy_(1.0 / (ny - 1)) {}

StripGrid StripGrid::make(double x_extent, int nx, int ny) {
    if (!(x_extent > 0.0) || !std::isfinite(x_extent)) {
        throw Error(ErrorKind::InvalidGrid, "x_extent must be a positive finite length");
    }
    if (nx < 3 || nx % 2 == 0) {
        throw Error(ErrorKind::InvalidGrid, "nx must be an odd integer >= 3 so that x = 0 is a grid line");
    }
    if (ny < 2) {
        throw Error(ErrorKind::InvalidGrid, "ny must be >= 2");
    }
    return StripGrid(x_extent, nx, ny);
}

double StripGrid::default_extent(double omega, double gamma) {
    const double gap = omega - omega_floor(gamma);
    if (!(gap > 0.0)) {
        return 16.0;
    }
    return std::max(16.0, 10.0 / std::sqrt(gap));
}

bool StripGrid::decay_budget_ok(double omega_min) const {
    return omega_min > 0.0 && x_extent_ >= 8.0 / std::sqrt(omega_min);
}

// Field ---------------------------------------------------------------------

Field::Field(const StripGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(const StripGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw Error(ErrorKind::InvalidGrid, "field payload size does not match nx*ny");
    }
    if (!all_finite()) {
        throw Error(ErrorKind::InvalidGrid, "field contains non-finite values");
    }
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void Field::require_same_grid(const Field& other) const {
    if (!(grid_ == other.grid_)) {
        throw Error(ErrorKind::InvalidGrid, "fields live on different grids");
    }
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field& Field::axpy(double s, const Field& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * other.values_[k];
    return *this;
}

void Field::zero_x_boundary() {
    for (int j = 0; j < grid_.ny(); ++j) {
        (*this)(0, j) = 0.0;
        (*this)(grid_.nx() - 1, j) = 0.0;
    }
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

// Admissibility --------------------------------------------------------------

namespace {

std::optional<std::string> common_violation(const ProblemParams& params) {
    if (!std::isfinite(params.p) || !(params.p > 1.0)) {
        return "p must satisfy p > 1";
    }
    if (!std::isfinite(params.gamma)) {
        return "gamma must be finite";
    }
    if (!std::isfinite(params.L) || !(params.L > 0.0)) {
        return "L must be a positive width";
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> action_violation(const ProblemParams& params) {
    if (auto v = common_violation(params)) return v;
    if (!std::isfinite(params.omega)) return "omega must be finite";
    if (params.gamma < 0.0 && !(params.omega > 0.25 * params.gamma * params.gamma)) {
        std::ostringstream os;
        os << "omega <= gamma^2/4 with gamma<0 (omega=" << params.omega << ", gamma^2/4="
           << 0.25 * params.gamma * params.gamma << ")";
        return os.str();
    }
    if (params.gamma >= 0.0 && !(params.omega > 0.0)) {
        return "omega <= 0 with gamma>=0";
    }
    return std::nullopt;
}

std::optional<std::string> energy_violation(const ProblemParams& params) {
    if (auto v = common_violation(params)) return v;
    if (!(params.p < 3.0)) {
        return "energy minimization requires 1<p<3";
    }
    if (!std::isfinite(params.m) || !(params.m > 0.0)) {
        return "mass m must be positive";
    }
    return std::nullopt;
}

void require_action_admissible(const ProblemParams& params) {
    if (auto v = action_violation(params)) throw Error(ErrorKind::InadmissibleParams, *v);
}

void require_energy_admissible(const ProblemParams& params) {
    if (auto v = energy_violation(params)) throw Error(ErrorKind::InadmissibleParams, *v);
}

// Operators -------------------------------------------------------------------

Field laplacian_x(const Field& u) {
    const StripGrid& g = u.grid();
    Field out(g);
    const double inv_h2 = 1.0 / (g.hx() * g.hx());
    for (int i = 1; i < g.nx() - 1; ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            out(i, j) = (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) * inv_h2;
        }
    }
    return out;
}

Field laplacian_y_neumann(const Field& u) {
    const StripGrid& g = u.grid();
    Field out(g);
    const double inv_h2 = 1.0 / (g.hy() * g.hy());
    const int last = g.ny() - 1;
    for (int i = 0; i < g.nx(); ++i) {
        out(i, 0) = 2.0 * (u(i, 1) - u(i, 0)) * inv_h2;
        for (int j = 1; j < last; ++j) {
            out(i, j) = (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) * inv_h2;
        }
        out(i, last) = 2.0 * (u(i, last - 1) - u(i, last)) * inv_h2;
    }
    return out;
}

double trace_sq(const Field& u) {
    const StripGrid& g = u.grid();
    const int c = g.center();
    double t = 0.0;
    for (int j = 0; j < g.ny(); ++j) t += g.wy(j) * u(c, j) * u(c, j);
    return t;
}

double inner(const Field& a, const Field& b) {
    const StripGrid& g = a.grid();
    if (!(g == b.grid())) throw Error(ErrorKind::InvalidGrid, "fields live on different grids");
    double total = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        double row = 0.0;
        for (int j = 0; j < g.ny(); ++j) row += g.wy(j) * a(i, j) * b(i, j);
        total += g.wx(i) * row;
    }
    return total;
}

double norm_l2(const Field& u) { return std::sqrt(inner(u, u)); }

double mass(const Field& u) { return inner(u, u); }

double kinetic_x(const Field& u) {
    const StripGrid& g = u.grid();
    double total = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        double col = 0.0;
        for (int i = 0; i + 1 < g.nx(); ++i) {
            const double d = u(i + 1, j) - u(i, j);
            col += d * d;
        }
        total += g.wy(j) * col;
    }
    return total / g.hx();
}

double kinetic_y(const Field& u) {
    const StripGrid& g = u.grid();
    double total = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        double row = 0.0;
        for (int j = 0; j + 1 < g.ny(); ++j) {
            const double d = u(i, j + 1) - u(i, j);
            row += d * d;
        }
        total += g.wx(i) * row;
    }
    return total / g.hy();
}

double centroid_x(const Field& u) {
    const StripGrid& g = u.grid();
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        double row = 0.0;
        for (int j = 0; j < g.ny(); ++j) row += g.wy(j) * u(i, j) * u(i, j);
        num += g.wx(i) * g.x(i) * row;
        den += g.wx(i) * row;
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace deltastrip
