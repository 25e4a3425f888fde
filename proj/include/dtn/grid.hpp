#pragma once

#include <complex>
#include <vector>

#include "dtn/numerics.hpp"

namespace dtn {

/// Sign of the cubic nonlinearity: +1 defocusing, -1 focusing, 0 linear
/// (the linear mode exists only for validation runs).
enum class Nonlinearity : int { Focusing = -1, Linear = 0, Defocusing = 1 };

inline double lambda_of(Nonlinearity nl) { return static_cast<double>(static_cast<int>(nl)); }

Nonlinearity nonlinearity_from_int(int lambda);

/// Uniform truncation of the half-line: nodes x_j = j*dx, j = 0..nx, dx = L/nx,
/// plus time step, horizon, and the absorbing-layer shape near x = L.
class GridSpec {
public:
    GridSpec(double L, int nx, double dt, double T, double sponge_fraction,
             double sponge_strength);

    double length() const { return length_; }
    int intervals() const { return nx_; }
    int nodes() const { return nx_ + 1; }
    double dx() const { return dx_; }
    double dt() const { return dt_; }
    double horizon() const { return horizon_; }
    double sponge_fraction() const { return sponge_fraction_; }
    double sponge_strength() const { return sponge_strength_; }
    /// Left edge of the absorbing layer, (1 - sponge_fraction) * L.
    double sponge_start() const { return sponge_start_; }

    double node(int j) const { return static_cast<double>(j) * dx_; }

    /// Damping coefficient: zero up to sponge_start, then a cubic ramp reaching
    /// sponge_strength at x = L.
    double sponge_profile(double x) const;

    /// Composite trapezoid weights over the nodes (reproduce integral of 1 = L).
    std::vector<double> quadrature_weights() const;

    /// sponge_profile sampled at every node.
    std::vector<double> sponge_samples() const;

    int steps() const { return steps_; }

private:
    double length_;
    int nx_;
    double dx_;
    double dt_;
    double horizon_;
    double sponge_fraction_;
    double sponge_strength_;
    double sponge_start_;
    int steps_;
};

GridSpec make_grid(double L, int nx, double dt, double T, double sponge_fraction,
                   double sponge_strength);

/// Discrete complex field q(.,t) at the grid nodes at one time level.
struct ComplexField {
    std::vector<cplx> values;
    double time_tag = 0.0;

    ComplexField() = default;
    ComplexField(std::size_t nodes, double t) : values(nodes, cplx{0.0, 0.0}), time_tag(t) {}

    bool all_finite() const;
};

}  // namespace dtn
