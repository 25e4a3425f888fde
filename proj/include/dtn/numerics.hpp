#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace dtn {

using cplx = std::complex<double>;

/// Composite trapezoid rule over uniformly spaced samples with step h.
double trapezoid(std::span<const double> values, double h);

/// Cumulative trapezoid integral; result[k] = integral over [x0, x0 + k*h].
std::vector<double> cumulative_trapezoid(std::span<const double> values, double h);

/// Adaptive Simpson quadrature of f on [a, b] to the given relative tolerance
/// (with an absolute floor for integrands that vanish).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_floor = 1e-300);

/// Centered first derivative of a uniformly sampled series, second-order
/// one-sided at both endpoints. Needs at least 3 samples.
std::vector<double> centered_derivative(std::span<const double> values, double h);
std::vector<cplx> centered_derivative(std::span<const cplx> values, double h);

/// Ordinary least squares y = a + b*x. Returns {intercept, slope, rms_residual}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms_residual = 0.0;
};
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

/// Solves the complex tridiagonal system with constant bands
///   sub[j-1]*u[j-1] + diag[j]*u[j] + sup[j]*u[j+1] = rhs[j]
/// by the Thomas algorithm. All spans have length n (sub[0] and sup[n-1]
/// unused). The system must be diagonally dominant enough to run without
/// pivoting, which holds for the Crank-Nicolson matrices used here.
class TridiagonalSolver {
public:
    TridiagonalSolver(std::span<const cplx> sub, std::span<const cplx> diag,
                      std::span<const cplx> sup);

    /// Solve in place: rhs enters as right-hand side, leaves as solution.
    void solve(std::span<cplx> rhs) const;

    std::size_t size() const { return factor_.size(); }

private:
    std::vector<cplx> sub_;     // lower band
    std::vector<cplx> sup_;     // upper band
    std::vector<cplx> factor_;  // precomputed 1/modified-diagonal
};

}  // namespace dtn
