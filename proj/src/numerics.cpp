#include "dtn/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace dtn {

double trapezoid(std::span<const double> values, double h) {
    if (values.size() < 2) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * h;
}

std::vector<double> cumulative_trapezoid(std::span<const double> values, double h) {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
    }
    return out;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_floor) {
    if (!(b > a)) return 0.0;
    // First pass with a crude scale estimate, refined once the magnitude is known.
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    double scale = std::max(std::abs(whole), abs_floor);
    double result = adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole,
                                         rel_tol * scale, 48);
    if (std::abs(result) > 4.0 * scale) {
        // Initial estimate was far off; redo with the corrected scale.
        scale = std::abs(result);
        result = adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole,
                                      rel_tol * scale, 48);
    }
    return result;
}

template <typename T>
static std::vector<T> centered_derivative_impl(std::span<const T> v, double h) {
    if (v.size() < 3) throw std::invalid_argument("centered_derivative: need >= 3 samples");
    std::vector<T> d(v.size());
    const double inv2h = 1.0 / (2.0 * h);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2h;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) d[i] = (v[i + 1] - v[i - 1]) * inv2h;
    const std::size_t n = v.size() - 1;
    d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) * inv2h;
    return d;
}

std::vector<double> centered_derivative(std::span<const double> values, double h) {
    return centered_derivative_impl(values, h);
}

std::vector<cplx> centered_derivative(std::span<const cplx> values, double h) {
    return centered_derivative_impl(values, h);
}

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares_line: need >= 2 matched samples");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

TridiagonalSolver::TridiagonalSolver(std::span<const cplx> sub, std::span<const cplx> diag,
                                     std::span<const cplx> sup)
    : sub_(sub.begin(), sub.end()), sup_(sup.begin(), sup.end()) {
    if (diag.size() != sub.size() || diag.size() != sup.size() || diag.empty()) {
        throw std::invalid_argument("TridiagonalSolver: band size mismatch");
    }
    factor_.resize(diag.size());
    // Forward elimination factors; valid because the matrix never produces a
    // zero pivot for the CN systems assembled here.
    cplx d = diag[0];
    factor_[0] = 1.0 / d;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        d = diag[i] - sub_[i] * factor_[i - 1] * sup_[i - 1];
        factor_[i] = 1.0 / d;
    }
}

void TridiagonalSolver::solve(std::span<cplx> rhs) const {
    const std::size_t n = factor_.size();
    if (rhs.size() != n) throw std::invalid_argument("TridiagonalSolver: rhs size mismatch");
    for (std::size_t i = 1; i < n; ++i) {
        rhs[i] -= sub_[i] * factor_[i - 1] * rhs[i - 1];
    }
    rhs[n - 1] *= factor_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - sup_[i] * rhs[i + 1]) * factor_[i];
    }
}

}  // namespace dtn
