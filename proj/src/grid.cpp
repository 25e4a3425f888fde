#include "dtn/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dtn {

Nonlinearity nonlinearity_from_int(int lambda) {
    switch (lambda) {
        case -1: return Nonlinearity::Focusing;
        case 0: return Nonlinearity::Linear;
        case 1: return Nonlinearity::Defocusing;
        default: throw std::invalid_argument("lambda must be one of {-1, 0, +1}");
    }
}

GridSpec::GridSpec(double L, int nx, double dt, double T, double sponge_fraction,
                   double sponge_strength)
    : length_(L),
      nx_(nx),
      dt_(dt),
      horizon_(T),
      sponge_fraction_(sponge_fraction),
      sponge_strength_(sponge_strength) {
    if (!(L > 0.0)) throw std::invalid_argument("nonpositive domain");
    if (nx < 16) throw std::invalid_argument("mesh too coarse (nx < 16)");
    if (!(dt > 0.0)) throw std::invalid_argument("nonpositive time step");
    if (!(T >= dt)) throw std::invalid_argument("horizon shorter than one step");
    if (!(sponge_fraction >= 0.0 && sponge_fraction < 0.5)) {
        throw std::invalid_argument("sponge_fraction outside [0, 0.5)");
    }
    if (!(sponge_strength >= 0.0)) throw std::invalid_argument("negative sponge strength");
    dx_ = L / static_cast<double>(nx);
    sponge_start_ = (1.0 - sponge_fraction) * L;
    steps_ = static_cast<int>(std::llround(T / dt));
    if (steps_ < 1) steps_ = 1;
}

double GridSpec::sponge_profile(double x) const {
    if (x < 0.0 || x > length_ * (1.0 + 1e-12)) {
        throw std::invalid_argument("sponge_profile: x outside [0, L]");
    }
    if (sponge_fraction_ == 0.0 || x <= sponge_start_) return 0.0;
    const double r = (x - sponge_start_) / (length_ - sponge_start_);
    return sponge_strength_ * r * r * r;
}

std::vector<double> GridSpec::quadrature_weights() const {
    std::vector<double> w(static_cast<std::size_t>(nx_) + 1, dx_);
    w.front() = 0.5 * dx_;
    w.back() = 0.5 * dx_;
    return w;
}

std::vector<double> GridSpec::sponge_samples() const {
    std::vector<double> s(static_cast<std::size_t>(nx_) + 1);
    for (int j = 0; j <= nx_; ++j) s[static_cast<std::size_t>(j)] = sponge_profile(node(j));
    return s;
}

GridSpec make_grid(double L, int nx, double dt, double T, double sponge_fraction,
                   double sponge_strength) {
    return GridSpec(L, nx, dt, T, sponge_fraction, sponge_strength);
}

bool ComplexField::all_finite() const {
    for (const cplx& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

}  // namespace dtn
