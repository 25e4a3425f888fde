#include "dtn/grid.hpp"

#include <limits>

#include "test_util.hpp"

using namespace dtn;
using namespace testutil;

static void test_make_grid() {
    const GridSpec g = make_grid(40.0, 800, 0.005, 100.0, 0.25, 50.0);
    check_near("make_grid: dx = L/nx", g.dx(), 0.05, 1e-15);
    record("make_grid: steps = T/dt", g.steps() == 20000,
           "(steps=" + std::to_string(g.steps()) + ")");
    check_near("make_grid: sponge starts at (1-f)L", g.sponge_start(), 30.0, 1e-12);

    check_throws("make_grid: rejects L <= 0",
                 [] { make_grid(-1.0, 800, 0.005, 100.0, 0.25, 50.0); }, "nonpositive domain");
    check_throws("make_grid: rejects nx < 16",
                 [] { make_grid(40.0, 8, 0.005, 100.0, 0.25, 50.0); }, "mesh too coarse");
    check_throws("make_grid: rejects dt <= 0",
                 [] { make_grid(40.0, 800, 0.0, 100.0, 0.25, 50.0); }, "time step");
    check_throws("make_grid: rejects sponge_fraction >= 0.5",
                 [] { make_grid(40.0, 800, 0.005, 100.0, 0.5, 50.0); }, "sponge_fraction");
    check_throws("make_grid: rejects negative sponge strength",
                 [] { make_grid(40.0, 800, 0.005, 100.0, 0.25, -1.0); }, "sponge");
}

static void test_sponge_profile() {
    const GridSpec g = make_grid(40.0, 800, 0.005, 100.0, 0.25, 50.0);
    check_near("sponge: zero at x = 0", g.sponge_profile(0.0), 0.0, 0.0);
    check_near("sponge: zero at layer interface", g.sponge_profile(30.0), 0.0, 0.0);
    check_near("sponge: sigma_max at x = L", g.sponge_profile(40.0), 50.0, 1e-12);
    // cubic ramp at the layer midpoint: ((x-x0)/(L-x0))^3 sigma_max = sigma_max/8
    check_near("sponge: sigma_max/8 at layer midpoint", g.sponge_profile(35.0), 50.0 / 8.0,
               1e-12);

    // continuity and monotonicity along the nodes
    const auto sigma = g.sponge_samples();
    bool monotone = true;
    for (std::size_t j = 1; j < sigma.size(); ++j) {
        if (sigma[j] < sigma[j - 1]) monotone = false;
    }
    record("sponge: nondecreasing on [0, L]", monotone);

    const GridSpec flat = make_grid(40.0, 800, 0.005, 100.0, 0.0, 0.0);
    check_near("sponge: off when fraction = 0", flat.sponge_profile(40.0), 0.0, 0.0);
}

static void test_quadrature() {
    const GridSpec g = make_grid(40.0, 800, 0.005, 100.0, 0.25, 50.0);
    const auto w = g.quadrature_weights();
    double total = 0.0;
    for (double wi : w) total += wi;
    // machine precision for an (nx+1)-term accumulation is ~ n * eps
    check_rel("trapezoid weights reproduce integral of 1 = L", total, 40.0,
              801 * std::numeric_limits<double>::epsilon());

    check_near("node coordinates are j*dx", g.node(17), 17 * 0.05, 1e-15);
}

static void test_field() {
    ComplexField f(5, 0.0);
    record("fresh field is finite", f.all_finite());
    f.values[3] = cplx{std::nan(""), 0.0};
    record("nan detected", !f.all_finite());

    check_throws("lambda outside {-1,0,1} rejected", [] { nonlinearity_from_int(2); });
    record("lambda_of round trip",
           lambda_of(nonlinearity_from_int(-1)) == -1.0 &&
               lambda_of(nonlinearity_from_int(0)) == 0.0 &&
               lambda_of(nonlinearity_from_int(1)) == 1.0);
}

int main() {
    test_make_grid();
    test_sponge_profile();
    test_quadrature();
    test_field();
    return summary("test_grid");
}
