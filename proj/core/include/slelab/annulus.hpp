#pragma once

// Conformal modulus of doubly connected domains: 5-point finite differences
// with Shortley-Weller boundary treatment, Dirichlet energy through the
// discrete flux (cut-independent for the discrete solution), modulus
// t = exp(-2 pi / E) in (0, 1). A periodic-strip variant in logarithmic
// coordinates handles plumbing-degeneration cylinders whose radii span
// orders of magnitude, and a walk-on-spheres estimator cross-checks the
// grid solution pointwise.

#include <cstdint>
#include <functional>
#include <vector>

#include "slelab/cgeom.hpp"

namespace slelab {
namespace annulus {

// Closed Jordan polylines (implicitly closed, last joins first); inner must
// lie strictly inside outer.
struct annular_domain {
    std::vector<cplx> outer;
    std::vector<cplx> inner;
};

struct harmonic_solution {
    double x0 = 0.0, y0 = 0.0, hx = 0.0, hy = 0.0;
    std::size_t nx = 0, ny = 0;
    std::vector<double> h;         // node values; boundary values filled in
    std::vector<std::uint8_t> in;  // 1 = interior unknown
    double energy = 0.0;
    double modulus = 0.0;

    double value_at(cplx z) const;  // bilinear interpolation
    double metric_at(cplx z) const; // |2 dh/dz|^2 by centered differences
};

// Solve h = 1 on inner, h = 0 on outer at grid pitch ~ diameter/n.
harmonic_solution solve(const annular_domain& dom, std::size_t n);
harmonic_solution solve_warm(const annular_domain& dom, std::size_t n,
                             const harmonic_solution* warm);

// Modulus with grid refinement until the change drops below tol.
double modulus(const annular_domain& dom, double tol = 1e-4,
               std::size_t n_start = 96);

// |2 dh/dz|^2; throws boundary_proximity within 2 cells of a boundary.
double normalized_metric(const harmonic_solution& sol, cplx z);

// Modulus of the cylinder {(x, y): x periodic in [0, 2pi), y_bot(x) < y <
// y_top(x)} in flat coordinates (log chart of an annulus).
double strip_modulus(const std::function<double(double)>& y_bot,
                     const std::function<double(double)>& y_top,
                     std::size_t ny, std::size_t nx = 0);

// Plumbing z1 z2 = q of two planes: moduli of the cylinder bounded by the
// two unit circles (h_in) and by the radius-R1 / radius-R2 curves (h_out),
// with optional radial perturbation profiles of the outer boundaries.
struct degeneration_row {
    double q = 0.0;
    double h_in = 0.0;
    double h_out = 0.0;
    double ratio = 0.0;   // h_out / h_in
    double target = 0.0;  // h1 * h2
};

struct degeneration_config {
    double r1 = 2.0;
    double r2 = 2.0;
    std::vector<double> q_values{1e-2, 3e-3, 1e-3};
    // radial profiles multiply the base radii; identity when empty
    std::function<double(double)> profile1; // r1 * profile1(theta)
    std::function<double(double)> profile2;
    std::size_t ny = 192;
};

std::vector<degeneration_row> degeneration_check(const degeneration_config& cfg);

// Probability that Brownian motion from z0 hits the inner boundary before
// the outer one (equals the harmonic h at z0).
struct wos_result {
    double p = 0.0;
    double stderr_ = 0.0;
};
wos_result wos_hitting_probability(const annular_domain& dom, cplx z0,
                                   std::size_t n_walks, std::uint64_t seed);

} // namespace annulus
} // namespace slelab
