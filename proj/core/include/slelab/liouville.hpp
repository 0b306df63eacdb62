#pragma once

// Liouville-action calculus on closed-form conformal metrics: the bilinear
// action and its cocycle identity, the classical-action bridge, the
// alpha-form contour integrals with their residue identities, the
// four-sphere determinant-line ratio in general-metric and residue forms,
// and the Schiffer-variation derivative.
//
// Conventions (validated by the bridge identity and the residue closed
// form together): with z = x + iy,
//   S_L(g1, g2) = (-1/96 pi) ∬ (phi1 - phi2) Lap(phi1 + phi2) dx dy,
//   R_g = -(1/2) e^{-phi} Lap(phi)  (Gaussian curvature),
//   alpha(g1,g2,g3) = (-1/2) sum_cyc [phi_i D phi_j - phi_j D phi_i],
//       D = (d - dbar), pulled back to contours analytically.
// Contours are anticlockwise circles; quadrature on them is trapezoid
// (spectrally accurate for smooth integrands).

#include <functional>
#include <vector>

#include "slelab/cgeom.hpp"

namespace slelab {
namespace liouville {

// Closed-form log-density phi with analytic z-gradient and Laplacian;
// g = e^phi |dz|^2 in the chart.
struct conformal_metric {
    std::function<double(cplx)> phi;
    std::function<cplx(cplx)> grad; // d phi / d z
    std::function<double(cplx)> lap;

    struct pole {
        cplx p;
        int k;
    };
    std::vector<pole> divisor;
};

// |a dz|^2, a > 0.
conformal_metric metric_flat(double a);

// |w(z)^k dw|^2 for a closed-form coordinate map w with two derivatives.
struct coord_map {
    std::function<cplx(cplx)> f, d1, d2;
};
conformal_metric metric_power(const coord_map& w, int k);

// Pullback of the round sphere metric under a Moebius map of the chart.
conformal_metric metric_round(const mobius_element& m);

// C-infinity bump phi += amp * exp(-s/(1-s)), s = |z-center|^2/rho^2 < 1,
// added to a base metric.
conformal_metric metric_add_bump(const conformal_metric& base, cplx center,
                                 double rho, double amp);

// e^{2 sigma} g for a smooth compactly supported sigma.
struct smooth_field {
    std::function<double(cplx)> value;
    std::function<cplx(cplx)> grad; // d sigma / d z
    std::function<double(cplx)> lap;
};
smooth_field bump_field(cplx center, double rho, double amp);
smooth_field sum(const smooth_field& a, const smooth_field& b);
conformal_metric metric_weyl(const conformal_metric& g, const smooth_field& s);

// Anticlockwise circle with trapezoid nodes.
struct contour_spec {
    cplx center;
    double radius = 1.0;
    std::size_t n_nodes = 256;
};

// Tensor-product midpoint rectangle [x0,x1]x[y0,y1].
struct grid_spec {
    double x0, x1, y0, y1;
    std::size_t nx = 512, ny = 512;
};

// S_L(g1,g2); requires phi1 - phi2 negligible at the grid boundary.
double liouville_action(const conformal_metric& g1, const conformal_metric& g2,
                        const grid_spec& grid);

// (1/12 pi) ∬ (|grad sigma|_g^2 / 2 + R_g sigma) dArea_g.
double classical_action(const smooth_field& sigma, const conformal_metric& g,
                        const grid_spec& grid);

// ∮ alpha(g1,g2,g3) over the circle; purely imaginary for real metrics.
cplx alpha_contour(const conformal_metric& g1, const conformal_metric& g2,
                   const conformal_metric& g3, const contour_spec& contour);

// |∮ alpha(|z1^k dz1|^2, |z2^k dz2|^2, |dw|^2)|; requires z1'(p) = z2'(p)
// at the contour center to 1e-12.
double residue_lemma32_check(int k, const coord_map& z1, const coord_map& z2,
                             const coord_map& w, const contour_spec& contour);

// ---------------------------------------------------------------------------
// Four-sphere ratio
// ---------------------------------------------------------------------------

// Holomorphic parametrization data along a contour; d2 is the second
// derivative of the map.
struct sphere_param {
    std::function<cplx(cplx)> f, d1, d2;
};

// (-1/24 pi) Im ∮_L log(dz11/dz22) d log(dz12/dz21) with continuous-phase
// branch tracking of the log factor; the parametrizations are assumed
// normalized in the sense d(1/z_i1)/d(1/z_i2) = 1 at the poles.
double four_sphere_ratio_residue(const sphere_param& z11,
                                 const sphere_param& z12,
                                 const sphere_param& z21,
                                 const sphere_param& z22,
                                 const contour_spec& contour);

// Metrics of the four glued spheres in both charts: `in_u` covers the left
// discs and the contour, `in_v` (v = 1/u) covers the cylinder and right
// caps including infinity.
struct chart_metric {
    conformal_metric in_u;
    conformal_metric in_v;
};
chart_metric chart_metric_round(const mobius_element& m);

struct four_sphere_regions {
    double r_left = 0.5;            // contour circle |u| = r_left
    std::size_t radial_nodes = 96;  // Gauss-Legendre in r
    std::size_t angular_nodes = 256;
    std::size_t contour_nodes = 512;
};

// Sum of the four region integrals of the Liouville density plus the two
// alpha-contour terms over the left circle (weights +1 -1 -1 +1).
double four_sphere_ratio_general(const chart_metric& g11,
                                 const chart_metric& g12,
                                 const chart_metric& g21,
                                 const chart_metric& g22,
                                 const four_sphere_regions& regions);

// ---------------------------------------------------------------------------
// Schiffer variation
// ---------------------------------------------------------------------------

struct schiffer_result {
    double slope = 0.0;  // fitted d/dt at t = 0 of the four-sphere ratio
    double target = 0.0; // (1/12) Re S_f(0)
    std::vector<double> values; // ratio at each t
};

// Perturbs the parametrizations x -> x - t/(2x) of the pair (id, f) and
// differentiates the residue-form ratio at t = 0. f must be univalent near
// 0 with f(0) = 0, f'(0) = 1; f_jet supplies value and three derivatives.
schiffer_result schiffer_derivative(const std::function<jet3(cplx)>& f_jet,
                                    const contour_spec& contour,
                                    const std::vector<double>& t_values);

} // namespace liouville
} // namespace slelab
