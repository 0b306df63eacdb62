#pragma once

// Coordinates on single-winding loops around 0: power-series coefficients
// of the Riemann maps of the two sides (the bounded side directly, the
// unbounded side after the inversion z -> 1/z), the AB <= 1 invariant,
// coefficient bounds, and the Schwarzian-derived functions P_{+-2}.
//
// Closed-form loops (circles, analytic boundary series) are handled by
// series composition and reversion; polyline loops by a zipper-style
// numerical Riemann map: an opening sqrt sends a boundary base point to
// infinity, the remaining boundary is unzipped with vertical slits in the
// half-plane, and the local Taylor expansion at 0 is pushed through the
// pipeline as a truncated series.

#include <variant>
#include <vector>

#include "slelab/power_series.hpp"

namespace slelab {
namespace loopspace {

struct circle_loop {
    double r = 1.0;
};

// Boundary parametrized by a Laurent series z(zeta) = sum c_k zeta^k on
// |zeta| = 1. `interior_series`: coefficients c_0..c_K of a map univalent
// on the closed unit disk with c_0 = 0 (bounded side closed form);
// `exterior_series`: coefficients e_1, e_0, e_-1, ... of a map univalent
// outside the unit disk, z(zeta) = e_1 zeta + e_0 + e_-1/zeta + ...
// Either may be empty; the missing side goes through the polyline route.
struct analytic_loop {
    std::vector<cplx> interior_series;
    std::vector<cplx> exterior_series;
    std::size_t samples = 512; // polyline resolution for the missing side
};

struct polyline_loop {
    std::vector<cplx> points; // closed, winds once around 0
};

using loop_curve = std::variant<circle_loop, analytic_loop, polyline_loop>;

enum class loop_side { left, right }; // bounded side / inverted unbounded side

// phi(t) = A(t + a1 t^2 + ...): series.c[0] = 0, c[1] = A > 0 real.
struct disk_map_series {
    power_series phi;
    double lead = 0.0;             // A or B
    std::vector<cplx> coeffs;      // a_1..a_K (normalized by the lead)
};

struct loop_coords {
    double A = 0.0;
    std::vector<cplx> a;
    double B = 0.0;
    std::vector<cplx> b;
    std::size_t K = 8;
};

struct neretin_values {
    double p_minus2 = 0.0, p_minus2_prime = 0.0;
    double p_plus2 = 0.0, p_plus2_prime = 0.0;
};

// Riemann map power-series of the requested side, to order K.
// Throws not-univalent style errors via precondition_error when the
// coefficient bounds are violated grossly.
disk_map_series disk_map(const loop_curve& loop, loop_side side,
                         std::size_t K = 8);

loop_coords coords(const loop_curve& loop, std::size_t K = 8);

// P_{-2} = (1/12) Re S_{phi_L}(0) etc., from series coefficients:
// S(0) = 6 (a2 - a1^2).
neretin_values neretin_p2(const loop_curve& loop);

// Interior Riemann map of a Jordan polyline around 0 as a truncated Taylor
// series at 0 with phi(0) = 0, phi'(0) > 0 (zipper + series push).
power_series polyline_interior_map(const std::vector<cplx>& points,
                                   std::size_t K);

} // namespace loopspace
} // namespace slelab
