#include "slelab/liouville.hpp"

#include <cmath>
#include <numbers>

namespace slelab {
namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [0, 1] by Newton on P_n.
void gauss_legendre(std::size_t n, std::vector<double>& x,
                    std::vector<double>& w)
{
    x.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * t * p1 -
                                   (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) /
                              static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = 0.5 * (1.0 + t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

// bump profile B(s) = exp(-s/(1-s)) on s in [0,1), with B' and B''.
struct bump_profile {
    double b = 0.0, db = 0.0, d2b = 0.0;
};
bump_profile eval_bump(double s)
{
    bump_profile r;
    if (s >= 1.0 || s < 0.0) return r;
    const double m = 1.0 - s;
    r.b = std::exp(-s / m);
    r.db = -r.b / (m * m);
    r.d2b = r.b / (m * m * m * m) - 2.0 * r.b / (m * m * m);
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Metric builders
// ---------------------------------------------------------------------------

conformal_metric metric_flat(double a)
{
    conformal_metric g;
    const double phi0 = 2.0 * std::log(a);
    g.phi = [phi0](cplx) { return phi0; };
    g.grad = [](cplx) { return cplx{}; };
    g.lap = [](cplx) { return 0.0; };
    return g;
}

conformal_metric metric_power(const coord_map& w, int k)
{
    conformal_metric g;
    g.phi = [w, k](cplx z) {
        double v = 2.0 * std::log(std::abs(w.d1(z)));
        if (k != 0) v += 2.0 * k * std::log(std::abs(w.f(z)));
        return v;
    };
    g.grad = [w, k](cplx z) {
        cplx v = w.d2(z) / w.d1(z);
        if (k != 0) v += static_cast<double>(k) * w.d1(z) / w.f(z);
        return v;
    };
    g.lap = [](cplx) { return 0.0; }; // log|holomorphic| is harmonic
    if (k != 0) g.divisor.push_back({cplx{}, k});
    return g;
}

conformal_metric metric_round(const mobius_element& m)
{
    const double logdet = std::log(std::abs(m.a * m.d - m.b * m.c));
    conformal_metric g;
    auto nfun = [m](cplx z) {
        const cplx p = m.a * z + m.b;
        const cplx q = m.c * z + m.d;
        return std::norm(p) + std::norm(q);
    };
    g.phi = [m, nfun, logdet](cplx z) {
        return 2.0 * (std::numbers::ln2 + logdet) - 2.0 * std::log(nfun(z));
    };
    g.grad = [m, nfun](cplx z) {
        const cplx p = m.a * z + m.b;
        const cplx q = m.c * z + m.d;
        return -2.0 * (m.a * std::conj(p) + m.c * std::conj(q)) / nfun(z);
    };
    g.lap = [m, nfun](cplx z) {
        const cplx p = m.a * z + m.b;
        const cplx q = m.c * z + m.d;
        const double n = nfun(z);
        const cplx dn = m.a * std::conj(p) + m.c * std::conj(q);
        const double an = std::norm(m.a) + std::norm(m.c);
        return 4.0 * (-2.0 * an / n + 2.0 * std::norm(dn) / (n * n));
    };
    return g;
}

conformal_metric metric_add_bump(const conformal_metric& base, cplx center,
                                 double rho, double amp)
{
    conformal_metric g = base;
    const double r2 = rho * rho;
    g.phi = [base, center, r2, amp](cplx z) {
        const double s = std::norm(z - center) / r2;
        return base.phi(z) + amp * eval_bump(s).b;
    };
    g.grad = [base, center, r2, amp](cplx z) {
        const double s = std::norm(z - center) / r2;
        return base.grad(z) + amp * eval_bump(s).db * std::conj(z - center) / r2;
    };
    g.lap = [base, center, r2, amp](cplx z) {
        const double s = std::norm(z - center) / r2;
        const bump_profile b = eval_bump(s);
        return base.lap(z) + 4.0 * amp * (b.d2b * s + b.db) / r2;
    };
    return g;
}

smooth_field bump_field(cplx center, double rho, double amp)
{
    smooth_field f;
    const double r2 = rho * rho;
    f.value = [center, r2, amp](cplx z) {
        return amp * eval_bump(std::norm(z - center) / r2).b;
    };
    f.grad = [center, r2, amp](cplx z) {
        const double s = std::norm(z - center) / r2;
        return amp * eval_bump(s).db * std::conj(z - center) / r2;
    };
    f.lap = [center, r2, amp](cplx z) {
        const double s = std::norm(z - center) / r2;
        const bump_profile b = eval_bump(s);
        return 4.0 * amp * (b.d2b * s + b.db) / r2;
    };
    return f;
}

smooth_field sum(const smooth_field& a, const smooth_field& b)
{
    smooth_field f;
    f.value = [a, b](cplx z) { return a.value(z) + b.value(z); };
    f.grad = [a, b](cplx z) { return a.grad(z) + b.grad(z); };
    f.lap = [a, b](cplx z) { return a.lap(z) + b.lap(z); };
    return f;
}

conformal_metric metric_weyl(const conformal_metric& g, const smooth_field& s)
{
    conformal_metric r = g;
    r.phi = [g, s](cplx z) { return g.phi(z) + 2.0 * s.value(z); };
    r.grad = [g, s](cplx z) { return g.grad(z) + 2.0 * s.grad(z); };
    r.lap = [g, s](cplx z) { return g.lap(z) + 2.0 * s.lap(z); };
    return r;
}

// ---------------------------------------------------------------------------
// Planar quadrature
// ---------------------------------------------------------------------------

double liouville_action(const conformal_metric& g1, const conformal_metric& g2,
                        const grid_spec& grid)
{
    // support check along the rectangle boundary
    const std::size_t n_edge = 64;
    for (std::size_t i = 0; i <= n_edge; ++i) {
        const double fx = static_cast<double>(i) / n_edge;
        const double x = grid.x0 + fx * (grid.x1 - grid.x0);
        const double y = grid.y0 + fx * (grid.y1 - grid.y0);
        const cplx pts[4] = {{x, grid.y0}, {x, grid.y1}, {grid.x0, y}, {grid.x1, y}};
        for (const cplx& p : pts)
            if (std::abs(g1.phi(p) - g2.phi(p)) > 1e-12)
                throw support_error(
                    "liouville_action: phi1 - phi2 not supported inside the grid");
    }

    const double hx = (grid.x1 - grid.x0) / static_cast<double>(grid.nx);
    const double hy = (grid.y1 - grid.y0) / static_cast<double>(grid.ny);
    double acc = 0.0;
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y0 + (iy + 0.5) * hy;
        double row = 0.0;
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const cplx z{grid.x0 + (ix + 0.5) * hx, y};
            const double diff = g1.phi(z) - g2.phi(z);
            if (diff == 0.0) continue;
            row += diff * (g1.lap(z) + g2.lap(z));
        }
        acc += row;
    }
    return -acc * hx * hy / (96.0 * kPi);
}

double classical_action(const smooth_field& sigma, const conformal_metric& g,
                        const grid_spec& grid)
{
    const double hx = (grid.x1 - grid.x0) / static_cast<double>(grid.nx);
    const double hy = (grid.y1 - grid.y0) / static_cast<double>(grid.ny);
    double acc = 0.0;
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y0 + (iy + 0.5) * hy;
        double row = 0.0;
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const cplx z{grid.x0 + (ix + 0.5) * hx, y};
            const double s = sigma.value(z);
            const double grad2 = 4.0 * std::norm(sigma.grad(z));
            // |grad sigma|_g^2 dArea_g = |grad sigma|^2 dxdy,
            // R_g dArea_g = -(1/2) lap(phi) dxdy
            row += 0.5 * grad2 - 0.5 * s * g.lap(z);
        }
        acc += row;
    }
    return acc * hx * hy / (12.0 * kPi);
}

// ---------------------------------------------------------------------------
// Contour integrals
// ---------------------------------------------------------------------------

cplx alpha_contour(const conformal_metric& g1, const conformal_metric& g2,
                   const conformal_metric& g3, const contour_spec& contour)
{
    for (const conformal_metric* g : {&g1, &g2, &g3})
        for (const auto& pole : g->divisor) {
            const double d = std::abs(pole.p - contour.center);
            if (std::abs(d - contour.radius) < 1e-9 * contour.radius)
                throw pole_on_contour("alpha_contour: metric pole on the contour");
        }

    const std::size_t n = contour.n_nodes;
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * static_cast<double>(j) / n;
        const cplx z = contour.center +
                       contour.radius * std::exp(cplx{0.0, th});
        const cplx zdot = cplx{0.0, 1.0} * (z - contour.center);
        const double p1 = g1.phi(z), p2 = g2.phi(z), p3 = g3.phi(z);
        // (d - dbar) phi pulled back: 2i Im(phi_z zdot) per dtheta
        const cplx d1 = 2.0 * cplx{0.0, 1.0} * std::imag(g1.grad(z) * zdot);
        const cplx d2 = 2.0 * cplx{0.0, 1.0} * std::imag(g2.grad(z) * zdot);
        const cplx d3 = 2.0 * cplx{0.0, 1.0} * std::imag(g3.grad(z) * zdot);
        const cplx v = -0.5 * ((p1 * d2 - p2 * d1) + (p2 * d3 - p3 * d2) +
                               (p3 * d1 - p1 * d3));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw pole_on_contour("alpha_contour: non-finite integrand");
        acc += v;
    }
    return acc * (2.0 * kPi / static_cast<double>(n));
}

double residue_lemma32_check(int k, const coord_map& z1, const coord_map& z2,
                             const coord_map& w, const contour_spec& contour)
{
    const cplx d1 = z1.d1(contour.center);
    const cplx d2 = z2.d1(contour.center);
    if (std::abs(d1 - d2) > 1e-12 * std::max(1.0, std::abs(d1)))
        throw precondition_error(
            "residue_lemma32_check: dz1/dz2 must equal 1 at the center");
    const conformal_metric g1 = metric_power(z1, k);
    const conformal_metric g2 = metric_power(z2, k);
    const conformal_metric g3 = metric_power(w, 0);
    // poles sit at the contour center, not on the circle
    return std::abs(alpha_contour(g1, g2, g3, contour));
}

// ---------------------------------------------------------------------------
// Four-sphere ratio
// ---------------------------------------------------------------------------

double four_sphere_ratio_residue(const sphere_param& z11,
                                 const sphere_param& z12,
                                 const sphere_param& z21,
                                 const sphere_param& z22,
                                 const contour_spec& contour)
{
    const std::size_t n = contour.n_nodes;
    cplx acc{};
    double phase = 0.0;
    double prev_arg = 0.0;
    double first_unwrapped = 0.0;
    double last_unwrapped = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * static_cast<double>(j) / n;
        const cplx u = contour.center + contour.radius * std::exp(cplx{0.0, th});
        const cplx udot = cplx{0.0, 1.0} * (u - contour.center);

        const cplx ratio = z11.d1(u) / z22.d1(u);
        const double a = std::arg(ratio);
        if (j == 0) {
            prev_arg = a;
            first_unwrapped = a;
            phase = a;
        } else {
            double da = a - prev_arg;
            while (da > kPi) da -= 2.0 * kPi;
            while (da < -kPi) da += 2.0 * kPi;
            if (std::abs(da) > 0.5 * kPi)
                throw branch_error(
                    "four_sphere_ratio_residue: log ratio phase jump > pi/2 "
                    "between nodes; refine the contour");
            phase += da;
            prev_arg = a;
        }
        last_unwrapped = phase;
        const cplx logratio{std::log(std::abs(ratio)), phase};

        const cplx dlog =
            (z12.d2(u) / z12.d1(u) - z21.d2(u) / z21.d1(u)) * udot;
        acc += logratio * dlog;
    }
    // closing the loop must not wind
    {
        const cplx u = contour.center + contour.radius;
        const double a0 = std::arg(z11.d1(u) / z22.d1(u));
        double da = a0 - prev_arg;
        while (da > kPi) da -= 2.0 * kPi;
        while (da < -kPi) da += 2.0 * kPi;
        if (std::abs(last_unwrapped + da - first_unwrapped) > kPi)
            throw branch_error(
                "four_sphere_ratio_residue: log ratio winds around 0 along L");
    }
    const cplx integral = acc * (2.0 * kPi / static_cast<double>(n));
    // Lemma 3.4 orientation: L is the inner boundary of the cylinder with
    // the induced (clockwise) orientation; nodes above run anticlockwise.
    return std::imag(integral) / (24.0 * kPi);
}

chart_metric chart_metric_round(const mobius_element& m)
{
    chart_metric c;
    c.in_u = metric_round(m);
    // v = 1/u: M(1/v) = (a + b v)/(c + d v)
    c.in_v = metric_round(mobius_element{m.b, m.a, m.d, m.c});
    return c;
}

namespace {

// integral of (phi_a - phi_b)(lap_a + lap_b) over the disc |x| <= R
double disc_pair_integral(const conformal_metric& ga,
                          const conformal_metric& gb, double R,
                          std::size_t nr, std::size_t nt)
{
    std::vector<double> xs, ws;
    gauss_legendre(nr, xs, ws);
    double acc = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        const double r = R * xs[i];
        double ring = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            const double th = 2.0 * kPi * static_cast<double>(j) / nt;
            const cplx z = r * std::exp(cplx{0.0, th});
            ring += (ga.phi(z) - gb.phi(z)) * (ga.lap(z) + gb.lap(z));
        }
        acc += ws[i] * R * r * ring * (2.0 * kPi / static_cast<double>(nt));
    }
    return acc;
}

} // namespace

double four_sphere_ratio_general(const chart_metric& g11,
                                 const chart_metric& g12,
                                 const chart_metric& g21,
                                 const chart_metric& g22,
                                 const four_sphere_regions& regions)
{
    const double rl = regions.r_left;
    const std::size_t nr = regions.radial_nodes;
    const std::size_t nt = regions.angular_nodes;

    // left caps in the u-chart, cylinder + right caps in the v-chart
    double area = 0.0;
    area += disc_pair_integral(g11.in_u, g12.in_u, rl, nr, nt);
    area += disc_pair_integral(g22.in_u, g21.in_u, rl, nr, nt);
    area += disc_pair_integral(g11.in_v, g21.in_v, 1.0 / rl, nr, nt);
    area += disc_pair_integral(g22.in_v, g12.in_v, 1.0 / rl, nr, nt);
    const double area_term = -area / (96.0 * kPi);

    const contour_spec L{cplx{}, rl, regions.contour_nodes};
    const cplx a1 = alpha_contour(g11.in_u, g12.in_u, g21.in_u, L);
    const cplx a2 = alpha_contour(g22.in_u, g12.in_u, g21.in_u, L);
    // L carries the inner-boundary (clockwise) orientation; alpha_contour
    // integrates anticlockwise, hence the minus sign.
    const double contour_term = -std::imag(a1 - a2) / (48.0 * kPi);

    return area_term + contour_term;
}

// ---------------------------------------------------------------------------
// Schiffer variation
// ---------------------------------------------------------------------------

schiffer_result schiffer_derivative(const std::function<jet3(cplx)>& f_jet,
                                    const contour_spec& contour,
                                    const std::vector<double>& t_values)
{
    // reciprocal-coordinate data 1/x for x = base - t/(2 base)
    struct recip {
        std::function<jet3(cplx)> base;
        double t;
        // value/derivatives of 1/x(z)
        cplx d1(cplx z) const
        {
            const jet3 b = base(z);
            const cplx x = b.f - 0.5 * t / b.f;
            const cplx xp = b.d1 * (1.0 + 0.5 * t / (b.f * b.f));
            return -xp / (x * x);
        }
        cplx d2(cplx z) const
        {
            const jet3 b = base(z);
            const cplx x = b.f - 0.5 * t / b.f;
            const cplx xp = b.d1 * (1.0 + 0.5 * t / (b.f * b.f));
            const cplx xpp = b.d2 * (1.0 + 0.5 * t / (b.f * b.f)) -
                             t * b.d1 * b.d1 / (b.f * b.f * b.f);
            return -xpp / (x * x) + 2.0 * xp * xp / (x * x * x);
        }
    };

    auto id_jet = [](cplx z) { return jet3::identity(z); };

    schiffer_result res;
    res.target = std::real(schwarzian(f_jet(cplx{}))) / 12.0;

    for (double t : t_values) {
        const recip x1{id_jet, 0.0};        // 1/x_1
        const recip x2{f_jet, 0.0};         // 1/x_2
        const recip x1t{id_jet, t};         // 1/x_{1,t}
        const recip x2t{f_jet, t};          // 1/x_{2,t}

        auto wrap = [](const recip& r) {
            sphere_param s;
            s.f = [](cplx) { return cplx{}; }; // unused
            s.d1 = [r](cplx z) { return r.d1(z); };
            s.d2 = [r](cplx z) { return r.d2(z); };
            return s;
        };
        // perturbed collection (S_1, S_2, S_{1,t}, S_{2,t}) carries
        // multiplicities (-1, +1, +1, -1): the opposite pattern to the
        // four-sphere weights, hence the overall minus sign.
        const double v = -four_sphere_ratio_residue(
            wrap(x1), wrap(x2), wrap(x1t), wrap(x2t), contour);
        res.values.push_back(v);
    }

    // slope at t = 0 by Richardson on the smallest pair if possible
    if (t_values.size() >= 2) {
        const double t0 = t_values[t_values.size() - 2];
        const double t1 = t_values.back();
        const double v0 = res.values[res.values.size() - 2];
        const double v1 = res.values.back();
        if (std::abs(2.0 * t1 - t0) < 1e-12 * std::abs(t0)) {
            // t1 = t0/2: eliminate the quadratic term
            res.slope = (4.0 * v1 - v0) / t0;
        } else {
            res.slope = (v1 - v0) / (t1 - t0);
        }
    } else if (t_values.size() == 1) {
        res.slope = res.values[0] / t_values[0];
    }
    return res;
}

} // namespace liouville
} // namespace slelab
