#include "slelab/annulus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "slelab/rng.hpp"

namespace slelab {
namespace annulus {

namespace {

constexpr double kPi = std::numbers::pi;

bool point_in_polygon(const std::vector<cplx>& poly, cplx z)
{
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = poly[i].real(), yi = poly[i].imag();
        const double xj = poly[j].real(), yj = poly[j].imag();
        if ((yi > z.imag()) != (yj > z.imag())) {
            const double xc = xi + (z.imag() - yi) / (yj - yi) * (xj - xi);
            if (z.real() < xc) in = !in;
        }
    }
    return in;
}

// first crossing parameter s in (0, 1] of segment a->b with the polyline
double first_crossing(const std::vector<cplx>& poly, cplx a, cplx b)
{
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    const cplx d = b - a;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const cplx p = poly[j];
        const cplx q = poly[i] - poly[j];
        const double det = d.real() * (-q.imag()) - d.imag() * (-q.real());
        if (std::abs(det) < 1e-300) continue;
        const cplx r = p - a;
        const double s = (r.real() * (-q.imag()) - r.imag() * (-q.real())) / det;
        const double u = (d.real() * r.imag() - d.imag() * r.real()) / det;
        if (s > 1e-12 && s <= 1.0 + 1e-12 && u >= -1e-12 && u <= 1.0 + 1e-12)
            best = std::min(best, s);
    }
    return best;
}

double dist_to_polyline(const std::vector<cplx>& poly, cplx z)
{
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const cplx a = poly[j], b = poly[i];
        const cplx ab = b - a;
        const double t = std::clamp(
            ((z - a).real() * ab.real() + (z - a).imag() * ab.imag()) /
                std::max(std::norm(ab), 1e-300),
            0.0, 1.0);
        best = std::min(best, std::abs(z - (a + t * ab)));
    }
    return best;
}

// Shortley-Weller SOR sweep machinery shared by the planar and strip
// solvers. Arms store the fractional length (1 = full cell) and the
// boundary value at the clipped end (NaN when the arm ends at a node).
struct sw_grid {
    std::size_t nx = 0, ny = 0;
    bool periodic_x = false;
    double ax = 1.0, ay = 1.0;              // 1/hx^2, 1/hy^2 stencil weights
    std::vector<std::uint8_t> interior;
    std::vector<double> value;              // solution / boundary values
    std::vector<std::array<double, 4>> frac; // E W N S fractional arms
    std::vector<std::array<double, 4>> bval; // boundary value at clipped arms

    std::size_t idx(std::size_t i, std::size_t j) const { return j * nx + i; }

    std::size_t nbr(std::size_t i, std::size_t j, int dir) const
    {
        // 0 E, 1 W, 2 N, 3 S
        long ii = static_cast<long>(i), jj = static_cast<long>(j);
        if (dir == 0) ++ii;
        if (dir == 1) --ii;
        if (dir == 2) ++jj;
        if (dir == 3) --jj;
        if (periodic_x) {
            if (ii < 0) ii += static_cast<long>(nx);
            if (ii >= static_cast<long>(nx)) ii -= static_cast<long>(nx);
        }
        return idx(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
    }

    void solve(double omega, std::size_t max_iter, double tol)
    {
        // compile the stencil into flat arrays; clipped arms reference
        // ghost slots holding the boundary value
        std::vector<double> v = value;
        std::vector<std::size_t> nodes;
        std::vector<std::array<std::size_t, 4>> arm;
        std::vector<std::array<double, 4>> coef;
        std::vector<double> invden;
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t k = idx(i, j);
                if (!interior[k]) continue;
                const double se = frac[k][0], sw = frac[k][1];
                const double sn = frac[k][2], ss = frac[k][3];
                const std::array<double, 4> c{
                    ax * 2.0 / (se * (se + sw)), ax * 2.0 / (sw * (se + sw)),
                    ay * 2.0 / (sn * (sn + ss)), ay * 2.0 / (ss * (sn + ss))};
                std::array<std::size_t, 4> a{};
                for (int d = 0; d < 4; ++d) {
                    if (std::isnan(bval[k][d])) {
                        a[d] = nbr(i, j, d);
                    } else {
                        a[d] = v.size();
                        v.push_back(bval[k][d]);
                    }
                }
                nodes.push_back(k);
                arm.push_back(a);
                coef.push_back(c);
                invden.push_back(1.0 / (c[0] + c[1] + c[2] + c[3]));
            }

        for (std::size_t it = 0; it < max_iter; ++it) {
            double max_change = 0.0;
            for (std::size_t m = 0; m < nodes.size(); ++m) {
                const auto& a = arm[m];
                const auto& c = coef[m];
                const double unew =
                    invden[m] * (c[0] * v[a[0]] + c[1] * v[a[1]] +
                                 c[2] * v[a[2]] + c[3] * v[a[3]]);
                const std::size_t k = nodes[m];
                const double d = unew - v[k];
                max_change = std::max(max_change, std::abs(d));
                v[k] += omega * d;
            }
            if (max_change < tol) break;
        }
        for (std::size_t k = 0; k < value.size(); ++k) value[k] = v[k];
    }
};

} // namespace

// ---------------------------------------------------------------------------
// Planar solver
// ---------------------------------------------------------------------------

harmonic_solution solve(const annular_domain& dom, std::size_t n)
{
    return solve_warm(dom, n, nullptr);
}

harmonic_solution solve_warm(const annular_domain& dom, std::size_t n,
                             const harmonic_solution* warm)
{
    if (dom.outer.size() < 3 || dom.inner.size() < 3)
        throw geometry_error("annulus: boundaries need at least 3 vertices");
    // containment sanity
    for (const cplx& z : dom.inner)
        if (!point_in_polygon(dom.outer, z))
            throw geometry_error("annulus: inner boundary not inside outer");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const cplx& z : dom.outer) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    const double pad = 0.02 * std::max(xmax - xmin, ymax - ymin);
    xmin -= pad; xmax += pad; ymin -= pad; ymax += pad;

    // square cells
    const double pitch = std::max(xmax - xmin, ymax - ymin) /
                         static_cast<double>(n - 1);
    const auto nx = static_cast<std::size_t>(
        std::ceil((xmax - xmin) / pitch)) + 1;
    const auto ny = static_cast<std::size_t>(
        std::ceil((ymax - ymin) / pitch)) + 1;

    harmonic_solution sol;
    sol.nx = nx;
    sol.ny = ny;
    sol.x0 = xmin;
    sol.y0 = ymin;
    sol.hx = pitch;
    sol.hy = pitch;

    sw_grid g;
    g.nx = nx;
    g.ny = ny;
    g.interior.assign(nx * ny, 0);
    g.value.assign(nx * ny, 0.0);
    g.frac.assign(nx * ny, {1.0, 1.0, 1.0, 1.0});
    g.bval.assign(nx * ny, {std::nan(""), std::nan(""), std::nan(""), std::nan("")});

    auto node = [&](std::size_t i, std::size_t j) {
        return cplx{sol.x0 + static_cast<double>(i) * sol.hx,
                    sol.y0 + static_cast<double>(j) * sol.hy};
    };

    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const cplx z = node(i, j);
            const bool inside =
                point_in_polygon(dom.outer, z) && !point_in_polygon(dom.inner, z);
            const std::size_t k = g.idx(i, j);
            if (inside && i > 0 && j > 0 && i + 1 < nx && j + 1 < ny) {
                g.interior[k] = 1;
                if (warm)
                    g.value[k] = std::clamp(warm->value_at(z), 0.0, 1.0);
            } else {
                g.value[k] = point_in_polygon(dom.inner, z) ? 1.0 : 0.0;
            }
        }

    const cplx arm[4] = {{pitch, 0.0}, {-pitch, 0.0}, {0.0, pitch}, {0.0, -pitch}};
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = g.idx(i, j);
            if (!g.interior[k]) continue;
            const cplx z = node(i, j);
            for (int d = 0; d < 4; ++d) {
                const cplx tip = z + arm[d];
                const double so = first_crossing(dom.outer, z, tip);
                const double si = first_crossing(dom.inner, z, tip);
                const double s = std::min(so, si);
                if (s <= 1.0) {
                    g.frac[k][d] = std::max(s, 0.05);
                    g.bval[k][d] = si < so ? 1.0 : 0.0;
                }
            }
        }

    const double mu = 0.5 * (std::cos(kPi / static_cast<double>(nx)) +
                             std::cos(kPi / static_cast<double>(ny)));
    const double omega = 2.0 / (1.0 + std::sqrt(1.0 - mu * mu));
    g.solve(omega, 80 * std::max(nx, ny), 1e-11);

    sol.h = g.value;
    sol.in = g.interior;

    // Dirichlet energy = discrete flux into the inner boundary: square
    // cells carry unit conductance per edge, and clipped arms contribute
    // (u_b - u_P)/s (cut-independence of the discrete flux).
    double flux = 0.0;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = g.idx(i, j);
            if (!g.interior[k]) continue;
            for (int d = 0; d < 4; ++d) {
                if (!std::isnan(g.bval[k][d]) && g.bval[k][d] == 1.0)
                    flux += (1.0 - g.value[k]) / g.frac[k][d];
            }
        }
    sol.energy = flux;
    sol.modulus = std::exp(-2.0 * kPi / sol.energy);
    return sol;
}

double harmonic_solution::value_at(cplx z) const
{
    const double fx = (z.real() - x0) / hx;
    const double fy = (z.imag() - y0) / hy;
    const auto i = static_cast<std::size_t>(std::clamp(fx, 0.0, double(nx - 2)));
    const auto j = static_cast<std::size_t>(std::clamp(fy, 0.0, double(ny - 2)));
    const double ax = fx - static_cast<double>(i);
    const double ay = fy - static_cast<double>(j);
    auto v = [&](std::size_t ii, std::size_t jj) { return h[jj * nx + ii]; };
    return (1 - ax) * (1 - ay) * v(i, j) + ax * (1 - ay) * v(i + 1, j) +
           (1 - ax) * ay * v(i, j + 1) + ax * ay * v(i + 1, j + 1);
}

double harmonic_solution::metric_at(cplx z) const
{
    const double dx = (value_at(z + cplx{hx, 0.0}) - value_at(z - cplx{hx, 0.0})) /
                      (2.0 * hx);
    const double dy = (value_at(z + cplx{0.0, hy}) - value_at(z - cplx{0.0, hy})) /
                      (2.0 * hy);
    return dx * dx + dy * dy; // |2 dh/dz|^2 = |grad h|^2
}

double normalized_metric(const harmonic_solution& sol, cplx z)
{
    const auto i = static_cast<long>((z.real() - sol.x0) / sol.hx + 0.5);
    const auto j = static_cast<long>((z.imag() - sol.y0) / sol.hy + 0.5);
    for (long dj = -2; dj <= 2; ++dj)
        for (long di = -2; di <= 2; ++di) {
            const long ii = i + di, jj = j + dj;
            if (ii < 0 || jj < 0 || ii >= static_cast<long>(sol.nx) ||
                jj >= static_cast<long>(sol.ny))
                throw boundary_proximity("normalized_metric: sample outside grid");
            if (!sol.in[static_cast<std::size_t>(jj) * sol.nx +
                        static_cast<std::size_t>(ii)])
                throw boundary_proximity(
                    "normalized_metric: sample within 2 cells of a boundary");
        }
    return sol.metric_at(z);
}

double modulus(const annular_domain& dom, double tol, std::size_t n_start)
{
    double prev = -1.0;
    std::size_t n = n_start;
    harmonic_solution last;
    for (int level = 0; level < 3; ++level) {
        harmonic_solution sol =
            solve_warm(dom, n, level > 0 ? &last : nullptr);
        if (prev >= 0.0 && std::abs(sol.modulus - prev) < tol)
            return sol.modulus;
        prev = sol.modulus;
        last = std::move(sol);
        n = 2 * n;
    }
    return prev;
}

// ---------------------------------------------------------------------------
// Periodic strip solver
// ---------------------------------------------------------------------------

double strip_modulus(const std::function<double(double)>& y_bot,
                     const std::function<double(double)>& y_top,
                     std::size_t ny, std::size_t nx)
{
    double lo = 1e300, hi = -1e300;
    const std::size_t probe = 512;
    for (std::size_t i = 0; i < probe; ++i) {
        const double x = 2.0 * kPi * static_cast<double>(i) / probe;
        lo = std::min(lo, y_bot(x));
        hi = std::max(hi, y_top(x));
    }
    if (!(hi > lo))
        throw geometry_error("strip_modulus: top curve must lie above bottom");

    const double height = hi - lo;
    if (nx == 0)
        nx = std::max<std::size_t>(
            48, static_cast<std::size_t>(2.0 * kPi / height *
                                         static_cast<double>(ny)));
    const double hx = 2.0 * kPi / static_cast<double>(nx);
    const double pad = 2.0 * height / static_cast<double>(ny);
    const double y0 = lo - pad, y1 = hi + pad;
    const double hy = (y1 - y0) / static_cast<double>(ny - 1);

    sw_grid g;
    g.nx = nx;
    g.ny = ny;
    g.periodic_x = true;
    g.ax = 1.0 / (hx * hx);
    g.ay = 1.0 / (hy * hy);
    g.interior.assign(nx * ny, 0);
    g.value.assign(nx * ny, 0.0);
    g.frac.assign(nx * ny, {1.0, 1.0, 1.0, 1.0});
    g.bval.assign(nx * ny, {std::nan(""), std::nan(""), std::nan(""), std::nan("")});

    auto xat = [&](std::size_t i) { return hx * static_cast<double>(i); };
    auto yat = [&](std::size_t j) { return y0 + hy * static_cast<double>(j); };

    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = xat(i), y = yat(j);
            const std::size_t k = g.idx(i, j);
            const bool inside = y > y_bot(x) && y < y_top(x) && j > 0 && j + 1 < ny;
            if (inside) {
                g.interior[k] = 1;
                g.value[k] = (y_top(x) - y) / (y_top(x) - y_bot(x));
            } else {
                g.value[k] = y <= y_bot(x) ? 1.0 : 0.0; // h = 1 on bottom
            }
        }

    // clip arms against the two graphs (bisection on the crossing)
    auto clip = [&](double xa, double ya, double xb, double yb,
                    const std::function<double(double)>& curve) -> double {
        const bool ina = ya > curve(xa);
        const bool inb = yb > curve(xb);
        if (ina == inb) return 2.0;
        double s_lo = 0.0, s_hi = 1.0;
        for (int it = 0; it < 40; ++it) {
            const double s = 0.5 * (s_lo + s_hi);
            const double x = xa + s * (xb - xa), y = ya + s * (yb - ya);
            if ((y > curve(x)) == ina) s_lo = s; else s_hi = s;
        }
        return 0.5 * (s_lo + s_hi);
    };

    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = g.idx(i, j);
            if (!g.interior[k]) continue;
            const double x = xat(i), y = yat(j);
            const double dx[4] = {hx, -hx, 0.0, 0.0};
            const double dy[4] = {0.0, 0.0, hy, -hy};
            for (int d = 0; d < 4; ++d) {
                const double sb = clip(x, y, x + dx[d], y + dy[d], y_bot);
                const double st = clip(x, y, x + dx[d], y + dy[d], y_top);
                const double s = std::min(sb, st);
                if (s <= 1.0) {
                    g.frac[k][d] = std::max(s, 0.05);
                    g.bval[k][d] = sb < st ? 1.0 : 0.0;
                }
            }
        }

    // periodic x: the gravest mode is the full period in x
    const double mu =
        (g.ax * std::cos(2.0 * kPi / static_cast<double>(nx)) +
         g.ay * std::cos(kPi / static_cast<double>(ny))) /
        (g.ax + g.ay);
    const double omega = 2.0 / (1.0 + std::sqrt(1.0 - mu * mu));
    g.solve(omega, 60 * std::max(nx, ny), 1e-11);

    // flux into the bottom boundary, arms isotropic when hx == hy; account
    // for anisotropy via the conductance hx/hy (vertical arms) and hy/hx.
    double flux = 0.0;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = g.idx(i, j);
            if (!g.interior[k]) continue;
            for (int d = 0; d < 4; ++d) {
                if (!std::isnan(g.bval[k][d]) && g.bval[k][d] == 1.0) {
                    const double cond = (d < 2) ? hy / hx : hx / hy;
                    flux += cond * (1.0 - g.value[k]) / g.frac[k][d];
                }
            }
        }
    return std::exp(-2.0 * kPi / flux);
}

std::vector<degeneration_row> degeneration_check(const degeneration_config& cfg)
{
    if (!(cfg.r1 >= 1.0) || !(cfg.r2 >= 1.0))
        throw geometry_error("degeneration_check: radii must exceed 1");
    auto prof1 = cfg.profile1 ? cfg.profile1 : [](double) { return 1.0; };
    auto prof2 = cfg.profile2 ? cfg.profile2 : [](double) { return 1.0; };

    auto logr1 = [&](double th) { return std::log(cfg.r1 * prof1(th)); };
    auto logr2 = [&](double th) { return std::log(cfg.r2 * prof2(th)); };

    // cap moduli: cylinder between the unit circle and the perturbed circle
    const double h1 = strip_modulus([](double) { return 0.0; }, logr1, cfg.ny);
    const double h2 = strip_modulus([](double) { return 0.0; }, logr2, cfg.ny);
    const double target = h1 * h2;

    std::vector<degeneration_row> rows;
    for (double q : cfg.q_values) {
        if (!(q > 0.0) || q * cfg.r2 >= 1.0 / cfg.r1)
            throw geometry_error("degeneration_check: q too large for the radii");
        degeneration_row row;
        row.q = q;
        row.target = target;
        // z1-chart: h_in between |z1| = q and |z1| = 1
        row.h_in = strip_modulus(
            [&](double) { return std::log(q); }, [](double) { return 0.0; },
            cfg.ny);
        // h_out between |z1| = q / r2(.) (image of |z2| = r2) and r1(.)
        row.h_out = strip_modulus(
            [&](double th) { return std::log(q) - logr2(-th); }, logr1, cfg.ny);
        row.ratio = row.h_out / row.h_in;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Walk on spheres
// ---------------------------------------------------------------------------

wos_result wos_hitting_probability(const annular_domain& dom, cplx z0,
                                   std::size_t n_walks, std::uint64_t seed)
{
    const counter_rng rng{seed};
    const double eps = 1e-4 * dist_to_polyline(dom.outer, z0) + 1e-9;
    std::size_t hits = 0;
    for (std::size_t w = 0; w < n_walks; ++w) {
        cplx z = z0;
        for (std::uint64_t step = 0; step < 100000; ++step) {
            const double di = dist_to_polyline(dom.inner, z);
            const double do_ = dist_to_polyline(dom.outer, z);
            const double r = std::min(di, do_);
            if (r < eps) {
                if (di < do_) ++hits;
                break;
            }
            const double th =
                2.0 * kPi * rng.uniform(w, step, 17);
            z += r * std::exp(cplx{0.0, th});
        }
    }
    wos_result res;
    res.p = static_cast<double>(hits) / static_cast<double>(n_walks);
    res.stderr_ = std::sqrt(std::max(res.p * (1.0 - res.p), 1e-12) /
                            static_cast<double>(n_walks));
    return res;
}

} // namespace annulus
} // namespace slelab
