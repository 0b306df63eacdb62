#include "slelab/loopspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slelab/loewner.hpp"

namespace slelab {
namespace loopspace {

namespace {

constexpr double kPi = std::numbers::pi;

double winding_around_zero(const std::vector<cplx>& pts)
{
    double total = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = pts[i];
        const cplx b = pts[(i + 1) % n];
        double d = std::arg(b) - std::arg(a);
        while (d > kPi) d -= 2.0 * kPi;
        while (d < -kPi) d += 2.0 * kPi;
        total += d;
    }
    return total / (2.0 * kPi);
}

// rotate a series phi(t) = sum r_k t^k so phi'(0) > 0; extract lead and
// the normalized tail coefficients a_1..a_K of phi(t) = A(t + a1 t^2 + ..).
disk_map_series normalize_rotation(const power_series& raw, std::size_t K)
{
    disk_map_series out;
    const cplx r1 = raw[1];
    if (std::abs(r1) < 1e-14)
        throw not_univalent("disk_map: vanishing derivative at 0");
    const double theta = -std::arg(r1);
    out.lead = std::abs(r1);
    out.phi = power_series(K);
    out.phi.c[0] = 0.0;
    for (std::size_t k = 1; k <= K; ++k)
        out.phi.c[k] = raw[k] * std::exp(cplx{0.0, theta * static_cast<double>(k)});
    out.phi.c[1] = out.lead;
    out.coeffs.resize(K >= 2 ? K - 1 : 0);
    for (std::size_t k = 2; k <= K; ++k)
        out.coeffs[k - 2] = out.phi.c[k] / out.lead;
    return out;
}

void check_coefficient_bounds(const disk_map_series& m)
{
    for (std::size_t k = 0; k < m.coeffs.size(); ++k) {
        const double bound = 1.1 * (static_cast<double>(k) + 2.0);
        if (std::abs(m.coeffs[k]) > bound)
            throw not_univalent("disk_map: coefficient bound violated");
    }
}

std::vector<cplx> sample_series_boundary(const std::vector<cplx>& coeffs,
                                         bool laurent, std::size_t n)
{
    std::vector<cplx> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx zeta = std::exp(cplx{0.0, 2.0 * kPi * static_cast<double>(j) /
                                             static_cast<double>(n)});
        cplx z{};
        if (!laurent) {
            cplx p{1.0};
            for (const cplx& c : coeffs) {
                z += c * p;
                p *= zeta;
            }
        } else {
            // e_1 zeta + e_0 + e_{-1}/zeta + ...
            cplx p = zeta;
            for (const cplx& c : coeffs) {
                z += c * p;
                p /= zeta;
            }
        }
        pts[j] = z;
    }
    return pts;
}

} // namespace

power_series polyline_interior_map(const std::vector<cplx>& points,
                                   std::size_t K)
{
    if (points.size() < 8)
        throw precondition_error("polyline_interior_map: too few points");
    const double wind = winding_around_zero(points);
    std::vector<cplx> pts = points;
    if (std::abs(wind + 1.0) < 0.2)
        std::reverse(pts.begin(), pts.end());
    else if (std::abs(wind - 1.0) > 0.2)
        throw precondition_error(
            "polyline_interior_map: curve must wind once around 0");

    const cplx p0 = pts.front();
    const cplx p1 = pts[1];

    // opening map i sqrt((z - p1)/(z - p0)): removes the first edge, sends
    // p0 to infinity, the interior into H
    auto open_map = [p0, p1](cplx z) {
        return cplx{0.0, 1.0} * std::sqrt((z - p1) / (z - p0));
    };

    std::vector<cplx> img;
    img.reserve(pts.size() + 32);
    img.push_back(0.0); // image of p1
    for (std::size_t j = 2; j < pts.size(); ++j)
        img.push_back(open_map(pts[j]));
    // geometric subdivision of the closing edge toward p0: its image
    // escapes to infinity; truncate once far enough that the leftover has
    // negligible harmonic measure from the interior
    const cplx plast = pts.back();
    for (int j = 1; j <= 28; ++j) {
        const double s = 1.0 - std::pow(2.0, -j);
        img.push_back(open_map(plast + s * (p0 - plast)));
    }

    const auto uz = loewner::unzip(img);

    const std::size_t ord = K + 3;
    // series of the opening map at 0: i sqrt((s - p1) / (s - p0))
    power_series num = power_series::identity(ord) - p1;
    power_series den = power_series::identity(ord) - p0;
    power_series ratio = num * reciprocal(den);
    const cplx s0 = std::sqrt(ratio[0]);
    power_series g = sqrt_with_branch(ratio, s0) * cplx{0.0, 1.0};

    g = apply_series(uz.pipeline, g);

    // Cayley to the unit disk around the image of 0
    const cplx w0 = g[0];
    if (!(w0.imag() > 0.0))
        throw precondition_error("polyline_interior_map: 0 not interior");
    power_series disk = (g - w0) * reciprocal(g - std::conj(w0));
    disk.c[0] = 0.0;

    power_series inv = reverse(disk);
    inv.c.resize(K + 1);
    return inv;
}

disk_map_series disk_map(const loop_curve& loop, loop_side side, std::size_t K)
{
    if (const auto* c = std::get_if<circle_loop>(&loop)) {
        if (!(c->r > 0.0))
            throw precondition_error("disk_map: circle radius must be positive");
        power_series s(K);
        s.c[1] = side == loop_side::left ? c->r : 1.0 / c->r;
        disk_map_series out = normalize_rotation(s, K);
        return out;
    }

    if (const auto* a = std::get_if<analytic_loop>(&loop)) {
        if (side == loop_side::left && !a->interior_series.empty()) {
            power_series s(std::max<std::size_t>(K, a->interior_series.size() - 1));
            for (std::size_t k = 0; k < a->interior_series.size(); ++k)
                s.c[k] = a->interior_series[k];
            if (s[0] != cplx{})
                throw precondition_error("disk_map: interior series must fix 0");
            s.c.resize(K + 1);
            disk_map_series out = normalize_rotation(s, K);
            check_coefficient_bounds(out);
            return out;
        }
        if (side == loop_side::right && !a->exterior_series.empty()) {
            // phi_R(t) = 1 / z(1/t) = t / (e1 + e0 t + e-1 t^2 + ...)
            power_series den(K);
            for (std::size_t k = 0; k < a->exterior_series.size() && k <= K; ++k)
                den.c[k] = a->exterior_series[k];
            power_series s = power_series::identity(K) * reciprocal(den);
            disk_map_series out = normalize_rotation(s, K);
            check_coefficient_bounds(out);
            return out;
        }
        // missing closed form: go through the sampled polyline
        const bool have_int = !a->interior_series.empty();
        polyline_loop poly{sample_series_boundary(
            have_int ? a->interior_series : a->exterior_series, !have_int,
            a->samples)};
        return disk_map(loop_curve{poly}, side, K);
    }

    const auto& p = std::get<polyline_loop>(loop);
    if (std::abs(winding_around_zero(p.points)) < 0.8)
        throw precondition_error("disk_map: loop must wind once around 0");
    std::vector<cplx> pts = p.points;
    if (side == loop_side::right) {
        for (auto& z : pts) z = 1.0 / z;
    }
    const power_series raw = polyline_interior_map(pts, K);
    disk_map_series out = normalize_rotation(raw, K);
    check_coefficient_bounds(out);
    return out;
}

loop_coords coords(const loop_curve& loop, std::size_t K)
{
    loop_coords lc;
    lc.K = K;
    const disk_map_series left = disk_map(loop, loop_side::left, K);
    const disk_map_series right = disk_map(loop, loop_side::right, K);
    lc.A = left.lead;
    lc.a = left.coeffs;
    lc.B = right.lead;
    lc.b = right.coeffs;
    return lc;
}

neretin_values neretin_p2(const loop_curve& loop)
{
    const loop_coords lc = coords(loop, 4);
    neretin_values v;
    // S_phi(0) = 6 (a2 - a1^2) in the normalization phi = A(t + a1 t^2 + ...)
    const cplx sl = 6.0 * (lc.a[1] - lc.a[0] * lc.a[0]);
    const cplx sr = 6.0 * (lc.b[1] - lc.b[0] * lc.b[0]);
    v.p_minus2 = sl.real() / 12.0;
    v.p_minus2_prime = sl.imag() / 12.0;
    v.p_plus2 = sr.real() / 12.0;
    v.p_plus2_prime = sr.imag() / 12.0;
    return v;
}

} // namespace loopspace
} // namespace slelab
