#include "doctest.h"

#include <cmath>
#include <numbers>

#include "slelab/annulus.hpp"

using namespace slelab;
using namespace slelab::annulus;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> circle(cplx center, double r, std::size_t n = 256)
{
    std::vector<cplx> pts(n);
    for (std::size_t k = 0; k < n; ++k)
        pts[k] = center + r * std::exp(cplx{0.0, 2.0 * kPi *
                                                 static_cast<double>(k) / n});
    return pts;
}

annular_domain concentric(double r)
{
    return {circle(cplx{}, 1.0), circle(cplx{}, r)};
}

} // namespace

TEST_CASE("concentric annulus modulus equals the radius ratio")
{
    for (double r : {0.3, 0.5, 0.7}) {
        const double t = modulus(concentric(r));
        CAPTURE(r);
        CHECK(std::abs(t - r) < 1e-3);
    }
}

TEST_CASE("maximum principle on the solved field")
{
    const auto sol = solve(concentric(0.5), 128);
    for (double v : sol.h) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("modulus is invariant under a disk automorphism")
{
    // z -> (z + a) / (1 + a z) maps the unit disk onto itself
    const double a = 0.35;
    auto mob = [a](cplx z) { return (z + a) / (1.0 + a * z); };
    annular_domain dom;
    for (const cplx& z : circle(cplx{}, 1.0, 512)) dom.outer.push_back(mob(z));
    for (const cplx& z : circle(cplx{}, 0.5, 512)) dom.inner.push_back(mob(z));
    const double t = modulus(dom);
    CHECK(std::abs(t - 0.5) < 1e-3);
}

TEST_CASE("square annulus modulus is stable under refinement")
{
    annular_domain dom;
    dom.outer = {cplx{-2, -2}, cplx{2, -2}, cplx{2, 2}, cplx{-2, 2}};
    dom.inner = {cplx{-1, -1}, cplx{1, -1}, cplx{1, 1}, cplx{-1, 1}};
    // reentrant corners limit the flux convergence to ~h^{4/3}
    const auto s1 = solve(dom, 128);
    const auto s2 = solve_warm(dom, 256, &s1);
    CHECK(std::abs(s1.modulus - s2.modulus) < 5e-3);
    CHECK(s2.modulus > 0.4);
    CHECK(s2.modulus < 0.6);
}

TEST_CASE("geometry errors are reported")
{
    annular_domain bad;
    bad.outer = circle(cplx{}, 0.4);
    bad.inner = circle(cplx{}, 1.0); // not nested
    CHECK_THROWS_AS((void)solve(bad, 64), geometry_error);
}

TEST_CASE("normalized metric of the concentric annulus")
{
    const double r = 0.5;
    const auto sol = solve(concentric(r), 384);
    const double c = 1.0 / std::log(1.0 / r);
    for (double rad : {0.62, 0.75, 0.88}) {
        for (double th : {0.3, 2.0, 4.4}) {
            const cplx z = rad * std::exp(cplx{0.0, th});
            const double m = normalized_metric(sol, z);
            const double expect = c * c / (rad * rad);
            CHECK(std::abs(m - expect) / expect < 1e-2);
        }
    }
    // rotation invariance
    const double m1 = normalized_metric(sol, cplx{0.7, 0.0});
    const double m2 = normalized_metric(sol, 0.7 * std::exp(cplx{0.0, 1.1}));
    CHECK(std::abs(m1 - m2) / m1 < 1e-2);
    // proximity guard
    CHECK_THROWS_AS((void)normalized_metric(sol, cplx{0.999, 0.0}),
                    boundary_proximity);
}

TEST_CASE("metric responds continuously to boundary perturbations")
{
    const auto base = solve(concentric(0.5), 256);
    annular_domain pert;
    pert.outer = circle(cplx{}, 1.0, 512);
    pert.inner = circle(cplx{}, 0.5005, 512);
    const auto moved = solve(pert, 256);
    const cplx z{0.75, 0.0};
    const double d = std::abs(normalized_metric(base, z) -
                              normalized_metric(moved, z));
    CHECK(d < 2e-2);
}

TEST_CASE("modulus is monotone under essential embeddings")
{
    // a thinner annulus (larger inner hole) has a larger parameter
    const double t1 = modulus(concentric(0.4));
    const double t2 = modulus(concentric(0.6));
    CHECK(t2 > t1);
}

TEST_CASE("flat strip modulus closed form")
{
    for (double height : {0.7, 2.0, 6.9}) {
        const double t = strip_modulus([](double) { return 0.0; },
                                       [height](double) { return height; },
                                       160);
        CHECK(std::abs(t - std::exp(-height)) / std::exp(-height) < 2e-3);
    }
}

TEST_CASE("plumbing degeneration: circular model is exact in the ratio")
{
    degeneration_config cfg;
    cfg.r1 = 2.0;
    cfg.r2 = 3.0;
    cfg.q_values = {1e-2, 1e-3};
    cfg.ny = 160;
    const auto rows = degeneration_check(cfg);
    const double target = 1.0 / (cfg.r1 * cfg.r2);
    for (const auto& row : rows) {
        CAPTURE(row.q);
        CHECK(std::abs(row.ratio - target) / target < 1e-3);
        CHECK(std::abs(row.target - target) / target < 2e-3);
    }
}

TEST_CASE("plumbing degeneration with perturbed boundaries")
{
    degeneration_config cfg;
    cfg.r1 = 2.0;
    cfg.r2 = 2.0;
    cfg.q_values = {1e-2, 1e-3};
    cfg.ny = 192;
    cfg.profile1 = [](double th) { return 1.0 + 0.05 * std::cos(3.0 * th); };
    cfg.profile2 = [](double th) { return 1.0 + 0.05 * std::sin(2.0 * th); };
    const auto rows = degeneration_check(cfg);
    // convergence toward h1 h2 as q -> 0
    const double err_last =
        std::abs(rows.back().ratio - rows.back().target) / rows.back().target;
    CAPTURE(rows.back().ratio);
    CAPTURE(rows.back().target);
    CHECK(err_last < 0.01);
}

TEST_CASE("walk on spheres agrees with the grid solution")
{
    const auto dom = concentric(0.5);
    const auto sol = solve(dom, 256);
    const cplx z0{0.7, 0.1};
    const auto wos = wos_hitting_probability(dom, z0, 4000, 99);
    const double grid_h = sol.value_at(z0);
    CHECK(std::abs(wos.p - grid_h) < 3.0 * wos.stderr_ + 5e-3);
}
