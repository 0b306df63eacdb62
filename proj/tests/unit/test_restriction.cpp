#include "doctest.h"

#include <cmath>

#include "slelab/restriction.hpp"

using namespace slelab;
using namespace slelab::restriction;

TEST_CASE("half-disk mapping-out closed form")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    CHECK(a.phi_prime_0 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(a.q_tan == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(a.map_out(cplx{})) < 1e-15);

    // Phi maps H \ A onto H and alpha inverts it
    for (double x : {-2.0, -0.5, 0.3, 4.0}) {
        for (double y : {0.1, 0.9, 2.5}) {
            const cplx z{x, y};
            if (std::abs(z - 2.0) <= 1.05) continue;
            const cplx u = a.map_out(z);
            CHECK(u.imag() > 0.0);
            CHECK(std::abs(a.alpha(u) - z) < 1e-10);
        }
    }
    // boundary arc maps to the real axis
    for (double th : {0.3, 1.2, 2.6}) {
        const cplx z = 2.0 + std::exp(cplx{0.0, th});
        CHECK(std::abs(a.map_out(z).imag()) < 1e-12);
    }
}

TEST_CASE("tiny hull is close to the identity")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1e-5});
    CHECK(a.q_tan == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(a.map_out(cplx{0.5, 0.5}) - cplx{0.5, 0.5}) < 1e-9);
}

TEST_CASE("q_tan is scale invariant")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const alpha_map b = mapping_out(half_disk{6.0, 3.0});
    CHECK(a.q_tan == doctest::Approx(b.q_tan).epsilon(1e-14));
}

TEST_CASE("invalid hulls are rejected")
{
    CHECK_THROWS_AS((void)mapping_out(half_disk{2.0, 2.5}), invalid_hull);
    CHECK_THROWS_AS((void)mapping_out(half_disk{0.0, 0.5}), invalid_hull);
    CHECK_THROWS_AS((void)mapping_out(vertical_slit_hull{0.0, 1.0}),
                    invalid_hull);
}

TEST_CASE("vertical slit hull closed form")
{
    const alpha_map a = mapping_out(vertical_slit_hull{1.5, 0.8});
    CHECK(std::abs(a.map_out(cplx{})) < 1e-14);
    CHECK(a.phi_prime_0 ==
          doctest::Approx(1.5 / std::sqrt(1.5 * 1.5 + 0.8 * 0.8)).epsilon(1e-12));
    const cplx z{-1.0, 0.7};
    CHECK(std::abs(a.alpha(a.map_out(z)) - z) < 1e-10);
}

TEST_CASE("alpha jets match finite differences")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const cplx u{0.4, 0.8};
    const jet3 j = a.alpha_jet(u);
    const double h = 1e-5;
    const cplx fd1 = (a.alpha(u + h) - a.alpha(u - h)) / (2.0 * h);
    const cplx fd2 =
        (a.alpha(u + h) - 2.0 * a.alpha(u) + a.alpha(u - h)) / (h * h);
    CHECK(std::abs(j.d1 - fd1) / std::abs(fd1) < 1e-8);
    CHECK(std::abs(j.d2 - fd2) / std::abs(fd2) < 1e-4);
}

TEST_CASE("frame from the unzipped hull boundary reproduces Phi at t = 0")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const double s_exact = std::real(schwarzian(a.map_out_jet(cplx{})));
    for (std::size_t m : {96, 128, 192}) {
        const auto arc = a.boundary_arc(m);
        const restriction_frame f = frame_from_hull_image(arc, 0.0, 0.0);
        CAPTURE(m);
        CHECK(std::abs(f.H - 0.75) < 2e-4);
        CHECK(std::abs(f.S - s_exact) < 2e-3 * std::max(1.0, std::abs(s_exact)));
    }
}

TEST_CASE("frame from the slit hull boundary matches the closed form")
{
    const alpha_map a = mapping_out(vertical_slit_hull{1.5, 0.8});
    const auto arc = a.boundary_arc(64);
    const restriction_frame f = frame_from_hull_image(arc, 0.0, 0.0);
    CHECK(std::abs(f.H - a.phi_prime_0) < 1e-9);
}

TEST_CASE("h_frame on the empty trace is the mapping-out jet")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const restriction_frame f = h_frame({}, 0.0, a);
    CHECK(f.H == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("h_frame detects hull hits")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const std::vector<cplx> trace{cplx{0.0, 0.0}, cplx{1.0, 0.5},
                                  cplx{2.0, 0.5}};
    CHECK_THROWS_AS((void)h_frame(trace, 0.0, a), hull_hit);
}

TEST_CASE("h_frame of a short trace against a distant hull is near 1")
{
    const alpha_map a = mapping_out(half_disk{1000.0, 1.0});
    const auto p = sle::params_from_kappa(2.0);
    const auto d = sle::sample_driving(p, 1e-3, 0.2, 3, 1);
    const auto tips = loewner::trace(d);
    const restriction_frame f = h_frame(tips, d.values.back(), a);
    CHECK(std::abs(f.H - 1.0) < 1e-4);
}

TEST_CASE("h_frame H matches a finite difference of h on the real axis")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    const auto d = sle::sample_driving(p, 5e-4, 0.1, 21, 4);
    const auto tips = loewner::trace(d);
    // probe point on the real axis away from the driving value (the
    // discrete inverse flow folds both sides within the final slit reach)
    const double x0 = d.values.back() - 1.0;

    const auto uz_k = loewner::unzip(tips);
    std::vector<cplx> image(tips.size());
    for (std::size_t i = 0; i < tips.size(); ++i)
        image[i] = a.map_out(tips[i]);
    const auto uz_kt = loewner::unzip(image);

    // jet of the composite gamma_Ktilde ∘ Phi ∘ gamma_K^{-1} at x0
    const jet3 j1 = uz_k.pipeline.inverted().jet_at(cplx(x0));
    const jet3 j2 = a.map_out_jet(j1.f);
    const jet3 j3 = uz_kt.pipeline.jet_at(j2.f);
    const jet3 h = compose(j3, compose(j2, j1));

    auto h_of = [&](double x) {
        const cplx z1 = uz_k.pipeline.inverted().apply(cplx(x));
        return uz_kt.pipeline.apply(a.map_out(z1)).real();
    };
    const double eps = 1e-4;
    const double fd = (h_of(x0 + eps) - h_of(x0 - eps)) / (2.0 * eps);
    CHECK(std::abs(h.d1.real() - fd) / std::abs(fd) < 1e-5);

    // the hull-image route agrees across discretizations
    const restriction_frame f = h_frame(tips, x0, a);
    CHECK(std::abs(f.H - fd) / std::abs(fd) < 5e-4);
}

TEST_CASE("engine frame agrees with the literal h_frame route")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const auto p = sle::params_from_kappa(2.0);
    const auto d = sle::sample_driving(p, 2.5e-4, 0.15, 77, 2);
    const auto tips = loewner::trace(d);
    const double w = d.values.back();
    const restriction_frame lit = h_frame(tips, w, a);

    // forward-flow image of the hull boundary under the same pipeline
    const auto st = loewner::evolve(d);
    auto arc = a.boundary_arc(128);
    for (auto& z : arc) z = st.pipeline.apply(z);
    const restriction_frame eng = frame_from_hull_image(arc, st.capacity, w);

    CHECK(std::abs(eng.H - lit.H) < 2e-3 * lit.H);
    CHECK(std::abs(eng.S - lit.S) < 4e-3 * std::max(1.0, std::abs(lit.S)));
}

TEST_CASE("martingale value reductions")
{
    const auto p83 = sle::params_from_kappa(8.0 / 3.0);
    std::vector<restriction_frame> frames(1);
    frames[0].t = 0.0;
    frames[0].H = 0.75;
    frames[0].S = -0.4;
    // c = 0: no integral term
    CHECK(martingale_value(frames, p83) ==
          doctest::Approx(std::pow(0.75, 0.625)).epsilon(1e-14));

    const auto p2 = sle::params_from_kappa(2.0);
    frames.push_back(frames[0]);
    frames[1].t = 0.5;
    frames[1].H = 0.8;
    frames[1].S = -0.2;
    const double integral = 0.5 * (-0.4 - 0.2) * 0.5;
    const double expect =
        std::pow(0.8, p2.h) * std::exp(-(p2.c / 6.0) * integral);
    CHECK(martingale_value(frames, p2) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("flow derivative identity at the empty hull")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const std::vector<cplx> zs{cplx{0.0, 3.0}, cplx{-1.0, 2.0},
                               cplx{0.8, 1.5}};
    const double e1 = flow_derivative_check(std::nullopt, a, zs, 1e-3);
    const double e2 = flow_derivative_check(std::nullopt, a, zs, 5e-4);
    CHECK(e1 <= 10.0 * 1e-3);
    CHECK(e2 <= 10.0 * 5e-4);
    // first-order convergence: halving delta roughly halves the error
    CHECK(e2 < 0.75 * e1);
}

TEST_CASE("time_alpha scaling limit on a tiny trace")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const double s = 1e-6;
    std::vector<cplx> seg;
    for (int j = 0; j <= 16; ++j)
        seg.emplace_back(0.0, 2.0 * std::sqrt(s) * j / 16.0);
    const double ta = time_alpha(seg, a);
    const double ratio = ta / s;
    const double expect = a.d_alpha_0 * a.d_alpha_0;
    CHECK(std::abs(ratio - expect) / expect < 1e-3);
}

TEST_CASE("time_alpha reduces to plain capacity for a vanishing hull")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1e-7});
    std::vector<cplx> seg;
    for (int j = 0; j <= 12; ++j)
        seg.emplace_back(0.0, 0.4 * j / 12.0);
    const double s = loewner::unzip(seg).capacities.back();
    CHECK(std::abs(time_alpha(seg, a) - s) < 1e-8);
}

TEST_CASE("time_alpha rejects traces through the hull")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const std::vector<cplx> bad{cplx{0.0, 0.0}, cplx{2.0, 0.5}};
    CHECK_THROWS_AS((void)time_alpha(bad, a), hull_hit);
}

TEST_CASE("Prop 4 rate: d(Time^alpha)/dTime = 1/H^2 along a path")
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    // straight slit at 0; prefix capacity t(m) = t_tot m / n
    const std::size_t n = 300;
    const double t_tot = 0.04;
    std::vector<cplx> full;
    for (std::size_t j = 0; j <= n; ++j)
        full.emplace_back(
            0.0, 2.0 * std::sqrt(t_tot * static_cast<double>(j) / n));

    auto t_alpha_of = [&](std::size_t m) {
        const std::vector<cplx> prefix(full.begin(), full.begin() + m + 1);
        return time_alpha(prefix, a);
    };
    const std::size_t m0 = 260, m1 = 300;
    const double t0 = t_tot * static_cast<double>(m0) / n;
    const double t1 = t_tot;
    const double dta = (t_alpha_of(m1) - t_alpha_of(m0)) / (t1 - t0);

    // H of the pair (alpha-image curve, its Phi-image) at the window middle
    const std::size_t mm = 280;
    std::vector<cplx> prefix(full.begin(), full.begin() + mm + 1);
    std::vector<cplx> image(prefix.size());
    for (std::size_t i = 0; i < prefix.size(); ++i)
        image[i] = a.alpha(prefix[i]);
    image.front() = 0.0;
    const auto uz = loewner::unzip(image);
    const double w_img = uz.drives.back();
    const restriction_frame hf = h_frame(image, w_img, a);
    const double expect = 1.0 / (hf.H * hf.H);
    CHECK(std::abs(dta - expect) / expect < 0.05);
}

TEST_CASE("small martingale run is flat and starts at the closed form")
{
    const auto p = sle::params_from_kappa(2.0);
    martingale_config cfg;
    cfg.checkpoints = {0.1, 0.5, 1.0};
    cfg.n_paths = 600;
    cfg.dt = 5e-4;
    cfg.seed = 5;
    cfg.arc_points = 80;
    const auto table = martingale_mc(p, half_disk{2.0, 1.0}, cfg);
    CHECK(table.r0 == doctest::Approx(0.75).epsilon(1e-14)); // h = 1
    for (const auto& row : table.rows) {
        CAPTURE(row.t);
        const double band =
            3.0 * std::sqrt(row.stderr_r * row.stderr_r + 1e-6) + 5e-3;
        CHECK(std::abs(row.mean_r - table.r0) < band);
    }
}

TEST_CASE("avoidance probability matches the closed form at c = 0")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    avoidance_config cfg;
    cfg.n_paths = 1500;
    cfg.dt = 2e-4;
    cfg.seed = 11;
    const auto res = avoidance_mc(p, half_disk{2.0, 1.0}, cfg);
    const double target = std::pow(0.75, 0.625);
    CAPTURE(res.p_hat);
    CAPTURE(res.n_undecided);
    CHECK(std::abs(res.p_hat - target) < 3.0 * res.stderr_ + 0.01);
}

TEST_CASE("avoidance of a vanishing hull is certain")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    avoidance_config cfg;
    cfg.n_paths = 50;
    cfg.dt = 1e-3;
    cfg.horizon = 5.0;
    const auto res = avoidance_mc(p, half_disk{2.0, 1e-4}, cfg);
    CHECK(res.p_hat > 0.99);
}

TEST_CASE("hull monotonicity of the avoidance probability")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    avoidance_config cfg;
    cfg.n_paths = 800;
    cfg.dt = 5e-4;
    cfg.seed = 3;
    double prev = 1.1;
    for (double rad : {0.4, 0.9, 1.4}) {
        const auto res = avoidance_mc(p, half_disk{2.0, rad}, cfg);
        CHECK(res.p_hat < prev);
        prev = res.p_hat;
    }
}
