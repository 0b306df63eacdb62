#include "doctest.h"

#include <cmath>

#include "slelab/sle.hpp"
#include "slelab/stats.hpp"

using namespace slelab;

TEST_CASE("parameter map at the reference points")
{
    const auto p1 = sle::params_from_theta(1.0);
    CHECK(p1.kappa == doctest::Approx(4.0));
    CHECK(p1.c == doctest::Approx(1.0));
    CHECK(p1.h == doctest::Approx(0.25));

    const auto p2 = sle::params_from_theta(2.0 / 3.0);
    CHECK(p2.kappa == doctest::Approx(8.0 / 3.0));
    CHECK(p2.c == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p2.h == doctest::Approx(0.625));

    const auto p3 = sle::params_from_theta(0.5);
    CHECK(p3.kappa == doctest::Approx(2.0));
    CHECK(p3.c == doctest::Approx(-2.0));
    CHECK(p3.h == doctest::Approx(1.0));
}

TEST_CASE("parameter map rejects out-of-range arguments")
{
    CHECK_THROWS_AS((void)sle::params_from_theta(0.0), out_of_range);
    CHECK_THROWS_AS((void)sle::params_from_theta(1.5), out_of_range);
    CHECK_THROWS_AS((void)sle::params_from_kappa(4.5), out_of_range);
    CHECK_THROWS_AS((void)sle::params_from_kappa(-1.0), out_of_range);
}

TEST_CASE("kappa and theta accessors agree")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    CHECK(p.theta == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("increment variance matches kappa dt")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    const double dt = 1e-3;
    const auto d = sle::sample_driving(p, dt, 1000.0, 99, 0);
    std::vector<double> inc(d.values.size() - 1);
    for (std::size_t k = 0; k + 1 < d.values.size(); ++k)
        inc[k] = d.values[k + 1] - d.values[k];
    double var = 0.0;
    for (double x : inc) var += x * x;
    var /= static_cast<double>(inc.size());
    CHECK(std::abs(var - p.kappa * dt) < 0.01 * p.kappa * dt);
}

TEST_CASE("near-zero kappa freezes the driving")
{
    const auto p = sle::params_from_theta(1e-12);
    const auto d = sle::sample_driving(p, 0.01, 1.0, 1, 0);
    for (double v : d.values) CHECK(std::abs(v) < 1e-5);
}

TEST_CASE("distinct path ids decorrelate")
{
    const auto p = sle::params_from_kappa(2.0);
    const double dt = 1e-3;
    const auto a = sle::sample_driving(p, dt, 100.0, 7, 0);
    const auto b = sle::sample_driving(p, dt, 100.0, 7, 1);
    const std::size_t n = a.values.size() - 1;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = a.values[k + 1] - a.values[k];
        const double y = b.values[k + 1] - b.values[k];
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double rho = sxy / std::sqrt(sxx * syy);
    CHECK(std::abs(rho) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("drivings reproduce bit-identically")
{
    const auto p = sle::params_from_kappa(3.0);
    const auto a = sle::sample_driving(p, 1e-3, 0.5, 2024, 5);
    const auto b = sle::sample_driving(p, 1e-3, 0.5, 2024, 5);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k)
        CHECK(a.values[k] == b.values[k]);
}

TEST_CASE("rescale_driving identities")
{
    const auto p = sle::params_from_kappa(2.0);
    const auto d = sle::sample_driving(p, 1e-3, 0.2, 31, 2);

    const auto same = sle::rescale_driving(d, 1.0);
    CHECK(same.dt == d.dt);
    for (std::size_t k = 0; k < d.values.size(); ++k)
        CHECK(same.values[k] == d.values[k]);

    const auto ab = sle::rescale_driving(sle::rescale_driving(d, 2.0), 3.0);
    const auto once = sle::rescale_driving(d, 6.0);
    CHECK(ab.dt == doctest::Approx(once.dt).epsilon(1e-15));
    for (std::size_t k = 0; k < d.values.size(); ++k)
        CHECK(ab.values[k] == doctest::Approx(once.values[k]).epsilon(1e-14));
}

TEST_CASE("trace of a rescaled driving is the scaled trace")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    const auto d = sle::sample_driving(p, 1e-3, 0.2, 8, 3);
    const double lambda = 1.7;
    const auto tips = loewner::trace(d);
    const auto scaled_tips = loewner::trace(sle::rescale_driving(d, lambda));
    for (std::size_t k = 0; k < tips.size(); ++k)
        CHECK(std::abs(scaled_tips[k] - std::sqrt(lambda) * tips[k]) <=
              1e-9 * std::max(1.0, std::abs(tips[k])));
}

TEST_CASE("kappa = 8/3 traces stay simple at desk scale")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    for (std::uint64_t id = 0; id < 3; ++id) {
        const auto tips = sle::sample_trace(p, 5e-4, 0.25, 12, id);
        double min_gap = 1e300;
        for (std::size_t i = 0; i + 1 < tips.size(); ++i)
            for (std::size_t j = i + 2; j + 1 < tips.size(); ++j) {
                // distance between non-adjacent segments, midpoint proxy
                const cplx mi = 0.5 * (tips[i] + tips[i + 1]);
                const cplx mj = 0.5 * (tips[j] + tips[j + 1]);
                min_gap = std::min(min_gap, std::abs(mi - mj));
            }
        CHECK(min_gap > 0.0);
    }
}

TEST_CASE("tip statistics: reflection symmetry and sqrt(t) growth")
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    const std::size_t n = 400;
    std::size_t positive = 0;
    std::vector<double> ratio1, ratio4;
    for (std::uint64_t id = 0; id < n; ++id) {
        const auto t1 = sle::sample_trace(p, 2e-3, 0.2, 555, id);
        if (t1.back().real() > 0.0) ++positive;
        ratio1.push_back(t1.back().imag() / std::sqrt(0.2));
        const auto t4 = sle::sample_trace(p, 2e-3, 0.8, 556, id);
        ratio4.push_back(t4.back().imag() / std::sqrt(0.8));
    }
    // sign test at ~3 sigma
    const double dev = std::abs(static_cast<double>(positive) - n / 2.0);
    CHECK(dev <= 3.0 * std::sqrt(n / 4.0));
    // median Im(tip)/sqrt(t) stable across t within 10%
    const double m1 = quantile(ratio1, 0.5);
    const double m4 = quantile(ratio4, 0.5);
    CHECK(std::abs(m1 - m4) / m1 < 0.10);
}
