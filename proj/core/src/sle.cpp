#include "slelab/sle.hpp"

#include <cmath>

namespace slelab {
namespace sle {

sle_params params_from_theta(double theta)
{
    if (!(theta > 0.0) || theta > 1.0)
        throw out_of_range("params_from_theta: theta must lie in (0, 1]");
    sle_params p;
    p.theta = theta;
    p.kappa = 4.0 * theta;
    p.c     = (3.0 - 2.0 * theta) * (3.0 - 2.0 / theta);
    p.h     = (3.0 / theta - 2.0) / 4.0;
    return p;
}

sle_params params_from_kappa(double kappa)
{
    if (!(kappa > 0.0) || kappa > 4.0)
        throw out_of_range("params_from_kappa: kappa must lie in (0, 4]");
    return params_from_theta(kappa / 4.0);
}

loewner::driving_function sample_driving(const sle_params& p, double dt,
                                         double horizon, std::uint64_t seed,
                                         std::uint64_t path_id)
{
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw out_of_range("sample_driving: dt and horizon must be positive");
    const auto n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    const double sd = std::sqrt(p.kappa * dt);
    const counter_rng rng{seed};

    loewner::driving_function d;
    d.dt = dt;
    d.values.resize(n);
    double w = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        d.values[k] = w; // value held on [k dt, (k+1) dt)
        w += sd * rng.normal(path_id, k);
    }
    return d;
}

std::vector<cplx> sample_trace(const sle_params& p, double dt, double horizon,
                               std::uint64_t seed, std::uint64_t path_id)
{
    return loewner::trace(sample_driving(p, dt, horizon, seed, path_id));
}

loewner::driving_function rescale_driving(const loewner::driving_function& d,
                                          double lambda)
{
    if (!(lambda > 0.0))
        throw out_of_range("rescale_driving: lambda must be positive");
    loewner::driving_function r;
    r.dt = lambda * d.dt;
    r.values.resize(d.values.size());
    const double s = std::sqrt(lambda);
    for (std::size_t k = 0; k < d.values.size(); ++k)
        r.values[k] = s * d.values[k];
    return r;
}

} // namespace sle
} // namespace slelab
