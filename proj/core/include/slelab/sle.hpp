#pragma once

// Chordal SLE_kappa sampling in the half-plane: the (theta, kappa, c, h)
// parameter correspondence, Brownian driving generation on the Loewner
// time grid, trace sampling and scaling covariance.

#include <cstdint>
#include <functional>

#include "slelab/loewner.hpp"
#include "slelab/rng.hpp"

namespace slelab {
namespace sle {

// kappa = 4 theta, c = (3 - 2 theta)(3 - 2/theta), h = (3/theta - 2)/4.
// Restricted to theta in (0, 1], the simple-curve regime kappa <= 4.
struct sle_params {
    double theta;
    double kappa;
    double c;
    double h;
};

sle_params params_from_theta(double theta); // throws out_of_range
sle_params params_from_kappa(double kappa); // throws out_of_range

struct path_batch {
    std::uint64_t seed = 0;
    std::size_t n_paths = 0;
    double dt = 0.0;
    double horizon = 0.0;
};

// Driving with independent Normal(0, kappa dt) increments, w_0 = 0.
// Bit-identical for equal (params, dt, horizon, seed, path_id).
loewner::driving_function sample_driving(const sle_params& p, double dt,
                                         double horizon, std::uint64_t seed,
                                         std::uint64_t path_id);

// Trace polyline of a sampled driving (kappa <= 4 enforced at parameter
// construction). An optional predicate on the partial driving stops
// generation early; the trace is computed on the generated prefix.
std::vector<cplx> sample_trace(const sle_params& p, double dt, double horizon,
                               std::uint64_t seed, std::uint64_t path_id);

// w'(s) = sqrt(lambda) w(s/lambda) on the grid with step lambda dt.
loewner::driving_function rescale_driving(const loewner::driving_function& d,
                                          double lambda);

} // namespace sle
} // namespace slelab
