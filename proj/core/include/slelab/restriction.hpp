#pragma once

// Restriction-covariance machinery: reference hulls attached to the real
// axis away from 0, their closed-form mapping-out functions, the h-map of a
// trace against a hull, the restriction martingale in the integral form
// r_t = H_t^h exp(-(c/6) \int_0^t S_{h_s}(w_s) ds) extended by zero on hull
// hit, and Monte Carlo estimators of martingale flatness and avoidance
// probability.
//
// Monte Carlo engine: instead of re-unzipping the image of the whole trace
// at every frame, the boundary arc of the reference hull is pushed through
// the discrete Loewner flow step by step; the h-map of the current state is
// the mapping-out function of that evolved arc, recovered by unzipping the
// arc alone. Frames therefore cost O(m^2) in the number of tracked boundary
// points, independent of the path length, and are recomputed from scratch
// at each frame (no incremental drift).

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "slelab/loewner.hpp"
#include "slelab/sle.hpp"
#include "slelab/stats.hpp"

namespace slelab {
namespace restriction {

// ---------------------------------------------------------------------------
// Reference hulls and mapping-out functions
// ---------------------------------------------------------------------------

struct half_disk {
    double x0;  // center on the real axis, != 0
    double rad; // radius, 0 < rad < |x0|
};

struct vertical_slit_hull {
    double x0;     // base point, != 0
    double height; // > 0
};

using reference_hull = std::variant<half_disk, vertical_slit_hull>;

// Closed-form mapping-out data for a reference hull A: Phi maps H\A onto H
// with Phi(0) = 0 and Phi(z) = z + O(1) at infinity, alpha = Phi^{-1}.
// q_tan = alpha'(0) = 1/Phi'(0) (the tangent factor at infinity is 1 by the
// hydrodynamic normalization).
struct alpha_map {
    reference_hull hull;
    double shift;       // Phi_raw(0), subtracted to normalize Phi(0) = 0
    double phi_prime_0; // Phi'(0)
    double d_alpha_0;   // alpha'(0)
    double q_tan;       // = d_alpha_0

    cplx map_out(cplx z) const;  // Phi
    jet3 map_out_jet(cplx z) const;
    cplx alpha(cplx u) const;    // Phi^{-1}
    jet3 alpha_jet(cplx u) const;

    bool contains(cplx z) const; // closed hull membership
    // Boundary point at parameter s in [0, 1], left real base to right.
    cplx boundary_point(double s) const;
    // Boundary arc of A in H, n interior samples, uniform in parameter.
    std::vector<cplx> boundary_arc(std::size_t n) const;
    double footprint_left() const;
    double footprint_right() const;
    double capacity() const;     // Time(A) of the hull itself
};

alpha_map mapping_out(const reference_hull& hull); // throws invalid_hull

// ---------------------------------------------------------------------------
// Frames and the martingale
// ---------------------------------------------------------------------------

struct restriction_frame {
    double t = 0.0;
    jet3 h_jet;    // jet of h_t at the driving point
    double H = 0.0; // h'(w_t), real and positive while the path avoids A
    double S = 0.0; // Re S_{h_t}(w_t)
};

// Literal route: gamma_K by unzipping the trace prefix, gamma_Ktilde by
// unzipping the Phi-image of the trace prefix, h = gamma_Ktilde ∘ Phi ∘
// gamma_K^{-1}, jet evaluated at w_t. Throws hull_hit if the prefix meets A.
restriction_frame h_frame(const std::vector<cplx>& trace_prefix, double w_t,
                          const alpha_map& a);

// Engine route: h as the mapping-out function of the forward-flow image of
// the hull boundary, by unzipping the image arc (first point of `arc` must
// be its left real base, last its right real base).
restriction_frame frame_from_hull_image(const std::vector<cplx>& arc,
                                        double t, double w_t);

// r_t from a frame history on an increasing grid: H^h exp(-(c/6) ∫ S ds),
// trapezoid rule on the frame grid.
double martingale_value(const std::vector<restriction_frame>& frames,
                        const sle::sle_params& p);

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

struct checkpoint_record {
    double t = 0.0;
    bool alive = false;
    double H = 0.0;
    double schwarz_integral = 0.0;
    double r = 0.0;
};

struct martingale_sample {
    std::uint64_t path_id = 0;
    std::vector<checkpoint_record> checkpoints;
};

struct martingale_row {
    double t = 0.0;
    double mean_r = 0.0;       // E[r_t 1_alive]
    double stderr_r = 0.0;
    double alive_fraction = 0.0;
    double median_H = 0.0;     // over alive paths
};

struct martingale_table {
    double r0 = 0.0; // Phi'(0)^h, exact
    std::vector<martingale_row> rows;
    std::vector<martingale_sample> samples; // filled when keep_samples
};

struct martingale_config {
    std::vector<double> checkpoints;
    std::size_t n_paths = 1000;
    double dt = 2e-4;
    std::uint64_t seed = 1;
    unsigned threads = 0;          // 0 = default_threads()
    double frames_per_unit_time = 50.0;
    std::size_t arc_points = 96;   // tracked boundary samples
    bool keep_samples = false;
};

martingale_table martingale_mc(const sle::sle_params& p,
                               const reference_hull& hull,
                               const martingale_config& cfg);

struct avoidance_result {
    double p_hat = 0.0;
    double stderr_ = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_avoided = 0;
    std::size_t n_undecided = 0; // still unresolved at the horizon (regret)
};

struct avoidance_config {
    std::size_t n_paths = 20000;
    double dt = 1e-4;
    double horizon = 0.0; // 0 = auto: 100 x hull capacity
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::size_t arc_points = 24;
};

// Fraction of SLE_{8/3} traces avoiding the hull; the c = 0 case where the
// limit is exactly Phi'(0)^h. Accepts any kappa <= 4 for experiments.
avoidance_result avoidance_mc(const sle::sle_params& p,
                              const reference_hull& hull,
                              const avoidance_config& cfg);

// ---------------------------------------------------------------------------
// Flow identities
// ---------------------------------------------------------------------------

// Compares (h_{t+delta}(z) - h_t(z))/delta under constant driving with
// h'(x)^2 2/(h(z)-h(x)) - h'(z) 2/(z-x); returns the max relative error
// over the samples.
double flow_derivative_check(const std::optional<loewner::driving_function>& prefix,
                             const alpha_map& a,
                             const std::vector<cplx>& z_samples,
                             double delta_t);

// Time of the alpha-image of a trace prefix (trace viewed inside alpha(H)),
// by unzipping the pointwise alpha-image. Throws hull_hit if the trace
// meets A.
double time_alpha(const std::vector<cplx>& trace_prefix, const alpha_map& a);

} // namespace restriction
} // namespace slelab
