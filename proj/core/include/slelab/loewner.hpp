#pragma once

// Discrete chordal Loewner evolution in the upper half-plane: driving
// function -> hull uniformizer, capacity, Taylor coefficients and trace,
// plus the inverse problem (unzipping a simple curve to its driving
// function by vertical-slit approximation).
//
// Conventions. One step of Loewner time dt with constant driving w is the
// exact slit map u -> w + sqrt((u-w)^2 + 4 dt) (dg/dt = 2/(g - w_t)); it
// adds 2 dt to the 1/z tail coefficient. Capacity is reported through
// Time(K) = tail.c1 / 2, so Time(K_t) = t exactly for every driving
// function and step size. HullTaylor reports g1 = Time/2 (the convention
// Time = 2 g1) and g2 = the raw 1/z^2 tail coefficient.

#include <vector>

#include "slelab/cgeom.hpp"

namespace slelab {
namespace loewner {

// Piecewise-constant driving on a uniform grid; values[k] is held on
// [k dt, (k+1) dt).
struct driving_function {
    double dt = 0.0;
    std::vector<double> values;

    double total_time() const { return dt * static_cast<double>(values.size()); }
};

struct chain_state {
    map_pipeline pipeline; // forward, hydrodynamically normalized
    double capacity = 0.0; // Time(K)
    double current_drive = 0.0;
    std::vector<cplx> trace; // filled by trace(); empty otherwise
};

struct hull_taylor {
    double g1 = 0.0; // Time/2, i.e. the gamma^(-1) of Time = 2 gamma^(-1)
    cplx g2{};       // raw 1/z^2 coefficient of the uniformizer
};

struct unzip_result {
    std::vector<double> drives;
    std::vector<double> dts;        // per-step Loewner times
    std::vector<double> capacities; // cumulative Time after each step
    map_pipeline pipeline;          // forward pipeline of the recorded slits
};

// Compose the slit maps of a driving function. Throws empty_driving.
chain_state evolve(const driving_function& d);

// Pipeline of explicit (drive, dt) steps in time order.
map_pipeline build_pipeline(const std::vector<double>& drives,
                            const std::vector<double>& dts);

// Tips of the discrete hull: tip_k = (first k elements)^{-1}(w_k), tip_0 = 0.
// O(n^2) in the number of steps.
std::vector<cplx> trace(const driving_function& d);

// Inverse problem: map each successive segment of a simple polyline
// (starting at 0, Im >= 0) to a vertical slit. Throws non_simple_curve if
// a mapped segment lands below the axis beyond tolerance.
unzip_result unzip(const std::vector<cplx>& polyline);

hull_taylor taylor(const chain_state& s);

} // namespace loewner
} // namespace slelab
