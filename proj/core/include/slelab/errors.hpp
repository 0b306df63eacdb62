#pragma once

#include <stdexcept>
#include <string>

namespace slelab {

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct domain_error : error {            // evaluation point outside map domain
    using error::error;
};
struct singular_jet : error {            // vanishing first derivative
    using error::error;
};
struct empty_driving : error {           // evolve() on an empty driving function
    using error::error;
};
struct non_simple_curve : error {        // unzip hit a self-intersecting polyline
    using error::error;
};
struct invalid_hull : error {            // reference hull touches or contains 0
    using error::error;
};
struct hull_hit : error {                // trace prefix enters the reference hull
    using error::error;
};
struct support_error : error {           // metric difference not compactly supported
    using error::error;
};
struct pole_on_contour : error {         // metric singular on an integration contour
    using error::error;
};
struct branch_error : error {            // log-ratio winds too fast between contour nodes
    using error::error;
};
struct precondition_error : error {      // violated analytic precondition
    using error::error;
};
struct geometry_error : error {          // bad annular domain geometry
    using error::error;
};
struct boundary_proximity : error {      // metric sample too close to a boundary
    using error::error;
};
struct extraction_error : error {        // interface walk failed to terminate
    using error::error;
};
struct out_of_range : error {            // parameter outside admissible interval
    using error::error;
};
struct not_univalent : error {           // coefficient univalence check failed
    using error::error;
};

} // namespace slelab
