#include "slelab/loewner.hpp"

#include <cmath>

namespace slelab {
namespace loewner {

chain_state evolve(const driving_function& d)
{
    if (d.values.empty())
        throw empty_driving("evolve: driving function has no steps");
    if (!(d.dt > 0.0))
        throw empty_driving("evolve: step size must be positive");

    chain_state s;
    s.pipeline.elements.reserve(d.values.size());
    for (double w : d.values)
        s.pipeline.push_slit(w, d.dt);
    s.capacity = 0.5 * s.pipeline.tail.c1.real();
    s.current_drive = d.values.back();
    return s;
}

map_pipeline build_pipeline(const std::vector<double>& drives,
                            const std::vector<double>& dts)
{
    map_pipeline p;
    p.elements.reserve(drives.size());
    for (std::size_t k = 0; k < drives.size(); ++k)
        p.push_slit(drives[k], dts[k]);
    return p;
}

std::vector<cplx> trace(const driving_function& d)
{
    if (d.values.empty())
        throw empty_driving("trace: driving function has no steps");

    const std::size_t n = d.values.size();
    std::vector<cplx> tips(n + 1);
    tips[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        // tip_k = (e_1 ... e_k)^{-1}(w_{k-1} at the end of step k)
        cplx z = d.values[k - 1];
        for (std::size_t j = k; j-- > 0;)
            z = slit_inverse(z, slit_element{d.values[j], d.dt});
        if (z.imag() < 0.0) z = {z.real(), 0.0};
        tips[k] = z;
    }
    return tips;
}

unzip_result unzip(const std::vector<cplx>& polyline)
{
    if (polyline.size() < 2)
        throw non_simple_curve("unzip: polyline needs at least two points");
    if (std::abs(polyline.front()) > 1e-9)
        throw non_simple_curve("unzip: polyline must start at 0");

    unzip_result r;
    const std::size_t n = polyline.size() - 1;
    r.drives.reserve(n);
    r.dts.reserve(n);
    r.capacities.reserve(n);

    std::vector<cplx> img(polyline.begin() + 1, polyline.end());
    double cap = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx q = img[k];
        const double height = q.imag();
        if (height < -1e-9)
            throw non_simple_curve("unzip: mapped segment fell below the real axis");
        const double drive = q.real();
        const double dt = 0.25 * std::max(height, 0.0) * std::max(height, 0.0);
        const slit_element e{drive, dt};
        for (std::size_t j = k + 1; j < n; ++j) {
            if (img[j].imag() < -1e-9)
                throw non_simple_curve("unzip: curve is not simple at this resolution");
            img[j] = slit_apply(img[j], e);
        }
        r.drives.push_back(drive);
        r.dts.push_back(dt);
        cap += dt;
        r.capacities.push_back(cap);
        r.pipeline.push_slit(drive, dt);
    }
    return r;
}

hull_taylor taylor(const chain_state& s)
{
    hull_taylor t;
    t.g1 = 0.5 * s.capacity; // = c1/4 with Time = c1/2
    t.g2 = s.pipeline.tail.c2;
    return t;
}

} // namespace loewner
} // namespace slelab
