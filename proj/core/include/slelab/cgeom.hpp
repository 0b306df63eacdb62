#pragma once

// Complex-analytic primitives for the half-plane Loewner machinery:
// elementary vertical-slit maps, Moebius maps, order-3 derivative jets
// with the Schwarzian chain rule, and Laurent-tail bookkeeping at infinity.

#include <complex>
#include <variant>
#include <vector>

#include "slelab/errors.hpp"

namespace slelab {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Order-3 jets
// ---------------------------------------------------------------------------

// Value and first three complex derivatives of a holomorphic map at a point.
struct jet3 {
    cplx f{};
    cplx d1{1.0};
    cplx d2{};
    cplx d3{};

    static jet3 identity(cplx z) { return {z, 1.0, 0.0, 0.0}; }
};

// Jet of outer∘inner at the inner basepoint; `outer` must be based at inner.f.
// Faa di Bruno to order 3.
inline jet3 compose(const jet3& outer, const jet3& inner)
{
    jet3 r;
    r.f  = outer.f;
    r.d1 = outer.d1 * inner.d1;
    r.d2 = outer.d1 * inner.d2 + outer.d2 * inner.d1 * inner.d1;
    r.d3 = outer.d1 * inner.d3 + 3.0 * outer.d2 * inner.d1 * inner.d2
         + outer.d3 * inner.d1 * inner.d1 * inner.d1;
    return r;
}

// S_f = f'''/f' - (3/2)(f''/f')^2.
inline cplx schwarzian(const jet3& j)
{
    if (std::abs(j.d1) < 1e-14)
        throw singular_jet("schwarzian: |f'| < 1e-14");
    const cplx q = j.d2 / j.d1;
    return j.d3 / j.d1 - 1.5 * q * q;
}

// Jet of the inverse map at f(z), from the jet of f at z.
inline jet3 invert(const jet3& j)
{
    if (std::abs(j.d1) < 1e-14)
        throw singular_jet("invert: |f'| < 1e-14");
    jet3 r;
    const cplx g1 = 1.0 / j.d1;
    r.f  = j.f;       // caller re-bases; value slot holds the image point
    r.d1 = g1;
    r.d2 = -j.d2 * g1 * g1 * g1;
    r.d3 = (3.0 * j.d2 * j.d2 - j.d1 * j.d3) * g1 * g1 * g1 * g1 * g1;
    return r;
}

// ---------------------------------------------------------------------------
// Elementary maps
// ---------------------------------------------------------------------------

// One discrete Loewner step: the forward map removes the vertical segment
// [drive, drive + 2i*sqrt(dt)] from H. dt is the Loewner time of the step
// under dg/dt = 2/(g - w); the map is z -> drive + sqrt((z-drive)^2 + 4 dt)
// and contributes 2*dt to the 1/z Laurent coefficient.
struct slit_element {
    double drive = 0.0;
    double dt = 0.0;
};

struct mobius_element {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
};

cplx slit_apply(cplx z, const slit_element& e);
cplx slit_inverse(cplx u, const slit_element& e);
jet3 slit_apply_jet(cplx z, const slit_element& e);
jet3 slit_inverse_jet(cplx u, const slit_element& e);

cplx mobius_apply(cplx z, const mobius_element& m);
jet3 mobius_jet(cplx z, const mobius_element& m);
mobius_element mobius_inverse(const mobius_element& m);

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

// Coefficients of z + c0 + c1/z + c2/z^2 + c3/z^3 at infinity. Only
// meaningful (valid == true) for forward pipelines of slit elements and
// translations; a hydrodynamically normalized pipeline has c0 = 0 and
// real c1 >= 0.
struct laurent_tail {
    cplx c0{}, c1{}, c2{}, c3{};
    bool valid = true;
};

enum class pipeline_dir { forward, inverse };

using pipeline_element = std::variant<slit_element, mobius_element>;

// Composable sequence of elementary conformal maps. Forward direction
// applies elements in storage (time) order; inverse applies element
// inverses in reverse order. Immutable after construction in practice:
// all evaluation is const and thread-safe.
struct map_pipeline {
    std::vector<pipeline_element> elements;
    pipeline_dir direction = pipeline_dir::forward;
    laurent_tail tail;
    double c1_compensation = 0.0; // Kahan carry for the capacity sum

    void push_slit(double drive, double dt);
    void push_mobius(const mobius_element& m);

    cplx apply(cplx z) const;
    jet3 jet_at(cplx z) const;

    // F(z) - z for forward all-slit pipelines, accumulated per element in a
    // cancellation-free form; used for far-field tail fits.
    cplx apply_deviation(cplx z) const;

    // Same pipeline viewed in the opposite direction.
    map_pipeline inverted() const;

    std::size_t size() const { return elements.size(); }
    bool empty() const { return elements.empty(); }
};

// Pipeline evaluation of the map and its first three derivatives.
inline jet3 jet_through(const map_pipeline& p, cplx z) { return p.jet_at(z); }

} // namespace slelab
