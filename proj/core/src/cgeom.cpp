#include "slelab/cgeom.hpp"

#include <cmath>

namespace slelab {

namespace {

constexpr double kJetTol = 1e-12;

// Branch of sqrt((z-w)^2 + 4dt) that maps H\slit into H: principal square
// root, then flip so Im >= 0; when the value is real, its sign follows
// Re(z - w) (right of the slit positive, left negative, base point +).
cplx slit_sqrt_forward(cplx z, const slit_element& e)
{
    const cplx v = z - e.drive;
    cplx s = std::sqrt(v * v + 4.0 * e.dt);
    if (s.imag() < 0.0) {
        s = -s;
    } else if (s.imag() == 0.0) {
        const double want = v.real() < 0.0 ? -1.0 : 1.0;
        if (s.real() * want < 0.0) s = -s;
    }
    return s;
}

// Branch of sqrt((u-w)^2 - 4dt) continuous on the closed half-plane with
// the two branch points w +- 2 sqrt(dt) on the real axis: product of
// principal roots of the two linear factors.
cplx slit_sqrt_inverse(cplx u, const slit_element& e)
{
    const double r = 2.0 * std::sqrt(e.dt);
    const cplx v = u - e.drive;
    return std::sqrt(v - r) * std::sqrt(v + r);
}

} // namespace

cplx slit_apply(cplx z, const slit_element& e)
{
    return e.drive + slit_sqrt_forward(z, e);
}

cplx slit_inverse(cplx u, const slit_element& e)
{
    return e.drive + slit_sqrt_inverse(u, e);
}

jet3 slit_apply_jet(cplx z, const slit_element& e)
{
    const cplx s = slit_sqrt_forward(z, e);
    if (std::abs(s) < kJetTol)
        throw domain_error("slit_apply_jet: evaluation at the slit tip");
    const cplx v = z - e.drive;
    jet3 j;
    j.f  = e.drive + s;
    j.d1 = v / s;
    j.d2 = 4.0 * e.dt / (s * s * s);
    j.d3 = -12.0 * e.dt * v / (s * s * s * s * s);
    return j;
}

jet3 slit_inverse_jet(cplx u, const slit_element& e)
{
    const cplx q = slit_sqrt_inverse(u, e);
    if (std::abs(q) < kJetTol)
        throw domain_error("slit_inverse_jet: evaluation at a slit base point");
    const cplx v = u - e.drive;
    jet3 j;
    j.f  = e.drive + q;
    j.d1 = v / q;
    j.d2 = -4.0 * e.dt / (q * q * q);
    j.d3 = 12.0 * e.dt * v / (q * q * q * q * q);
    return j;
}

cplx mobius_apply(cplx z, const mobius_element& m)
{
    return (m.a * z + m.b) / (m.c * z + m.d);
}

jet3 mobius_jet(cplx z, const mobius_element& m)
{
    const cplx det = m.a * m.d - m.b * m.c;
    const cplx den = m.c * z + m.d;
    if (std::abs(den) < kJetTol)
        throw domain_error("mobius_jet: evaluation at the pole");
    jet3 j;
    j.f  = (m.a * z + m.b) / den;
    j.d1 = det / (den * den);
    j.d2 = -2.0 * m.c * det / (den * den * den);
    j.d3 = 6.0 * m.c * m.c * det / (den * den * den * den);
    return j;
}

mobius_element mobius_inverse(const mobius_element& m)
{
    return {m.d, -m.b, -m.c, m.a};
}

void map_pipeline::push_slit(double drive, double dt)
{
    elements.push_back(slit_element{drive, dt});
    if (tail.valid) {
        // tail of g∘F from tail of F, with g(u) = u + b1/u + b2/u^2 + b3/u^3,
        // b1 = 2dt, b2 = 2dt*w, b3 = 2dt*w^2 - 2dt^2.
        const double w = drive;
        const cplx a0 = tail.c0, a1 = tail.c1, a2 = tail.c2, a3 = tail.c3;
        const double b1 = 2.0 * dt;
        const double b2 = 2.0 * dt * w;
        const double b3 = 2.0 * dt * w * w - 2.0 * dt * dt;
        tail.c0 = a0;
        // compensated sum: the capacity contract Time(K_t) = t is held to
        // 1e-12 over as many as 1e5 composed steps
        const double y = b1 - c1_compensation;
        const double s = a1.real() + y;
        c1_compensation = (s - a1.real()) - y;
        tail.c1 = {s, a1.imag()};
        tail.c2 = a2 + b2 - b1 * a0;
        tail.c3 = a3 + b3 - 2.0 * b2 * a0 + b1 * (a0 * a0 - a1);
    }
}

void map_pipeline::push_mobius(const mobius_element& m)
{
    elements.push_back(m);
    const bool translation = m.c == 0.0 && m.a == m.d && m.a != 0.0;
    if (translation) {
        tail.c0 += m.b / m.a;
    } else {
        tail.valid = false;
    }
}

cplx map_pipeline::apply(cplx z) const
{
    if (direction == pipeline_dir::forward) {
        for (const auto& e : elements) {
            if (const auto* s = std::get_if<slit_element>(&e))
                z = slit_apply(z, *s);
            else
                z = mobius_apply(z, std::get<mobius_element>(e));
        }
    } else {
        for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
            if (const auto* s = std::get_if<slit_element>(&*it))
                z = slit_inverse(z, *s);
            else
                z = mobius_apply(z, mobius_inverse(std::get<mobius_element>(*it)));
        }
    }
    return z;
}

cplx map_pipeline::apply_deviation(cplx z) const
{
    if (direction != pipeline_dir::forward)
        throw precondition_error("apply_deviation: forward pipelines only");
    cplx dev{};
    cplx cur = z;
    for (const auto& e : elements) {
        const auto* s = std::get_if<slit_element>(&e);
        if (!s)
            throw precondition_error("apply_deviation: all-slit pipelines only");
        // g(u) - u = 4 dt / (s + (u - w)) with s the branch-correct root
        const cplx v = cur - s->drive;
        const cplx root = slit_apply(cur, *s) - s->drive;
        dev += 4.0 * s->dt / (root + v);
        cur = s->drive + root;
    }
    return dev;
}

jet3 map_pipeline::jet_at(cplx z) const
{
    jet3 j = jet3::identity(z);
    if (direction == pipeline_dir::forward) {
        for (const auto& e : elements) {
            const jet3 step = std::holds_alternative<slit_element>(e)
                ? slit_apply_jet(j.f, std::get<slit_element>(e))
                : mobius_jet(j.f, std::get<mobius_element>(e));
            j = compose(step, j);
        }
    } else {
        for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
            const jet3 step = std::holds_alternative<slit_element>(*it)
                ? slit_inverse_jet(j.f, std::get<slit_element>(*it))
                : mobius_jet(j.f, mobius_inverse(std::get<mobius_element>(*it)));
            j = compose(step, j);
        }
    }
    return j;
}

map_pipeline map_pipeline::inverted() const
{
    map_pipeline r = *this;
    r.direction = direction == pipeline_dir::forward ? pipeline_dir::inverse
                                                     : pipeline_dir::forward;
    return r;
}

} // namespace slelab
