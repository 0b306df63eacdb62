#include "slelab/power_series.hpp"

#include <cmath>

namespace slelab {

power_series power_series::constant(cplx v, std::size_t order)
{
    power_series r(order);
    r.c[0] = v;
    return r;
}

power_series power_series::identity(std::size_t order)
{
    power_series r(order);
    if (order >= 1) r.c[1] = 1.0;
    return r;
}

power_series operator+(const power_series& a, const power_series& b)
{
    power_series r(std::max(a.order(), b.order()));
    for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] = a[k] + b[k];
    return r;
}

power_series operator-(const power_series& a, const power_series& b)
{
    power_series r(std::max(a.order(), b.order()));
    for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] = a[k] - b[k];
    return r;
}

power_series operator*(const power_series& a, const power_series& b)
{
    power_series r(std::max(a.order(), b.order()));
    const std::size_t n = r.c.size();
    for (std::size_t i = 0; i < n && i < a.c.size(); ++i) {
        if (a.c[i] == cplx{}) continue;
        for (std::size_t j = 0; i + j < n && j < b.c.size(); ++j)
            r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

power_series operator+(const power_series& a, cplx v)
{
    power_series r = a;
    r.c[0] += v;
    return r;
}

power_series operator-(const power_series& a, cplx v) { return a + (-v); }

power_series operator*(const power_series& a, cplx v)
{
    power_series r = a;
    for (auto& x : r.c) x *= v;
    return r;
}

power_series reciprocal(const power_series& a)
{
    if (a[0] == cplx{})
        throw precondition_error("power_series reciprocal: zero constant term");
    power_series r(a.order());
    const cplx inv0 = 1.0 / a.c[0];
    r.c[0] = inv0;
    for (std::size_t k = 1; k < r.c.size(); ++k) {
        cplx s{};
        for (std::size_t j = 1; j <= k && j < a.c.size(); ++j)
            s += a.c[j] * r.c[k - j];
        r.c[k] = -inv0 * s;
    }
    return r;
}

power_series sqrt_with_branch(const power_series& a, cplx s0)
{
    if (s0 == cplx{})
        throw precondition_error("power_series sqrt: zero branch value");
    power_series r(a.order());
    r.c[0] = s0;
    // (sum r)^2 = a, solved coefficient by coefficient.
    for (std::size_t k = 1; k < r.c.size(); ++k) {
        cplx s{};
        for (std::size_t j = 1; j < k; ++j) s += r.c[j] * r.c[k - j];
        r.c[k] = (a[k] - s) / (2.0 * s0);
    }
    return r;
}

power_series compose(const power_series& a, const power_series& b)
{
    if (b[0] != cplx{})
        throw precondition_error("power_series compose: inner constant term must vanish");
    const std::size_t ord = std::max(a.order(), b.order());
    // Horner over the outer coefficients.
    power_series acc = power_series::constant(a[a.order()], ord);
    for (std::size_t k = a.order(); k-- > 0;) {
        acc = acc * b;
        acc.c[0] += a[k];
    }
    return acc;
}

power_series reverse(const power_series& a)
{
    if (a[0] != cplx{} || a[1] == cplx{})
        throw precondition_error("power_series reverse: need a(0)=0, a'(0)!=0");
    const std::size_t ord = a.order();
    power_series g(ord);
    g.c[1] = 1.0 / a.c[1];
    // Fixed-point refinement: g <- g - (a∘g - id) / a'(g), coefficient exact
    // to order k after k iterations; ord iterations are plenty.
    power_series id = power_series::identity(ord);
    for (std::size_t it = 0; it < ord; ++it) {
        power_series err = compose(a, g) - id;
        // divide by a'(g)
        power_series ap(ord);
        for (std::size_t k = 1; k < a.c.size(); ++k)
            ap.c[k - 1] = a.c[k] * static_cast<double>(k);
        power_series denom = compose(ap, g);
        g = g - err * reciprocal(denom);
    }
    return g;
}

power_series apply_series(const map_pipeline& p, const power_series& s)
{
    power_series z = s;
    auto push_slit_fwd = [&](const slit_element& e) {
        const power_series v = z - cplx(e.drive);
        const power_series arg = v * v + cplx(4.0 * e.dt);
        const cplx s0 = slit_apply(z[0], e) - e.drive;
        z = sqrt_with_branch(arg, s0) + cplx(e.drive);
    };
    auto push_slit_inv = [&](const slit_element& e) {
        const power_series v = z - cplx(e.drive);
        const power_series arg = v * v - cplx(4.0 * e.dt);
        const cplx s0 = slit_inverse(z[0], e) - e.drive;
        z = sqrt_with_branch(arg, s0) + cplx(e.drive);
    };
    auto push_mob = [&](const mobius_element& m) {
        z = (z * m.a + m.b) * reciprocal(z * m.c + m.d);
    };
    if (p.direction == pipeline_dir::forward) {
        for (const auto& e : p.elements) {
            if (const auto* se = std::get_if<slit_element>(&e))
                push_slit_fwd(*se);
            else
                push_mob(std::get<mobius_element>(e));
        }
    } else {
        for (auto it = p.elements.rbegin(); it != p.elements.rend(); ++it) {
            if (const auto* se = std::get_if<slit_element>(&*it))
                push_slit_inv(*se);
            else
                push_mob(mobius_inverse(std::get<mobius_element>(*it)));
        }
    }
    return z;
}

} // namespace slelab
