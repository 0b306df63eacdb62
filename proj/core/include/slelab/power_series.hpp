#pragma once

// Truncated complex power series z(s) = sum c_k s^k, fixed order, dense
// coefficients. Enough arithmetic to push a local Taylor expansion through
// slit-map pipelines and to invert normalized series (Lagrange reversion
// via Newton iteration).

#include <vector>

#include "slelab/cgeom.hpp"

namespace slelab {

struct power_series {
    std::vector<cplx> c; // c[k] multiplies s^k

    power_series() = default;
    explicit power_series(std::size_t order) : c(order + 1, cplx{}) {}

    std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }
    cplx operator[](std::size_t k) const { return k < c.size() ? c[k] : cplx{}; }

    static power_series constant(cplx v, std::size_t order);
    static power_series identity(std::size_t order); // s
};

power_series operator+(const power_series& a, const power_series& b);
power_series operator-(const power_series& a, const power_series& b);
power_series operator*(const power_series& a, const power_series& b);
power_series operator+(const power_series& a, cplx v);
power_series operator-(const power_series& a, cplx v);
power_series operator*(const power_series& a, cplx v);

// 1/a; requires a[0] != 0.
power_series reciprocal(const power_series& a);

// sqrt(a) with the branch whose constant term is `s0` (s0^2 == a[0]).
power_series sqrt_with_branch(const power_series& a, cplx s0);

// a(b(s)); requires b[0] == 0.
power_series compose(const power_series& a, const power_series& b);

// Inverse series of a with a[0] == 0, a[1] != 0: a(inv(s)) = s.
power_series reverse(const power_series& a);

// Push the series through a pipeline (series analogue of map_pipeline::apply).
power_series apply_series(const map_pipeline& p, const power_series& s);

} // namespace slelab
