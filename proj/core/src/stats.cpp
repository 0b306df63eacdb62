#include "slelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace slelab {

double pairwise_sum(const std::vector<double>& x)
{
    std::function<double(std::size_t, std::size_t)> rec =
        [&](std::size_t lo, std::size_t hi) -> double {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += x[i];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return x.empty() ? 0.0 : rec(0, x.size());
}

mean_stderr summarize(const std::vector<double>& x)
{
    mean_stderr r;
    r.n = x.size();
    if (r.n == 0) return r;
    r.mean = pairwise_sum(x) / static_cast<double>(r.n);
    if (r.n == 1) return r;
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.stderr_ = std::sqrt(ss / (static_cast<double>(r.n) *
                                static_cast<double>(r.n - 1)));
    return r;
}

double quantile(std::vector<double> x, double q)
{
    if (x.empty()) return 0.0;
    std::sort(x.begin(), x.end());
    const double pos = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return x[lo] * (1.0 - frac) + x[hi] * frac;
}

linear_fit_result linear_fit(const std::vector<double>& x,
                             const std::vector<double>& y)
{
    linear_fit_result r;
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2 || x.size() != y.size()) return r;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cxy = sxy - sx * sy / n;
    if (vx <= 0.0) return r;
    r.slope = cxy / vx;
    r.intercept = (sy - r.slope * sx) / n;
    r.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
    return r;
}

linear_fit_result linear_fit_origin(const std::vector<double>& x,
                                    const std::vector<double>& y)
{
    linear_fit_result r;
    if (x.empty() || x.size() != y.size()) return r;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
    }
    if (sxx <= 0.0) return r;
    r.slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - r.slope * x[i];
        ss_res += e * e;
    }
    r.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return r;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn)
{
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned nw = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += nw) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

unsigned default_threads()
{
    if (const char* env = std::getenv("LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

} // namespace slelab
