#pragma once

// Small statistics and deterministic-parallelism helpers shared by the
// Monte Carlo modules.

#include <cstddef>
#include <functional>
#include <vector>

namespace slelab {

// Pairwise (tree) summation in fixed index order.
double pairwise_sum(const std::vector<double>& x);

struct mean_stderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

mean_stderr summarize(const std::vector<double>& x);

// Quantile of a copy of x by linear interpolation, q in [0, 1].
double quantile(std::vector<double> x, double q);

// Ordinary least squares y ~ a + b x; returns {a, b, r2}.
struct linear_fit_result {
    double intercept = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
};
linear_fit_result linear_fit(const std::vector<double>& x,
                             const std::vector<double>& y);

// Least squares through the origin, y ~ b x; returns {0, b, r2}.
linear_fit_result linear_fit_origin(const std::vector<double>& x,
                                    const std::vector<double>& y);

// Run fn(i) for i in [0, n) on `threads` workers (block partition).
// Results must be written to per-index slots by the caller; the partition
// is deterministic, so reductions done afterwards in index order are
// independent of the thread count.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

// Worker-count default: LAB_THREADS env var, else hardware concurrency.
unsigned default_threads();

} // namespace slelab
