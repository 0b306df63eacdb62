#include "slelab/walls.hpp"

#include <algorithm>
#include <cmath>

#include "slelab/loewner.hpp"
#include "slelab/rng.hpp"
#include "slelab/stats.hpp"

namespace slelab {
namespace walls {

double critical_beta() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

std::int8_t spin_field::spin_or_boundary(int x, int y) const
{
    if (x < 0) return 1;
    if (x >= width) return -1;
    if (y < 0) return x < width / 2 ? 1 : -1;
    if (y >= height) return 0; // free top; never consulted by the walk
    return at(x, y);
}

namespace {

bool is_free_site(const lattice_spec& spec, int x, int y)
{
    return x >= 1 && x <= spec.width - 2 && y >= 1 && y <= spec.height - 1;
}

void fill_boundary(const lattice_spec& spec, spin_field& f)
{
    for (int x = 0; x < spec.width; ++x)
        f.s[x] = x < spec.width / 2 ? 1 : -1; // bottom row
    for (int y = 0; y < spec.height; ++y) {
        f.s[static_cast<std::size_t>(y) * spec.width] = 1;
        f.s[static_cast<std::size_t>(y) * spec.width + spec.width - 1] = -1;
    }
}

} // namespace

std::vector<spin_field> simulate(const lattice_spec& spec,
                                 std::uint64_t chain_id,
                                 std::size_t n_samples)
{
    if (spec.width < 16 || spec.height < 16)
        throw out_of_range("simulate: lattice must be at least 16 x 16");
    const double beta = spec.beta > 0.0 ? spec.beta : critical_beta();
    const int spacing = spec.sweeps > 0 ? spec.sweeps
                                        : std::max(1, spec.thermalization / 4);

    spin_field f;
    f.width = spec.width;
    f.height = spec.height;
    f.s.assign(static_cast<std::size_t>(spec.width) * spec.height, 0);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            f.s[static_cast<std::size_t>(y) * spec.width + x] =
                x < spec.width / 2 ? 1 : -1;
    fill_boundary(spec, f);

    // heat-bath acceptance table over the neighbor sum -4..4
    double p_up[9];
    for (int s = -4; s <= 4; ++s)
        p_up[s + 4] = 1.0 / (1.0 + std::exp(-2.0 * beta * s));

    std::vector<std::pair<int, int>> free_sites;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x)
            if (is_free_site(spec, x, y)) free_sites.emplace_back(x, y);
    const std::size_t n_free = free_sites.size();

    const counter_rng rng{spec.seed};
    std::uint64_t ctr = 0;
    auto sweep = [&](std::size_t count) {
        for (std::size_t u = 0; u < count * n_free; ++u) {
            const std::uint64_t wsite = rng.word(chain_id, ctr, 0);
            const double uu = rng.uniform(chain_id, ctr, 1);
            ++ctr;
            const auto [x, y] = free_sites[wsite % n_free];
            int s = 0;
            s += f.spin_or_boundary(x + 1, y);
            s += f.spin_or_boundary(x - 1, y);
            s += f.spin_or_boundary(x, y + 1);
            s += f.spin_or_boundary(x, y - 1);
            f.s[static_cast<std::size_t>(y) * spec.width + x] =
                uu < p_up[s + 4] ? 1 : -1;
        }
    };

    std::vector<spin_field> out;
    sweep(static_cast<std::size_t>(spec.thermalization));
    out.push_back(f);
    while (out.size() < n_samples) {
        sweep(static_cast<std::size_t>(spacing));
        out.push_back(f);
    }
    return out;
}

interface_path extract_interface(const spin_field& f)
{
    const int w = f.width, h = f.height;
    // dual vertex (x, y), incoming direction d in {0 up, 1 right, 2 down, 3 left}
    int x = w / 2, y = 0, dir = 0;
    const int dx[4] = {0, 1, 0, -1};
    const int dy[4] = {1, 0, -1, 0};

    // cells ahead-left / ahead-right of the directed edge leaving (x, y)
    auto ahead = [&](int d, bool left) {
        int cx = x, cy = y;
        switch (d) {
            case 0: cx = left ? x - 1 : x; cy = y; break;
            case 1: cx = x; cy = left ? y : y - 1; break;
            case 2: cx = left ? x : x - 1; cy = y - 1; break;
            default: cx = x - 1; cy = left ? y - 1 : y; break;
        }
        return f.spin_or_boundary(cx, cy);
    };

    interface_path path;
    path.dual_points.emplace_back(x, y);
    const long max_steps = 4L * w * h;
    for (long step = 0; step < max_steps; ++step) {
        if (y == h) {
            const double scale = 4.0 / static_cast<double>(w);
            path.rescaled.reserve(path.dual_points.size());
            const double xc = w / 2;
            for (const cplx& p : path.dual_points)
                path.rescaled.emplace_back((p.real() - xc) * scale,
                                           p.imag() * scale);
            return path;
        }
        const int sl = ahead(dir, true);
        const int sr = ahead(dir, false);
        if (sl > 0 && sr < 0) {
            // straight
        } else if (sl > 0 && sr > 0) {
            dir = (dir + 1) % 4; // turn right
        } else {
            // both minus, or the ambiguous (-,+) crossing: left turn
            dir = (dir + 3) % 4;
        }
        x += dx[dir];
        y += dy[dir];
        path.dual_points.emplace_back(x, y);
    }
    throw extraction_error("extract_interface: walk did not terminate");
}

diffusivity_result diffusivity(const std::vector<std::vector<cplx>>& paths,
                               std::uint64_t seed)
{
    if (paths.size() < 8)
        throw precondition_error("diffusivity: need more paths");

    struct unzipped {
        std::vector<double> drives;
        std::vector<double> caps;
    };
    std::vector<unzipped> uz(paths.size());
    std::vector<double> totals(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto r = loewner::unzip(paths[i]);
        uz[i].drives = r.drives;
        uz[i].caps = r.capacities;
        totals[i] = r.capacities.back();
    }

    const double t_window = 0.25 * quantile(totals, 0.25);
    const std::size_t n_grid = 16;
    std::vector<double> ts(n_grid);
    for (std::size_t k = 0; k < n_grid; ++k)
        ts[k] = t_window * static_cast<double>(k + 1) / n_grid;

    auto drive_at = [](const unzipped& u, double t) {
        const auto it = std::lower_bound(u.caps.begin(), u.caps.end(), t);
        const std::size_t idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - u.caps.begin()), u.drives.size() - 1);
        return u.drives[idx];
    };

    auto slope_of = [&](const std::vector<std::size_t>& sel,
                        double* r2_out) {
        std::vector<double> vars(n_grid);
        for (std::size_t k = 0; k < n_grid; ++k) {
            double m = 0.0, m2 = 0.0;
            for (std::size_t i : sel) {
                const double v = drive_at(uz[i], ts[k]);
                m += v;
                m2 += v * v;
            }
            const double n = static_cast<double>(sel.size());
            m /= n;
            vars[k] = m2 / n - m * m;
        }
        const linear_fit_result fit = linear_fit_origin(ts, vars);
        if (r2_out) *r2_out = fit.r2;
        return fit.slope;
    };

    std::vector<std::size_t> all(paths.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

    diffusivity_result res;
    res.n_paths = paths.size();
    res.kappa_hat = slope_of(all, &res.r2);

    // bootstrap percentile CI
    const counter_rng rng{seed};
    const std::size_t B = 200;
    std::vector<double> boot(B);
    for (std::size_t b = 0; b < B; ++b) {
        std::vector<std::size_t> sel(paths.size());
        for (std::size_t i = 0; i < sel.size(); ++i)
            sel[i] = rng.word(b, i, 3) % paths.size();
        boot[b] = slope_of(sel, nullptr);
    }
    res.ci_low = quantile(boot, 0.025);
    res.ci_high = quantile(boot, 0.975);
    return res;
}

ising_run_result run_ising_interfaces(const lattice_spec& spec,
                                      std::size_t n_interfaces,
                                      unsigned threads)
{
    ising_run_result out;
    out.interfaces.resize(n_interfaces);
    parallel_for(n_interfaces, threads ? threads : default_threads(),
                 [&](std::size_t i) {
                     const auto samples = simulate(spec, i, 1);
                     out.interfaces[i] = extract_interface(samples.front());
                 });
    std::vector<std::vector<cplx>> paths;
    paths.reserve(n_interfaces);
    for (const auto& p : out.interfaces) paths.push_back(p.rescaled);
    out.diff = diffusivity(paths);
    return out;
}

} // namespace walls
} // namespace slelab
