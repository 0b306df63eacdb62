#include "slelab/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slelab/rng.hpp"

namespace slelab {
namespace restriction {

namespace {

// sqrt(q - r) sqrt(q + r) with principal factors: continuous on the closed
// upper half-plane, cut only on [-r, r], asymptotic to +q.
cplx two_factor_sqrt(cplx q, double r)
{
    return std::sqrt(q - r) * std::sqrt(q + r);
}

} // namespace

// ---------------------------------------------------------------------------
// alpha_map
// ---------------------------------------------------------------------------

cplx alpha_map::map_out(cplx z) const
{
    if (const auto* hd = std::get_if<half_disk>(&hull))
        return z + hd->rad * hd->rad / (z - hd->x0) - shift;
    const auto& vs = std::get<vertical_slit_hull>(hull);
    return slit_apply(z, slit_element{vs.x0, vs.height * vs.height / 4.0}) - shift;
}

jet3 alpha_map::map_out_jet(cplx z) const
{
    if (const auto* hd = std::get_if<half_disk>(&hull)) {
        const double r2 = hd->rad * hd->rad;
        const cplx v = z - hd->x0;
        jet3 j;
        j.f  = z + r2 / v - shift;
        j.d1 = 1.0 - r2 / (v * v);
        j.d2 = 2.0 * r2 / (v * v * v);
        j.d3 = -6.0 * r2 / (v * v * v * v);
        return j;
    }
    const auto& vs = std::get<vertical_slit_hull>(hull);
    jet3 j = slit_apply_jet(z, slit_element{vs.x0, vs.height * vs.height / 4.0});
    j.f -= shift;
    return j;
}

cplx alpha_map::alpha(cplx u) const
{
    if (const auto* hd = std::get_if<half_disk>(&hull)) {
        const cplx q = u + shift - hd->x0;
        return hd->x0 + 0.5 * (q + two_factor_sqrt(q, 2.0 * hd->rad));
    }
    const auto& vs = std::get<vertical_slit_hull>(hull);
    return slit_inverse(u + shift, slit_element{vs.x0, vs.height * vs.height / 4.0});
}

jet3 alpha_map::alpha_jet(cplx u) const
{
    const cplx z = alpha(u);
    jet3 fwd = map_out_jet(z);
    jet3 j = invert(fwd);
    j.f = z;
    return j;
}

bool alpha_map::contains(cplx z) const
{
    if (z.imag() < -1e-12) return false;
    if (const auto* hd = std::get_if<half_disk>(&hull))
        return std::abs(z - hd->x0) <= hd->rad;
    const auto& vs = std::get<vertical_slit_hull>(hull);
    return std::abs(z.real() - vs.x0) <= 1e-12 && z.imag() <= vs.height;
}

cplx alpha_map::boundary_point(double s) const
{
    if (const auto* hd = std::get_if<half_disk>(&hull)) {
        const double theta = std::numbers::pi * (1.0 - s);
        if (s <= 0.0) return {hd->x0 - hd->rad, 0.0};
        if (s >= 1.0) return {hd->x0 + hd->rad, 0.0};
        return {hd->x0 + hd->rad * std::cos(theta), hd->rad * std::sin(theta)};
    }
    const auto& vs = std::get<vertical_slit_hull>(hull);
    // single-sided: the up leg alone spans the slit hull
    return {vs.x0, vs.height * std::min(s, 1.0)};
}

std::vector<cplx> alpha_map::boundary_arc(std::size_t n) const
{
    std::vector<cplx> arc;
    arc.reserve(n + 2);
    for (std::size_t j = 0; j <= n + 1; ++j)
        arc.push_back(boundary_point(static_cast<double>(j) / (n + 1)));
    return arc;
}

double alpha_map::footprint_left() const
{
    if (const auto* hd = std::get_if<half_disk>(&hull)) return hd->x0 - hd->rad;
    return std::get<vertical_slit_hull>(hull).x0;
}

double alpha_map::footprint_right() const
{
    if (const auto* hd = std::get_if<half_disk>(&hull)) return hd->x0 + hd->rad;
    return std::get<vertical_slit_hull>(hull).x0;
}

double alpha_map::capacity() const
{
    if (const auto* hd = std::get_if<half_disk>(&hull))
        return 0.5 * hd->rad * hd->rad;
    const auto& vs = std::get<vertical_slit_hull>(hull);
    return 0.25 * vs.height * vs.height;
}

alpha_map mapping_out(const reference_hull& hull)
{
    alpha_map a;
    a.hull = hull;
    if (const auto* hd = std::get_if<half_disk>(&hull)) {
        if (hd->x0 == 0.0 || !(hd->rad > 0.0) || hd->rad >= std::abs(hd->x0))
            throw invalid_hull("mapping_out: half-disk must avoid 0");
        a.shift = 0.0;
        a.shift = (cplx(0.0) + hd->rad * hd->rad / (cplx(0.0) - hd->x0)).real();
        a.phi_prime_0 = 1.0 - (hd->rad / hd->x0) * (hd->rad / hd->x0);
    } else {
        const auto& vs = std::get<vertical_slit_hull>(hull);
        if (vs.x0 == 0.0 || !(vs.height > 0.0))
            throw invalid_hull("mapping_out: slit hull must avoid 0");
        const slit_element e{vs.x0, vs.height * vs.height / 4.0};
        a.shift = slit_apply(cplx(0.0), e).real();
        a.phi_prime_0 = slit_apply_jet(cplx(0.0), e).d1.real();
    }
    a.d_alpha_0 = 1.0 / a.phi_prime_0;
    a.q_tan = a.d_alpha_0;
    return a;
}

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

namespace {

jet3 hull_image_jet(const std::vector<cplx>& rel, double x)
{
    const auto uz = loewner::unzip(rel);
    return uz.pipeline.jet_at(cplx(x));
}

} // namespace

restriction_frame frame_from_hull_image(const std::vector<cplx>& arc,
                                        double t, double w_t)
{
    const double base = arc.front().real();
    std::vector<cplx> rel(arc.size());
    for (std::size_t i = 0; i < arc.size(); ++i)
        rel[i] = arc[i] - base;
    rel.front() = 0.0;

    // vertical-slit unzipping of a smooth arc carries an O(m^{-3/2}) bias;
    // one Richardson step against the half-resolution subsample removes it
    std::vector<cplx> half;
    half.reserve(rel.size() / 2 + 2);
    for (std::size_t i = 0; i < rel.size(); i += 2) half.push_back(rel[i]);
    if (half.back() != rel.back()) half.push_back(rel.back());

    const jet3 jf = hull_image_jet(rel, w_t - base);
    const jet3 jh = hull_image_jet(half, w_t - base);

    const double a = std::pow(2.0, 1.5) / (std::pow(2.0, 1.5) - 1.0);
    const double b = a - 1.0;
    jet3 j;
    j.f = a * jf.f - b * jh.f;
    j.d1 = a * jf.d1 - b * jh.d1;
    j.d2 = a * jf.d2 - b * jh.d2;
    j.d3 = a * jf.d3 - b * jh.d3;
    // extrapolation can overshoot through zero during extreme close
    // approaches; fall back to the unextrapolated jet there
    if (!(j.d1.real() > 0.0)) j = jf;

    restriction_frame f;
    f.t = t;
    f.h_jet = j;
    if (std::abs(j.d1.imag()) > 1e-8 * std::max(1.0, std::abs(j.d1)))
        throw precondition_error("frame: h'(w) has a non-real part");
    f.H = j.d1.real();
    f.S = schwarzian(j).real();
    return f;
}

restriction_frame h_frame(const std::vector<cplx>& trace_prefix, double w_t,
                          const alpha_map& a)
{
    for (const cplx& z : trace_prefix)
        if (a.contains(z))
            throw hull_hit("h_frame: trace prefix meets the reference hull");

    if (trace_prefix.size() < 2) {
        const jet3 j = a.map_out_jet(cplx(w_t));
        restriction_frame f;
        f.t = 0.0;
        f.h_jet = j;
        f.H = j.d1.real();
        f.S = schwarzian(j).real();
        return f;
    }

    // The factorization gamma_Ktilde ∘ Phi ∘ gamma_K^{-1} has jet-singular
    // factors exactly at w_t (the composite is analytic there); evaluate
    // instead through the equal map: the mapping-out function of the
    // gamma_K-image of the hull boundary.
    const auto uz_k = loewner::unzip(trace_prefix);
    std::vector<cplx> arc = a.boundary_arc(128);
    for (auto& z : arc) {
        z = uz_k.pipeline.apply(z);
        if (std::abs(z.imag()) < 1e-14) z = {z.real(), 0.0};
    }
    restriction_frame f = frame_from_hull_image(arc, 0.0, w_t);
    f.t = uz_k.capacities.back();
    return f;
}

double martingale_value(const std::vector<restriction_frame>& frames,
                        const sle::sle_params& p)
{
    if (frames.empty()) return 1.0;
    double integral = 0.0;
    for (std::size_t i = 1; i < frames.size(); ++i)
        integral += 0.5 * (frames[i].S + frames[i - 1].S) *
                    (frames[i].t - frames[i - 1].t);
    const double H = frames.back().H;
    return std::exp(std::min(p.h * std::log(H) - (p.c / 6.0) * integral, 700.0));
}

// ---------------------------------------------------------------------------
// Monte Carlo engine
// ---------------------------------------------------------------------------

namespace {

// Per-path state: the hull boundary pushed through the discrete Loewner
// flow. Driving increments are consumed from the counter RNG; far from the
// hull image, several fine steps are merged into one constant-driving chunk
// whose reach cannot touch the image.
struct path_state {
    const sle::sle_params* p = nullptr;
    const alpha_map* amap = nullptr;
    double dt = 0.0;
    counter_rng rng;
    std::uint64_t path_id = 0;

    std::vector<cplx> arc;
    std::vector<double> params;   // boundary parameter of each arc sample
    std::vector<std::pair<double, double>> history; // (drive, span) chunks
    double w = 0.0;
    double t = 0.0;
    std::uint64_t step = 0;
    bool dead = false;
    double death_time = 0.0;

    double eps_hit = 0.0;
    std::size_t max_points = 768;

    void init(const sle::sle_params& prm, const alpha_map& a, double dt_,
              std::uint64_t seed, std::uint64_t id, std::size_t arc_points)
    {
        p = &prm;
        amap = &a;
        dt = dt_;
        rng.seed = seed;
        path_id = id;
        arc = a.boundary_arc(arc_points);
        params.resize(arc.size());
        for (std::size_t j = 0; j < arc.size(); ++j)
            params[j] = static_cast<double>(j) / (arc.size() - 1);
        eps_hit = 2.0 * std::sqrt(dt);
    }

    // Close approaches stretch the image sampling apart near the attack
    // zone; insert boundary midpoints there and replay them through the
    // recorded flow so the arc stays resolved relative to its distance
    // from the driving point.
    void refine()
    {
        const cplx wz{w, 0.0};
        bool again = true;
        int rounds = 0;
        while (again && arc.size() < max_points && rounds++ < 8) {
            again = false;
            for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
                const double seg = std::abs(arc[i + 1] - arc[i]);
                const double dist = std::min(std::abs(arc[i] - wz),
                                             std::abs(arc[i + 1] - wz));
                if (seg > 0.35 * std::max(dist, eps_hit) &&
                    arc.size() < max_points) {
                    const double pm = 0.5 * (params[i] + params[i + 1]);
                    cplx z = amap->boundary_point(pm);
                    for (const auto& [drive, span] : history)
                        z = slit_apply(z, slit_element{drive, span});
                    if (std::abs(z.imag()) < 1e-14) z = {z.real(), 0.0};
                    arc.insert(arc.begin() + i + 1, z);
                    params.insert(params.begin() + i + 1, pm);
                    again = true;
                    ++i;
                }
            }
        }
    }

    // distance from the driving point to the image arc polyline (segments,
    // not vertices: the flow stretches the sampling near close approaches)
    double gap() const
    {
        double g = std::numeric_limits<double>::infinity();
        const cplx wz{w, 0.0};
        for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
            const cplx a = arc[i], b = arc[i + 1];
            const cplx ab = b - a;
            const double den = std::max(std::norm(ab), 1e-300);
            const double s = std::clamp(
                ((wz - a).real() * ab.real() + (wz - a).imag() * ab.imag()) /
                    den,
                0.0, 1.0);
            g = std::min(g, std::abs(wz - (a + s * ab)));
        }
        return g;
    }

    // The driving point hits the hull exactly when it meets the image of
    // the hull boundary: its real footprint [lo, hi], or a midair arc
    // point swallowed by the growing slit. The footprint side is a 1d
    // boundary event and gets the unbiased Brownian-bridge crossing
    // correction; the arc side is tested against the step's swept slit.
    bool hit_interval(double w0, double w1, double span)
    {
        const double lo = arc.front().real();
        const double hi = arc.back().real();
        if ((w0 >= lo && w0 <= hi) || (w1 >= lo && w1 <= hi)) return true;
        if ((w0 - lo) * (w1 - lo) < 0.0) return true; // jumped across
        // same side: bridge crossing probability exp(-2 d0 d1 / (kappa s))
        const double edge = w0 < lo ? lo : hi;
        const double d0 = std::abs(w0 - edge);
        const double d1 = std::abs(w1 - edge);
        const double ex = 2.0 * d0 * d1 / (p->kappa * span);
        if (ex > 30.0) return false;
        const double u = rng.uniform(path_id, step, 5);
        return u < std::exp(-ex);
    }

    bool hit_arc(double w0, double w1, double span) const
    {
        // swept slit of the step: base [min w, max w], height 2 sqrt(span)
        const double xl = std::min(w0, w1);
        const double xr = std::max(w0, w1);
        const double top = 2.0 * std::sqrt(span);
        const double margin = 0.5 * std::sqrt(dt);
        for (const cplx& z : arc) {
            if (z.imag() == 0.0) continue;
            const double dx = z.real() < xl ? xl - z.real()
                              : z.real() > xr ? z.real() - xr
                                              : 0.0;
            const double dy = z.imag() > top ? z.imag() - top : 0.0;
            if (std::hypot(dx, dy) <= margin) return true;
        }
        return false;
    }

    void apply_chunk(double drive, double time_span, double dw)
    {
        const slit_element e{drive, time_span};
        for (auto& z : arc) {
            z = slit_apply(z, e);
            if (std::abs(z.imag()) < 1e-14) z = {z.real(), 0.0};
        }
        history.emplace_back(drive, time_span);
        w += dw;
        t += time_span;
    }

    // Advance to t_target (a multiple of dt up to roundoff). Returns false
    // if the path died on the way.
    bool advance_to(double t_target)
    {
        while (!dead && t < t_target - 0.25 * dt) {
            const double g = gap();
            // chunk so that neither the slit reach nor the driving excursion
            // can bridge the gap: 8 sqrt((kappa+4) c dt) < g
            const double steps_left =
                std::max(1.0, std::round((t_target - t) / dt));
            double c = std::floor(g * g / (64.0 * (p->kappa + 4.0) * dt));
            c = std::clamp(c, 1.0, steps_left);
            const double span = c * dt;
            const double dw =
                std::sqrt(p->kappa * span) * rng.normal(path_id, step);
            if (hit_interval(w, w + dw, span) || hit_arc(w, w + dw, span)) {
                dead = true;
                death_time = t;
                ++step;
                return false;
            }
            ++step;
            apply_chunk(w, span, dw);
        }
        return !dead;
    }

    double diameter() const
    {
        double d = 0.0;
        for (const cplx& z : arc)
            d = std::max(d, std::abs(z - arc.front()));
        return d;
    }

    double shrink_ratio() const
    {
        const cplx mid = 0.5 * (arc.front() + arc.back());
        const double dist = std::abs(mid - w);
        return dist > 0.0 ? diameter() / dist : 1.0;
    }
};

} // namespace

martingale_table martingale_mc(const sle::sle_params& p,
                               const reference_hull& hull,
                               const martingale_config& cfg)
{
    if (p.kappa > 4.0)
        throw out_of_range("martingale_mc: kappa must be <= 4");
    const alpha_map a = mapping_out(hull);
    const unsigned threads = cfg.threads ? cfg.threads : default_threads();

    std::vector<double> cps = cfg.checkpoints;
    std::sort(cps.begin(), cps.end());

    const jet3 j0 = a.map_out_jet(cplx(0.0));
    const double H0 = j0.d1.real();
    const double S0 = schwarzian(j0).real();

    martingale_table table;
    table.r0 = std::pow(H0, p.h);

    std::vector<martingale_sample> samples(cfg.n_paths);
    const double frame_dt = 1.0 / cfg.frames_per_unit_time;

    parallel_for(cfg.n_paths, threads, [&](std::size_t i) {
        path_state st;
        st.init(p, a, cfg.dt, cfg.seed, i, cfg.arc_points);

        martingale_sample rec;
        rec.path_id = i;
        double integral = 0.0;
        double prev_t = 0.0, prev_s = S0;
        double H = H0;

        for (double cp_raw : cps) {
            const double cp = std::round(cp_raw / cfg.dt) * cfg.dt;
            while (!st.dead && st.t < cp - 0.25 * cfg.dt) {
                // frames spaced by the squared gap: the Schwarzian of the
                // h-map varies on that time scale during close approaches
                const double g = st.gap();
                const double step = std::clamp(g * g / 8.0, 4.0 * cfg.dt,
                                               frame_dt);
                double t_next = std::min(st.t + step, cp);
                t_next = std::round(t_next / cfg.dt) * cfg.dt;
                if (t_next <= st.t + 0.5 * cfg.dt) t_next = st.t + cfg.dt;
                if (!st.advance_to(std::min(t_next, cp))) break;
                st.refine();
                try {
                    const restriction_frame f =
                        frame_from_hull_image(st.arc, st.t, st.w);
                    H = f.H;
                    integral += 0.5 * (f.S + prev_s) * (st.t - prev_t);
                    prev_t = st.t;
                    prev_s = f.S;
                } catch (const error&) {
                    // h' at numerical zero: the tip has reached the hull
                    // within resolution; kill the path here
                    st.dead = true;
                    st.death_time = st.t;
                }
            }
            checkpoint_record c;
            c.t = cp_raw;
            c.alive = !st.dead;
            c.H = st.dead ? 0.0 : H;
            c.schwarz_integral = integral;
            // evaluate in log space; clamp against overflow on the rare
            // near-miss survivors whose exponential factor explodes
            c.r = c.alive ? std::exp(std::min(
                                p.h * std::log(H) - (p.c / 6.0) * integral,
                                700.0))
                          : 0.0;
            rec.checkpoints.push_back(c);
            if (st.dead) {
                // remaining checkpoints are dead as well
                continue;
            }
        }
        samples[i] = std::move(rec);
    });

    for (std::size_t k = 0; k < cps.size(); ++k) {
        std::vector<double> rs(cfg.n_paths);
        std::vector<double> hs;
        std::size_t alive = 0;
        for (std::size_t i = 0; i < cfg.n_paths; ++i) {
            const auto& c = samples[i].checkpoints[k];
            rs[i] = c.r;
            if (c.alive) {
                ++alive;
                hs.push_back(c.H);
            }
        }
        const mean_stderr ms = summarize(rs);
        martingale_row row;
        row.t = cps[k];
        row.mean_r = ms.mean;
        row.stderr_r = ms.stderr_;
        row.alive_fraction =
            static_cast<double>(alive) / static_cast<double>(cfg.n_paths);
        row.median_H = hs.empty() ? 0.0 : quantile(hs, 0.5);
        table.rows.push_back(row);
    }
    if (cfg.keep_samples) table.samples = std::move(samples);
    return table;
}

avoidance_result avoidance_mc(const sle::sle_params& p,
                              const reference_hull& hull,
                              const avoidance_config& cfg)
{
    if (p.kappa > 4.0)
        throw out_of_range("avoidance_mc: kappa must be <= 4");
    const alpha_map a = mapping_out(hull);
    const unsigned threads = cfg.threads ? cfg.threads : default_threads();
    // the image-shrink criterion (diameter / distance < 1e-3) resolves
    // survivors around t ~ 500 x hull capacity; leave headroom
    const double horizon =
        cfg.horizon > 0.0 ? cfg.horizon : 2000.0 * a.capacity();
    const double shrink_stop = 1e-3;

    enum class outcome : unsigned char { hit, avoided, undecided };
    std::vector<outcome> out(cfg.n_paths);

    parallel_for(cfg.n_paths, threads, [&](std::size_t i) {
        path_state st;
        st.init(p, a, cfg.dt, cfg.seed, i, cfg.arc_points);
        outcome o = outcome::undecided;
        double window = std::max(64.0 * cfg.dt, 0.05);
        double next_check = window;
        while (st.t < horizon - 0.5 * cfg.dt) {
            if (!st.advance_to(std::min(horizon, next_check))) {
                o = outcome::hit;
                break;
            }
            if (st.shrink_ratio() < shrink_stop) {
                o = outcome::avoided;
                break;
            }
            st.refine();
            window = std::min(1.25 * window, 4.0);
            next_check += window;
        }
        out[i] = o;
    });

    avoidance_result r;
    r.n_paths = cfg.n_paths;
    for (auto o : out) {
        if (o == outcome::avoided) ++r.n_avoided;
        if (o == outcome::undecided) ++r.n_undecided;
    }
    // undecided paths are overwhelmingly survivors whose image has not yet
    // shrunk below the stop ratio; count them as avoided and report the
    // count as the regret budget.
    const double n = static_cast<double>(cfg.n_paths);
    r.p_hat = static_cast<double>(r.n_avoided + r.n_undecided) / n;
    r.stderr_ = std::sqrt(std::max(r.p_hat * (1.0 - r.p_hat), 1e-12) / n);
    return r;
}

// ---------------------------------------------------------------------------
// Flow identities
// ---------------------------------------------------------------------------

namespace {

// h-map data for a trace polyline against a hull, via the literal
// composition gamma_Ktilde ∘ Phi ∘ gamma_K^{-1}.
struct h_composite {
    map_pipeline gamma_k;      // forward
    map_pipeline gamma_kt;     // forward
    double img_base = 0.0;
    const alpha_map* a = nullptr;
    bool empty = true;

    cplx value(cplx z) const
    {
        if (empty) return a->map_out(z);
        const cplx z1 = gamma_k.inverted().apply(z);
        const cplx z2 = a->map_out(z1);
        return gamma_kt.apply(z2 - img_base);
    }

    jet3 jet(cplx z) const
    {
        if (empty) return a->map_out_jet(z);
        const jet3 j1 = gamma_k.inverted().jet_at(z);
        const jet3 j2 = a->map_out_jet(j1.f);
        const jet3 j3 = gamma_kt.jet_at(j2.f - img_base);
        return compose(j3, compose(j2, j1));
    }
};

h_composite make_h(const std::vector<cplx>& trace, const alpha_map& a)
{
    h_composite h;
    h.a = &a;
    if (trace.size() < 2) return h;
    h.empty = false;
    h.gamma_k = loewner::unzip(trace).pipeline;
    std::vector<cplx> image(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i)
        image[i] = a.map_out(trace[i]);
    h.img_base = image.front().real();
    for (auto& z : image) z -= h.img_base;
    image.front() = 0.0;
    h.gamma_kt = loewner::unzip(image).pipeline;
    return h;
}

} // namespace

double flow_derivative_check(
    const std::optional<loewner::driving_function>& prefix, const alpha_map& a,
    const std::vector<cplx>& z_samples, double delta_t)
{
    const std::size_t sub = 64; // substeps of the constant-driving extension

    loewner::driving_function base;
    double x = 0.0;
    if (prefix) {
        base = *prefix;
        x = prefix->values.back();
    }

    std::vector<cplx> trace_t;
    if (!base.values.empty()) trace_t = loewner::trace(base);

    // extension by constant driving x over delta_t, finely substepped
    loewner::driving_function ext;
    ext.dt = delta_t / static_cast<double>(sub);
    ext.values = base.values;
    if (!base.values.empty() && std::abs(base.dt - ext.dt) > 1e-15) {
        // resample the prefix onto the fine grid (values held constant)
        ext.values.clear();
        for (double v : base.values) {
            const auto rep = static_cast<std::size_t>(
                std::round(base.dt / ext.dt));
            ext.values.insert(ext.values.end(), rep, v);
        }
    }
    for (std::size_t k = 0; k < sub; ++k) ext.values.push_back(x);
    const std::vector<cplx> trace_td = loewner::trace(ext);

    const h_composite h_t = make_h(trace_t, a);
    const h_composite h_td = make_h(trace_td, a);

    const cplx hx = h_t.value(cplx(x));
    // jet factors of the composite are singular at x itself; take h'(x)
    // from the hull-image frame instead
    const double H = trace_t.empty()
                         ? a.map_out_jet(cplx(x)).d1.real()
                         : h_frame(trace_t, x, a).H;

    double max_rel = 0.0;
    for (const cplx& z : z_samples) {
        const cplx fd = (h_td.value(z) - h_t.value(z)) / delta_t;
        const jet3 jz = h_t.jet(z);
        const cplx rhs =
            H * H * 2.0 / (jz.f - hx) - jz.d1 * 2.0 / (z - x);
        const double scale = std::max(std::abs(rhs), 1e-12);
        max_rel = std::max(max_rel, std::abs(fd - rhs) / scale);
    }
    return max_rel;
}

double time_alpha(const std::vector<cplx>& trace_prefix, const alpha_map& a)
{
    for (const cplx& z : trace_prefix)
        if (a.contains(z))
            throw hull_hit("time_alpha: trace prefix meets the reference hull");
    if (trace_prefix.size() < 2) return 0.0;
    std::vector<cplx> image(trace_prefix.size());
    for (std::size_t i = 0; i < trace_prefix.size(); ++i)
        image[i] = a.alpha(trace_prefix[i]);
    image.front() = 0.0;
    const auto uz = loewner::unzip(image);
    return uz.capacities.back();
}

} // namespace restriction
} // namespace slelab
