#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "slelab/annulus.hpp"
#include "slelab/liouville.hpp"
#include "slelab/loopspace.hpp"
#include "slelab/restriction.hpp"
#include "slelab/sle.hpp"
#include "slelab/stats.hpp"
#include "slelab/version.hpp"
#include "slelab/walls.hpp"

namespace slelab {
namespace cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitUsage = 64;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    out << text;
}

void write_json(const fs::path& path, const json& j)
{
    write_text(path, j.dump(2) + "\n");
}

// manifest: resolved config echo, library version, wall time
struct manifest_writer {
    json config;
    std::string command;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();

    void finish(const fs::path& out_dir, const json& results = {})
    {
        json m;
        m["command"] = command;
        m["config"] = config;
        m["version"] = slelab::version;
        m["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (!results.is_null()) m["results"] = results;
        write_json(out_dir / "manifest.json", m);
    }
};

std::vector<double> parse_list(const std::string& csv)
{
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

restriction::reference_hull parse_hull(const std::string& s)
{
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::vector<double> vals =
        colon == std::string::npos ? std::vector<double>{}
                                   : parse_list(s.substr(colon + 1));
    if (kind == "half-disk" && vals.size() == 2)
        return restriction::half_disk{vals[0], vals[1]};
    if (kind == "slit" && vals.size() == 2)
        return restriction::vertical_slit_hull{vals[0], vals[1]};
    throw CLI::ValidationError(
        "--hull expects half-disk:x0,rad or slit:x0,height");
}

void write_trace_csv(const fs::path& path, const std::vector<cplx>& tips,
                     double dt)
{
    std::ostringstream out;
    out << "index,t,re,im\n";
    for (std::size_t k = 0; k < tips.size(); ++k)
        out << k << ',' << fmt(static_cast<double>(k) * dt) << ','
            << fmt(tips[k].real()) << ',' << fmt(tips[k].imag()) << '\n';
    write_text(path, out.str());
}

void write_driving_csv(const fs::path& path,
                       const loewner::driving_function& d)
{
    std::ostringstream out;
    out << "t,w\n";
    for (std::size_t k = 0; k < d.values.size(); ++k)
        out << fmt(static_cast<double>(k) * d.dt) << ',' << fmt(d.values[k])
            << '\n';
    write_text(path, out.str());
}

void write_polyline_svg(const fs::path& path, const std::vector<cplx>& pts)
{
    double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
    for (const cplx& z : pts) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymax = std::max(ymax, z.imag());
    }
    const double w = std::max(xmax - xmin, 1e-9);
    const double h = std::max(ymax - ymin, 1e-9);
    const double margin = 0.05 * std::max(w, h);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
        << fmt(xmin - margin) << ' ' << fmt(-(ymax + margin)) << ' '
        << fmt(w + 2 * margin) << ' ' << fmt(h + 2 * margin) << "\">\n";
    out << "<line x1=\"" << fmt(xmin - margin) << "\" y1=\"0\" x2=\""
        << fmt(xmax + margin)
        << "\" y2=\"0\" stroke=\"#888\" stroke-width=\""
        << fmt(0.002 * std::max(w, h)) << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"#06c\" stroke-width=\""
        << fmt(0.004 * std::max(w, h)) << "\" points=\"";
    for (const cplx& z : pts)
        out << fmt(z.real()) << ',' << fmt(-z.imag()) << ' ';
    out << "\"/>\n</svg>\n";
    write_text(path, out.str());
}

std::vector<cplx> read_xy_csv(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path.string());
    std::vector<cplx> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.find_first_of("0123456789-+.") != 0)
            continue;
        std::stringstream ss(line);
        std::string a, b;
        if (std::getline(ss, a, ',') && std::getline(ss, b, ','))
            pts.emplace_back(std::stod(a), std::stod(b));
    }
    return pts;
}

// two blank-line separated polylines: outer then inner
std::pair<std::vector<cplx>, std::vector<cplx>> read_two_polylines(
    const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path.string());
    std::vector<std::vector<cplx>> polys(1);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            if (!polys.back().empty()) polys.emplace_back();
            continue;
        }
        if (line.find_first_of("0123456789-+.") != 0) continue;
        std::stringstream ss(line);
        std::string a, b;
        if (std::getline(ss, a, ',') && std::getline(ss, b, ','))
            polys.back().emplace_back(std::stod(a), std::stod(b));
    }
    while (!polys.empty() && polys.back().empty()) polys.pop_back();
    if (polys.size() != 2)
        throw error("boundary file must hold two blank-line separated polylines");
    return {polys[0], polys[1]};
}

// merge config-file values into options the user did not pass on the line
void apply_config_defaults(CLI::App* app, const json& cfg)
{
    for (CLI::Option* opt : app->get_options()) {
        const auto& names = opt->get_lnames();
        const std::string name = names.empty() ? std::string{} : names.front();
        if (name.empty() || opt->count() > 0) continue;
        const auto it = cfg.find(name);
        if (it == cfg.end()) continue;
        if (it->is_string())
            opt->add_result(it->get<std::string>());
        else if (it->is_boolean()) {
            if (it->get<bool>()) opt->add_result("true");
        } else
            opt->add_result(it->dump());
        opt->run_callback();
    }
}

json snapshot_config(CLI::App* app)
{
    json cfg;
    for (CLI::Option* opt : app->get_options()) {
        const auto& names = opt->get_lnames();
        const std::string name = names.empty() ? std::string{} : names.front();
        if (name.empty() || name == "help" || name == "config") continue;
        const auto results = opt->results();
        if (results.size() == 1)
            cfg[name] = results.front();
        else if (!results.empty())
            cfg[name] = results;
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// subcommand payloads
// ---------------------------------------------------------------------------

struct common_opts {
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string config_file;
};

void add_common(CLI::App* cmd, common_opts& c)
{
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--threads", c.threads,
                    "worker threads (default: LAB_THREADS or all cores)");
    cmd->add_option("--config", c.config_file,
                    "JSON config file (flags take precedence)");
}

sle::sle_params resolve_params(double kappa, double theta)
{
    if (kappa > 0.0 && theta > 0.0)
        throw CLI::ValidationError("pass exactly one of --kappa / --theta");
    if (theta > 0.0) return sle::params_from_theta(theta);
    if (kappa > 0.0) return sle::params_from_kappa(kappa);
    throw CLI::ValidationError("pass exactly one of --kappa / --theta");
}

int cmd_sle_trace(const common_opts& c, double kappa, double theta, double dt,
                  double horizon, std::size_t paths, bool svg,
                  manifest_writer& man)
{
    const auto p = resolve_params(kappa, theta);
    const fs::path out(c.out_dir);
    json res;
    for (std::size_t k = 0; k < paths; ++k) {
        const auto d = sle::sample_driving(p, dt, horizon, c.seed, k);
        const auto tips = loewner::trace(d);
        write_driving_csv(out / ("driving_" + std::to_string(k) + ".csv"), d);
        write_trace_csv(out / ("trace_" + std::to_string(k) + ".csv"), tips,
                        dt);
        if (svg)
            write_polyline_svg(out / ("trace_" + std::to_string(k) + ".svg"),
                               tips);
    }
    res["paths"] = paths;
    res["kappa"] = p.kappa;
    man.finish(out, res);
    return kExitOk;
}

int cmd_capacity_check(const common_opts& c, std::size_t n_drivings,
                       manifest_writer& man)
{
    const counter_rng rng{c.seed};
    double max_err = 0.0;
    const std::size_t steps[] = {10, 100, 1000, 10000, 100000};
    for (std::size_t i = 0; i < n_drivings; ++i) {
        const std::size_t n = steps[i % 5];
        const double total = 0.2 + 2.0 * rng.uniform(i, 0, 0);
        loewner::driving_function d;
        d.dt = total / static_cast<double>(n);
        d.values.resize(n);
        double w = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            d.values[k] = w;
            w += 0.3 * (rng.uniform(i, k, 1) - 0.5);
        }
        // the discrete total time is n dt (total itself is not a multiple
        // of the rounded dt)
        const double t_ref = static_cast<double>(n) * d.dt;
        max_err = std::max(max_err,
                           std::abs(loewner::evolve(d).capacity - t_ref));
    }
    json res;
    res["drivings"] = n_drivings;
    res["max_abs_error"] = max_err;
    res["tolerance"] = 1e-12;
    res["pass"] = max_err <= 1e-12;
    const fs::path out(c.out_dir);
    write_json(out / "capacity_check.json", res);
    man.finish(out, res);
    std::printf("capacity check: max |Time - t| = %.3e (%s)\n", max_err,
                max_err <= 1e-12 ? "pass" : "FAIL");
    return max_err <= 1e-12 ? kExitOk : kExitValidation;
}

int cmd_restriction(const common_opts& c, double kappa, double theta,
                    const std::string& hull_spec, std::size_t paths,
                    double dt, double horizon, manifest_writer& man)
{
    const auto p = resolve_params(kappa, theta);
    const auto hull = parse_hull(hull_spec);
    restriction::avoidance_config cfg;
    cfg.n_paths = paths;
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    const auto res = restriction::avoidance_mc(p, hull, cfg);
    const auto a = restriction::mapping_out(hull);

    json j;
    j["p_hat"] = res.p_hat;
    j["stderr"] = res.stderr_;
    j["n_paths"] = res.n_paths;
    j["n_undecided"] = res.n_undecided;
    j["q_tan"] = a.q_tan;
    int exit = kExitOk;
    if (std::abs(p.c) < 1e-12) {
        const double target = std::pow(a.phi_prime_0, p.h);
        j["target"] = target;
        j["pass"] = std::abs(res.p_hat - target) <= 3.0 * res.stderr_;
        if (!j["pass"].get<bool>()) exit = kExitValidation;
    }
    const fs::path out(c.out_dir);
    write_json(out / "restriction.json", j);
    man.finish(out, j);
    std::printf("avoidance: p_hat = %.5f +- %.5f%s\n", res.p_hat, res.stderr_,
                j.contains("target")
                    ? ("  target " + fmt(j["target"].get<double>())).c_str()
                    : "");
    return exit;
}

int cmd_martingale(const common_opts& c, double kappa, double theta,
                   const std::string& hull_spec,
                   const std::string& checkpoints, std::size_t paths,
                   double dt, double frame_rate, std::size_t arc_points,
                   bool csv, manifest_writer& man)
{
    const auto p = resolve_params(kappa, theta);
    const auto hull = parse_hull(hull_spec);
    restriction::martingale_config cfg;
    cfg.checkpoints = parse_list(checkpoints);
    cfg.n_paths = paths;
    cfg.dt = dt;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    cfg.frames_per_unit_time = frame_rate;
    cfg.arc_points = arc_points;
    cfg.keep_samples = csv;
    const auto table = restriction::martingale_mc(p, hull, cfg);

    json rows = json::array();
    bool flat = true;
    for (const auto& r : table.rows) {
        rows.push_back({{"t", r.t},
                        {"mean_r", r.mean_r},
                        {"stderr", r.stderr_r},
                        {"alive_fraction", r.alive_fraction},
                        {"median_H", r.median_H}});
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (std::size_t j = i + 1; j < table.rows.size(); ++j) {
            const double d = std::abs(table.rows[i].mean_r -
                                      table.rows[j].mean_r);
            const double se = std::hypot(table.rows[i].stderr_r,
                                         table.rows[j].stderr_r);
            if (d > 3.0 * se) flat = false;
        }
    json j;
    j["r0"] = table.r0;
    j["rows"] = rows;
    j["flat_within_3_stderr"] = flat;

    const fs::path out(c.out_dir);
    if (csv) {
        std::ostringstream s;
        s << "path_id,t,alive,H,schwarz_integral,r\n";
        for (const auto& sample : table.samples)
            for (const auto& cp : sample.checkpoints)
                s << sample.path_id << ',' << fmt(cp.t) << ','
                  << (cp.alive ? 1 : 0) << ',' << fmt(cp.H) << ','
                  << fmt(cp.schwarz_integral) << ',' << fmt(cp.r) << '\n';
        write_text(out / "martingale_samples.csv", s.str());
    }
    write_json(out / "martingale.json", j);
    man.finish(out, j);
    std::printf("martingale: r0 = %.5f, flatness %s\n", table.r0,
                flat ? "pass" : "FAIL");
    return flat ? kExitOk : kExitValidation;
}

int cmd_liouville(const common_opts& c, const std::string& check,
                  std::size_t tuples, std::size_t grid_n,
                  manifest_writer& man)
{
    using namespace liouville;
    const counter_rng rng{c.seed};
    const grid_spec grid{-2.0, 2.0, -2.0, 2.0, grid_n, grid_n};
    auto bump_metric = [&](std::uint64_t id) {
        conformal_metric g = metric_flat(1.0);
        for (int b = 0; b < 2; ++b) {
            const cplx cc{1.2 * rng.uniform(id, b, 0) - 0.6,
                          1.2 * rng.uniform(id, b, 1) - 0.6};
            g = metric_add_bump(g, cc, 0.4 + 0.5 * rng.uniform(id, b, 2),
                                1.6 * rng.uniform(id, b, 3) - 0.8);
        }
        return g;
    };

    json j;
    int exit = kExitOk;
    if (check == "cocycle") {
        double worst = 0.0, worst_alpha = 0.0;
        for (std::uint64_t i = 0; i < tuples; ++i) {
            const auto g1 = bump_metric(3 * i);
            const auto g2 = bump_metric(3 * i + 1);
            const auto g3 = bump_metric(3 * i + 2);
            worst = std::max(worst,
                             std::abs(liouville_action(g1, g3, grid) -
                                      liouville_action(g1, g2, grid) -
                                      liouville_action(g2, g3, grid)));
            const contour_spec cont{cplx{0.0, 0.0}, 0.8, 256};
            const auto g4 = bump_metric(3 * i + 1000);
            cplx acc = -alpha_contour(g2, g3, g4, cont) +
                       alpha_contour(g1, g3, g4, cont) -
                       alpha_contour(g1, g2, g4, cont) +
                       alpha_contour(g1, g2, g3, cont);
            worst_alpha = std::max(worst_alpha, std::abs(acc));
        }
        j["action_cocycle_residual"] = worst;
        j["alpha_cocycle_residual"] = worst_alpha;
        j["pass"] = worst <= 1e-8 && worst_alpha <= 1e-10;
    } else if (check == "bridge") {
        double worst = 0.0;
        for (std::uint64_t i = 0; i < tuples; ++i) {
            const auto g = bump_metric(2000 + i);
            const smooth_field sigma =
                sum(bump_field(cplx{0.4 * rng.uniform(i, 7, 0) - 0.2, 0.1},
                               0.7, rng.uniform(i, 7, 1) - 0.5),
                    bump_field(cplx{-0.2, -0.25}, 0.6, 0.3));
            worst = std::max(
                worst, std::abs(classical_action(sigma, g, grid) +
                                liouville_action(g, metric_weyl(g, sigma),
                                                 grid)));
        }
        j["bridge_residual"] = worst;
        j["pass"] = worst <= 1e-5;
    } else if (check == "residue") {
        coord_map id_map{[](cplx z) { return z; },
                         [](cplx) { return cplx{1.0}; },
                         [](cplx) { return cplx{}; }};
        coord_map w1{[](cplx z) { return 2.0 * z + 0.3 * z * z; },
                     [](cplx z) { return cplx{2.0} + 0.6 * z; },
                     [](cplx) { return cplx{0.6}; }};
        coord_map w2{[](cplx z) { return 0.7 * z - 0.2 * z * z; },
                     [](cplx z) { return cplx{0.7} - 0.4 * z; },
                     [](cplx) { return cplx{-0.4}; }};
        const contour_spec cont{cplx{}, 0.35, 512};
        double worst_rel = 0.0;
        for (int k : {-2, -1, 1, 2}) {
            const cplx val = alpha_contour(metric_power(id_map, k),
                                           metric_power(w1, 0),
                                           metric_power(w2, 0), cont);
            const double lr = std::log(std::norm(w1.d1(cplx{}) / w2.d1(cplx{})));
            const cplx expect = cplx{0.0, 2.0 * std::numbers::pi * k} * lr;
            worst_rel = std::max(worst_rel,
                                 std::abs(val - expect) / std::abs(expect));
        }
        const double l32 = residue_lemma32_check(
            1, id_map,
            coord_map{[](cplx z) { return z + z * z; },
                      [](cplx z) { return cplx{1.0} + 2.0 * z; },
                      [](cplx) { return cplx{2.0}; }},
            w1, contour_spec{cplx{}, 0.2, 512});
        j["lemma31_rel_error"] = worst_rel;
        j["lemma32_abs"] = l32;
        j["pass"] = worst_rel <= 1e-6 && l32 <= 1e-8;
    } else if (check == "foursphere") {
        double worst = 0.0;
        for (int variant = 0; variant < static_cast<int>(tuples); ++variant) {
            const cplx p1{0.10 + 0.02 * variant, 0.15};
            const cplx p2{-0.20, 0.05 + 0.03 * variant};
            const cplx mu1 = p1 + 1.0 + 0.1 * variant;
            const cplx a12{0.7, 0.1};
            const cplx mu2 = p2 + cplx{0.8, -0.05 * variant};
            const cplx a21{1.3, -0.1};
            const mobius_element m11{cplx{1.0}, mu1 - p1, cplx{1.0}, -p1};
            const mobius_element m12{a12, mu1 - a12 * p1, cplx{1.0}, -p1};
            const mobius_element m21{a21, mu2 - a21 * p2, cplx{1.0}, -p2};
            const mobius_element m22{cplx{1.0}, mu2 - p2, cplx{1.0}, -p2};
            auto par = [](const mobius_element& m) {
                sphere_param s;
                const cplx det = m.a * m.d - m.b * m.c;
                s.f = [m](cplx u) { return (m.a * u + m.b) / (m.c * u + m.d); };
                s.d1 = [m, det](cplx u) {
                    const cplx q = m.c * u + m.d;
                    return det / (q * q);
                };
                s.d2 = [m, det](cplx u) {
                    const cplx q = m.c * u + m.d;
                    return -2.0 * m.c * det / (q * q * q);
                };
                return s;
            };
            four_sphere_regions reg;
            const double general = four_sphere_ratio_general(
                chart_metric_round(m11), chart_metric_round(m12),
                chart_metric_round(m21), chart_metric_round(m22), reg);
            const double residue = four_sphere_ratio_residue(
                par(m11), par(m12), par(m21), par(m22),
                contour_spec{cplx{}, 0.5, 512});
            worst = std::max(worst, std::abs(general - residue));
        }
        j["max_abs_difference"] = worst;
        j["pass"] = worst <= 1e-6;
    } else {
        throw CLI::ValidationError(
            "liouville check must be cocycle|bridge|residue|foursphere");
    }
    if (!j["pass"].get<bool>()) exit = kExitValidation;
    const fs::path out(c.out_dir);
    write_json(out / ("liouville_" + check + ".json"), j);
    man.finish(out, j);
    std::printf("liouville %s: %s\n", check.c_str(),
                exit == kExitOk ? "pass" : "FAIL");
    return exit;
}

int cmd_schiffer(const common_opts& c, double beta,
                 const std::string& t_values, manifest_writer& man)
{
    auto f_jet = [beta](cplx z) {
        jet3 j;
        j.f = z + beta * z * z * z;
        j.d1 = 1.0 + 3.0 * beta * z * z;
        j.d2 = 6.0 * beta * z;
        j.d3 = 6.0 * beta;
        return j;
    };
    const auto res = liouville::schiffer_derivative(
        f_jet, {cplx{}, 0.5, 512}, parse_list(t_values));
    json j;
    j["slope"] = res.slope;
    j["target"] = res.target;
    const double rel =
        std::abs(res.slope - res.target) / std::max(std::abs(res.target), 1e-300);
    j["rel_error"] = rel;
    j["pass"] = rel <= 0.01;
    const fs::path out(c.out_dir);
    write_json(out / "schiffer.json", j);
    man.finish(out, j);
    std::printf("schiffer: slope %.6g target %.6g (%s)\n", res.slope,
                res.target, rel <= 0.01 ? "pass" : "FAIL");
    return rel <= 0.01 ? kExitOk : kExitValidation;
}

int cmd_annulus(const common_opts& c, const std::string& boundary_file,
                const std::string& outer_file, const std::string& inner_file,
                double inner_radius, manifest_writer& man)
{
    annulus::annular_domain dom;
    if (!boundary_file.empty()) {
        auto [outer, inner] = read_two_polylines(boundary_file);
        dom.outer = std::move(outer);
        dom.inner = std::move(inner);
    } else if (!outer_file.empty() && !inner_file.empty()) {
        dom.outer = read_xy_csv(outer_file);
        dom.inner = read_xy_csv(inner_file);
    } else if (inner_radius > 0.0) {
        for (int k = 0; k < 256; ++k) {
            const double th = 2.0 * std::numbers::pi * k / 256;
            dom.outer.emplace_back(std::cos(th), std::sin(th));
            dom.inner.emplace_back(inner_radius * std::cos(th),
                                   inner_radius * std::sin(th));
        }
    } else {
        throw CLI::ValidationError(
            "pass --boundary-file, --outer-file/--inner-file or --inner-radius");
    }
    const double t = annulus::modulus(dom);
    json j;
    j["modulus"] = t;
    const fs::path out(c.out_dir);
    write_json(out / "annulus.json", j);
    man.finish(out, j);
    std::printf("annulus modulus: %.6f\n", t);
    return kExitOk;
}

int cmd_loop_coords(const common_opts& c, const std::string& curve_file,
                    double circle_r, const std::string& ellipse,
                    manifest_writer& man)
{
    loopspace::loop_curve loop = loopspace::circle_loop{1.0};
    if (!curve_file.empty()) {
        loop = loopspace::polyline_loop{read_xy_csv(curve_file)};
    } else if (!ellipse.empty()) {
        const auto ab = parse_list(ellipse);
        if (ab.size() != 2) throw CLI::ValidationError("--ellipse a,b");
        // boundary z = c1 zeta + e/zeta with c1 = (a+b)/2, e = (a-b)/2
        loopspace::analytic_loop al;
        al.exterior_series = {cplx{(ab[0] + ab[1]) / 2.0}, cplx{},
                              cplx{(ab[0] - ab[1]) / 2.0}};
        loop = al;
    } else if (circle_r > 0.0) {
        loop = loopspace::circle_loop{circle_r};
    }
    const auto lc = loopspace::coords(loop);
    const auto pn = loopspace::neretin_p2(loop);
    json j;
    j["A"] = lc.A;
    j["B"] = lc.B;
    j["AB"] = lc.A * lc.B;
    json ja = json::array(), jb = json::array();
    for (const cplx& v : lc.a) ja.push_back({v.real(), v.imag()});
    for (const cplx& v : lc.b) jb.push_back({v.real(), v.imag()});
    j["a"] = ja;
    j["b"] = jb;
    j["P_minus2"] = pn.p_minus2;
    j["P_minus2_prime"] = pn.p_minus2_prime;
    j["P_plus2"] = pn.p_plus2;
    j["P_plus2_prime"] = pn.p_plus2_prime;
    const fs::path out(c.out_dir);
    write_json(out / "loop_coords.json", j);
    man.finish(out, j);
    std::printf("loop coords: A = %.6f B = %.6f AB = %.6f\n", lc.A, lc.B,
                lc.A * lc.B);
    return kExitOk;
}

int cmd_ising(const common_opts& c, int width, int height, double beta,
              std::size_t n_interfaces, int thermalization,
              manifest_writer& man)
{
    walls::lattice_spec spec;
    spec.width = width;
    spec.height = height;
    spec.beta = beta;
    spec.thermalization = thermalization;
    spec.seed = c.seed;
    const auto res = walls::run_ising_interfaces(spec, n_interfaces,
                                                 c.threads);
    const fs::path out(c.out_dir);
    for (std::size_t k = 0; k < res.interfaces.size(); ++k) {
        std::ostringstream s;
        s << "index,re,im\n";
        const auto& pts = res.interfaces[k].rescaled;
        for (std::size_t i = 0; i < pts.size(); ++i)
            s << i << ',' << fmt(pts[i].real()) << ',' << fmt(pts[i].imag())
              << '\n';
        write_text(out / ("interface_" + std::to_string(k) + ".csv"), s.str());
    }
    json j;
    j["kappa_hat"] = res.diff.kappa_hat;
    j["ci_low"] = res.diff.ci_low;
    j["ci_high"] = res.diff.ci_high;
    j["r2"] = res.diff.r2;
    j["n_interfaces"] = res.diff.n_paths;
    write_json(out / "ising.json", j);
    man.finish(out, j);
    std::printf("ising: kappa_hat = %.3f [%.3f, %.3f], R^2 = %.3f\n",
                res.diff.kappa_hat, res.diff.ci_low, res.diff.ci_high,
                res.diff.r2);
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv)
{
    CLI::App app{"Numerical laboratory for Loewner evolutions, restriction "
                 "martingales, Liouville-action identities, conformal moduli, "
                 "loop coordinates and Ising interfaces"};
    app.require_subcommand(1);

    // sle-trace
    common_opts c_trace;
    double tr_kappa = 0.0, tr_theta = 0.0, tr_dt = 1e-3, tr_horizon = 1.0;
    std::size_t tr_paths = 1;
    bool tr_svg = false;
    auto* sc_trace = app.add_subcommand("sle-trace", "sample SLE traces");
    add_common(sc_trace, c_trace);
    sc_trace->add_option("--kappa", tr_kappa, "diffusivity in (0, 4]");
    sc_trace->add_option("--theta", tr_theta, "theta in (0, 1]");
    sc_trace->add_option("--dt", tr_dt, "Loewner time step");
    sc_trace->add_option("--horizon", tr_horizon, "total Loewner time");
    sc_trace->add_option("--paths", tr_paths, "number of paths");
    sc_trace->add_flag("--svg", tr_svg, "emit SVG plots");

    // capacity-check
    common_opts c_cap;
    std::size_t cap_drivings = 20;
    auto* sc_cap = app.add_subcommand("capacity-check",
                                      "Time(K_t) = t identity check");
    add_common(sc_cap, c_cap);
    sc_cap->add_option("--drivings", cap_drivings, "number of random drivings");

    // restriction
    common_opts c_rest;
    double re_kappa = 0.0, re_theta = 0.0, re_dt = 1e-4, re_horizon = 0.0;
    std::string re_hull = "half-disk:2,1";
    std::size_t re_paths = 20000;
    auto* sc_rest = app.add_subcommand(
        "restriction", "hull avoidance probability (Monte Carlo)");
    add_common(sc_rest, c_rest);
    sc_rest->add_option("--kappa", re_kappa, "diffusivity in (0, 4]");
    sc_rest->add_option("--theta", re_theta, "theta in (0, 1]");
    sc_rest->add_option("--hull", re_hull, "half-disk:x0,rad or slit:x0,h");
    sc_rest->add_option("--paths", re_paths, "paths");
    sc_rest->add_option("--dt", re_dt, "Loewner time step");
    sc_rest->add_option("--horizon", re_horizon, "0 = automatic");

    // martingale
    common_opts c_mart;
    double ma_kappa = 0.0, ma_theta = 0.0, ma_dt = 2e-4, ma_frames = 50.0;
    std::string ma_hull = "half-disk:2,1", ma_checkpoints = "0.1,0.5,1,2";
    std::size_t ma_paths = 20000, ma_arc = 96;
    bool ma_csv = false;
    auto* sc_mart = app.add_subcommand("martingale",
                                       "restriction martingale flatness");
    add_common(sc_mart, c_mart);
    sc_mart->add_option("--kappa", ma_kappa, "diffusivity in (0, 4]");
    sc_mart->add_option("--theta", ma_theta, "theta in (0, 1]");
    sc_mart->add_option("--hull", ma_hull, "half-disk:x0,rad or slit:x0,h");
    sc_mart->add_option("--checkpoints", ma_checkpoints, "comma-separated");
    sc_mart->add_option("--paths", ma_paths, "paths");
    sc_mart->add_option("--dt", ma_dt, "Loewner time step");
    sc_mart->add_option("--frame-rate", ma_frames, "base frames per unit time");
    sc_mart->add_option("--arc-points", ma_arc, "hull boundary samples");
    sc_mart->add_flag("--csv", ma_csv, "write per-path checkpoint rows");

    // liouville
    common_opts c_liou;
    std::string liou_check;
    std::size_t liou_tuples = 5, liou_grid = 512;
    auto* sc_liou = app.add_subcommand("liouville",
                                       "Liouville-action identity checks");
    add_common(sc_liou, c_liou);
    sc_liou->add_option("check", liou_check,
                        "cocycle|bridge|residue|foursphere")
        ->required();
    sc_liou->add_option("--tuples", liou_tuples, "number of random tuples");
    sc_liou->add_option("--grid-n", liou_grid, "quadrature grid size");

    // schiffer
    common_opts c_schf;
    double schf_beta = 0.01;
    std::string schf_ts = "1e-3,5e-4";
    auto* sc_schf = app.add_subcommand("schiffer",
                                       "Schiffer variation derivative");
    add_common(sc_schf, c_schf);
    sc_schf->add_option("--beta", schf_beta, "cubic coefficient");
    sc_schf->add_option("--t-values", schf_ts, "comma-separated t values");

    // annulus
    common_opts c_ann;
    std::string ann_boundary, ann_outer, ann_inner, ann_sub = "modulus";
    double ann_r = 0.0;
    auto* sc_ann = app.add_subcommand("annulus", "conformal modulus");
    add_common(sc_ann, c_ann);
    sc_ann->add_option("mode", ann_sub, "modulus");
    sc_ann->add_option("--boundary-file", ann_boundary,
                       "CSV with two blank-line separated closed polylines");
    sc_ann->add_option("--outer-file", ann_outer, "outer polyline CSV");
    sc_ann->add_option("--inner-file", ann_inner, "inner polyline CSV");
    sc_ann->add_option("--inner-radius", ann_r,
                       "concentric annulus r < 1 against the unit circle");

    // loop-coords
    common_opts c_loop;
    std::string loop_file, loop_ellipse;
    double loop_circle = 0.0;
    auto* sc_loop = app.add_subcommand("loop-coords",
                                       "loop coordinates and P_{+-2}");
    add_common(sc_loop, c_loop);
    sc_loop->add_option("--curve-file", loop_file, "closed polyline CSV");
    sc_loop->add_option("--circle", loop_circle, "circle radius");
    sc_loop->add_option("--ellipse", loop_ellipse, "semi-axes a,b");

    // ising
    common_opts c_ising;
    int is_w = 64, is_h = 64, is_therm = 6000;
    double is_beta = 0.0;
    std::size_t is_n = 200;
    auto* sc_ising = app.add_subcommand("ising",
                                        "critical Ising interface demo");
    add_common(sc_ising, c_ising);
    sc_ising->add_option("--width", is_w, "lattice width");
    sc_ising->add_option("--height", is_h, "lattice height");
    sc_ising->add_option("--beta", is_beta, "0 = critical");
    sc_ising->add_option("--n-interfaces", is_n, "independent chains");
    sc_ising->add_option("--thermalization", is_therm, "sweeps per chain");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        // config file defaults, then re-snapshot the resolved values
        common_opts* copts = nullptr;
        if (sub == sc_trace) copts = &c_trace;
        if (sub == sc_cap) copts = &c_cap;
        if (sub == sc_rest) copts = &c_rest;
        if (sub == sc_mart) copts = &c_mart;
        if (sub == sc_liou) copts = &c_liou;
        if (sub == sc_schf) copts = &c_schf;
        if (sub == sc_ann) copts = &c_ann;
        if (sub == sc_loop) copts = &c_loop;
        if (sub == sc_ising) copts = &c_ising;
        if (copts && !copts->config_file.empty()) {
            std::ifstream in(copts->config_file);
            if (!in) throw error("cannot open config " + copts->config_file);
            json cfg = json::parse(in);
            if (cfg.contains("config")) cfg = cfg["config"]; // manifest reuse
            apply_config_defaults(sub, cfg);
        }

        manifest_writer man;
        man.command = sub->get_name();
        man.config = snapshot_config(sub);

        if (sub == sc_trace)
            return cmd_sle_trace(c_trace, tr_kappa, tr_theta, tr_dt,
                                 tr_horizon, tr_paths, tr_svg, man);
        if (sub == sc_cap) return cmd_capacity_check(c_cap, cap_drivings, man);
        if (sub == sc_rest)
            return cmd_restriction(c_rest, re_kappa, re_theta, re_hull,
                                   re_paths, re_dt, re_horizon, man);
        if (sub == sc_mart)
            return cmd_martingale(c_mart, ma_kappa, ma_theta, ma_hull,
                                  ma_checkpoints, ma_paths, ma_dt, ma_frames,
                                  ma_arc, ma_csv, man);
        if (sub == sc_liou)
            return cmd_liouville(c_liou, liou_check, liou_tuples, liou_grid,
                                 man);
        if (sub == sc_schf)
            return cmd_schiffer(c_schf, schf_beta, schf_ts, man);
        if (sub == sc_ann)
            return cmd_annulus(c_ann, ann_boundary, ann_outer, ann_inner,
                               ann_r, man);
        if (sub == sc_loop)
            return cmd_loop_coords(c_loop, loop_file, loop_circle,
                                   loop_ellipse, man);
        if (sub == sc_ising)
            return cmd_ising(c_ising, is_w, is_h, is_beta, is_n, is_therm,
                             man);
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
}

} // namespace cli
} // namespace slelab
