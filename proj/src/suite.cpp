#include "swlab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "swlab/clifford.hpp"
#include "swlab/constants.hpp"
#include "swlab/kahler.hpp"
#include "swlab/metric.hpp"
#include "swlab/sampling.hpp"

namespace swlab {

// ---------------------------------------------------------------- config

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"clifford", "metric",    "calculus",     "dirac-variation",
                                                   "adjoint",  "holonomy", "kahler-kernel"};
    return names;
}

void SuiteConfig::validate() const {
    for (int n : grids)
        if (n < 4 || n % 2) throw std::invalid_argument("grid sizes must be even and >= 4, got " + std::to_string(n));
    if (grids.empty()) throw std::invalid_argument("at least one grid size is required");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1])) throw std::invalid_argument("epsilon ladder must be strictly decreasing");
    for (double e : epsilons)
        if (!(e > 0)) throw std::invalid_argument("epsilons must be positive");
    for (const auto& s : suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw std::invalid_argument("unknown suite: " + s);
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number for " + key + ": " + v);
    }
    if (pos != v.size()) throw std::invalid_argument("bad number for " + key + ": " + v);
    return d;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long d;
    try {
        d = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer for " + key + ": " + v);
    }
    if (pos != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
    return d;
}

}  // namespace

SuiteConfig parse_config(std::istream& is) {
    SuiteConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key == "grids") {
            c.grids.clear();
            for (auto& s : split_list(val)) c.grids.push_back(int(to_int(key, s)));
        } else if (key == "epsilons") {
            c.epsilons.clear();
            for (auto& s : split_list(val)) c.epsilons.push_back(to_double(key, s));
        } else if (key == "seed") {
            long long s = to_int(key, val);
            if (s < 0) throw std::invalid_argument("seed must be non-negative");
            c.seed = std::uint64_t(s);
        } else if (key == "suites") {
            c.suites = split_list(val);
        } else if (key == "threads") {
            c.threads = int(to_int(key, val));
        } else if (key.rfind("tol.", 0) == 0) {
            c.tolerances[key.substr(4)] = to_double(key, val);
        } else {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key " + key);
        }
    }
    c.validate();
    return c;
}

SuiteConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config " + path);
    return parse_config(f);
}

// ---------------------------------------------------------------- measurements

std::pair<double, double> loglog_fit(const std::vector<double>& levels, const std::vector<double>& errors) {
    const std::size_t m = levels.size();
    if (m < 2 || errors.size() != m) throw std::invalid_argument("loglog_fit needs matching series of length >= 2");
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = std::log(levels[i]);
        y[i] = std::log(std::max(errors[i], 1e-300));
    }
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / m, my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    double slope = sxy / sxx, r2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = y[i] - (my + slope * (x[i] - mx));
        r2 += r * r;
    }
    return {slope, std::sqrt(r2 / m)};
}

namespace measure {

namespace {

double adjoint_pair(int n, bool curved, std::uint64_t seed, int pair) {
    Grid grid(n);
    Sampler bg(grid, seed);
    MetricField g = curved ? bg.metric(0.2) : flat_metric(grid);
    Configuration c{bg.oneform(0.7), bg.spinor2(1.0), metric_to_frame(g)};
    Sampler r(grid, seed * 7919 + 1000 + std::uint64_t(pair));
    TangentVector v{r.oneform(1.0), r.spinor2(1.0), r.sym_endo(g, 1.0)};
    ObstructionCovector w{r.spinor2(1.0), r.triple(1.0)};
    TangentVector aw = sw_adjoint(c, w);
    double lhs = inner(sw_differential(c, v), w, g);
    double rhs = inner(v, aw, g);
    // Relative to the Cauchy-Schwarz bound of the right side; |lhs| alone can nearly cancel.
    return std::abs(lhs - rhs) / std::sqrt(inner(v, v, g) * inner(aw, aw, g));
}

struct DiracSetup {
    SpincStructure xi;
    Connection a;
    Field<Vec4c> psi;
    Field<Mat4> s;
    MetricField g;
};

DiracSetup dirac_setup(int n, std::uint64_t seed) {
    Sampler r(Grid(n), seed);
    DiracSetup d;
    d.g = r.metric(0.3);
    d.xi = metric_to_frame(d.g);
    d.a = r.oneform(0.5);
    d.psi = r.spinor4(1.0);
    d.s = r.sym_endo(d.g, 0.5);
    return d;
}

}  // namespace

std::vector<double> adjoint_defects(int n, bool curved, std::uint64_t seed, int pairs) {
    std::vector<double> out;
    for (int p = 0; p < pairs; ++p) out.push_back(adjoint_pair(n, curved, seed, p));
    return out;
}

double adjoint_defect(int n, bool curved, std::uint64_t seed, int pairs) {
    auto d = adjoint_defects(n, curved, seed, pairs);
    return *std::max_element(d.begin(), d.end());
}

double dirac_variation_error(int n, double t, std::uint64_t seed) {
    DiracSetup d = dirac_setup(n, seed);
    Field<Vec4c> dv = dirac_variation(d.xi, d.a, d.psi, d.s);
    MetricPath path = pullback_path(d.g, d.s);
    Field<Vec4c> Dp = dirac(xi_transport(d.xi, path, 0, t, kTransportSteps), d.a, d.psi);
    Field<Vec4c> Dm = dirac(xi_transport(d.xi, path, 0, -t, kTransportSteps), d.a, d.psi);
    const Grid& G = d.psi.grid;
    double num = grid_sum(G, [&](std::size_t x) { return ((Dp[x] - Dm[x]) / (2 * t) - dv[x]).squaredNorm(); });
    double den = grid_sum(G, [&](std::size_t x) { return dv[x].squaredNorm(); });
    return std::sqrt(num / den);
}

double lc_variation_error(int n, double t, std::uint64_t seed) {
    DiracSetup d = dirac_setup(n, seed);
    const Grid& G = d.g.grid;
    auto moved = [&](double tt) {
        return generate<Mat4>(G, [&](std::size_t x) -> Mat4 {
            Mat4 m = Mat4::Identity() + tt * d.s[x];
            return m.transpose() * d.g[x] * m;
        });
    };
    Field<Chr> Gp = christoffel(moved(t)), Gm = christoffel(moved(-t));
    Field<Chr> lv = lc_variation(d.g, d.s);
    double num = grid_sum(G, [&](std::size_t x) {
        double e = 0;
        for (int k = 0; k < 4; ++k) e += ((Gp[x][k] - Gm[x][k]) / (2 * t) - lv[x][k]).squaredNorm();
        return e;
    });
    double den = grid_sum(G, [&](std::size_t x) {
        double e = 0;
        for (int k = 0; k < 4; ++k) e += lv[x][k].squaredNorm();
        return e;
    });
    return std::sqrt(num / den);
}

std::vector<double> holonomy_errors(double eps, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    for (int i = 0; i < samples; ++i) {
        Mat4 g = random_spd(rng), h = random_symmetric(rng), k = random_symmetric(rng);
        Mat4 om = xi_curvature(g, h, k);
        Mat4 hol = xi_holonomy_oracle(g, h, k, eps, kHolonomyStepsPerEdge);
        out.push_back((hol + om).norm() / om.norm());
    }
    return out;
}

}  // namespace measure

// ---------------------------------------------------------------- suites

namespace {

using Clock = std::chrono::steady_clock;

struct Runner {
    const SuiteConfig& cfg;
    std::vector<CheckReport> out;

    void check(const std::string& name, const std::string& cmp, double threshold, double target,
               const std::function<std::vector<double>()>& body) {
        CheckReport r;
        r.name = name;
        r.comparison = cmp;
        r.threshold = threshold;
        r.target = target;
        if (auto it = cfg.tolerances.find(name); it != cfg.tolerances.end()) r.threshold = it->second;
        auto t0 = Clock::now();
        r.measured = body();
        r.runtime = std::chrono::duration<double>(Clock::now() - t0).count();
        r.pass = !r.measured.empty();
        for (double m : r.measured) {
            bool ok = cmp == "le" ? m <= r.threshold : cmp == "ge" ? m >= r.threshold : std::abs(m - r.target) <= r.threshold;
            r.pass = r.pass && ok;
        }
        out.push_back(std::move(r));
    }
    void le(const std::string& n, double thr, const std::function<std::vector<double>()>& b) { check(n, "le", thr, 0, b); }
    void ge(const std::string& n, double thr, const std::function<std::vector<double>()>& b) { check(n, "ge", thr, 0, b); }
    void near(const std::string& n, double target, double thr, const std::function<std::vector<double>()>& b) {
        check(n, "near", thr, target, b);
    }
};

void clifford_suite(Runner& R) {
    R.le("clifford.anticommutation", 1e-12, [] {
        double e = 0;
        for (int a = 1; a <= 4; ++a)
            for (int b = 1; b <= 4; ++b) {
                Mat4c m = gamma(a) * gamma(b) + gamma(b) * gamma(a) + 2.0 * (a == b) * Mat4c::Identity();
                e = std::max(e, m.norm());
            }
        return std::vector<double>{e};
    });
    R.le("clifford.volume_form", 1e-12, [] {
        Mat4c vol = gamma(1) * gamma(2) * gamma(3) * gamma(4);
        Mat4c want = Vec4c(-1, -1, 1, 1).asDiagonal();
        double chir = 0;
        for (int k = 0; k < 3; ++k) {
            SpinorEndo p = SpinorEndo::from(clifford_matrix(Form::two(selfdual_basis()[k])));
            SpinorEndo m = SpinorEndo::from(clifford_matrix(Form::two(antiselfdual_basis()[k])));
            chir = std::max({chir, p.pm.norm(), p.mp.norm(), p.mm.norm(), m.pm.norm(), m.mp.norm(), m.pp.norm()});
        }
        return std::vector<double>{(vol - want).norm(), chir};
    });
    R.le("clifford.quadratic_pairing", 1e-12, [&] {
        std::mt19937_64 rng(R.cfg.seed);
        double e = 0;
        for (int i = 0; i < 100; ++i) {
            Vec3 t = random_vec3(rng);
            Vec2c phi = random_vec2c(rng);
            Mat2c rho = rho_plus(t);
            double lhs = herm_inner(rho, quadratic_map(phi).pp);
            double rhs = 0.25 * spinor_inner(rho * phi, phi);
            e = std::max(e, std::abs(lhs - rhs));
        }
        return std::vector<double>{e};
    });
    R.le("clifford.pair_oneform", 1e-12, [&] {
        std::mt19937_64 rng(R.cfg.seed + 1);
        double e = 0;
        for (int i = 0; i < 100; ++i) {
            Vec2c psi = random_vec2c(rng), chi = random_vec2c(rng);
            Vec4c sigma;
            sigma << random_vec2c(rng), random_vec2c(rng);
            SpinorValue s;
            s.plus = psi;
            Vec2c rs = clifford_mul(Form::one(sigma), s).minus;
            cd lhs = rs.dot(chi);
            cd rhs = 2.0 * sigma.dot(spinor_pair_to_oneform(psi, chi));
            e = std::max(e, std::abs(lhs - rhs));
        }
        return std::vector<double>{e};
    });
}

void metric_suite(Runner& R) {
    std::uint64_t seed = R.cfg.seed;
    R.le("metric.hodge_involution", 1e-12, [seed] {
        std::mt19937_64 rng(seed);
        double e = 0;
        for (int i = 0; i < 20; ++i) {
            Mat4 g = random_spd(rng);
            Vec6 w;
            for (int k = 0; k < 6; ++k) w(k) = std::uniform_real_distribution<double>(-1, 1)(rng);
            e = std::max({e, (hodge_star(g, hodge_star(g, w)) - w).norm(),
                          (selfdual_project(g, selfdual_project(g, w)) - selfdual_project(g, w)).norm()});
        }
        return std::vector<double>{e};
    });
    R.near("metric.delta_minus_ratio", 0.25, 1e-12, [seed] {
        std::mt19937_64 rng(seed + 1);
        std::vector<double> r;
        for (int i = 0; i < 20; ++i) {
            Mat4 s = random_traceless_symmetric(rng);
            Mat3 d = delta_minus_frame(s);
            r.push_back(hom_inner(d, d) / sym_inner(s, s));
        }
        return r;
    });
    R.le("metric.scalar_block", 1e-12, [seed] {
        std::mt19937_64 rng(seed + 2);
        double e = 0;
        for (int i = 0; i < 20; ++i) {
            Mat4 s = random_symmetric(rng);
            e = std::max(e, std::abs(scalar_block_factor(s) - kKappa * s.trace()));
        }
        return std::vector<double>{e};
    });
}

void calculus_suite(Runner& R) {
    const int n = R.cfg.grids.front();
    const std::uint64_t seed = R.cfg.seed;
    R.le("calculus.lc_variation", 1e-6, [=] { return std::vector<double>{measure::lc_variation_error(n, 1e-3, seed)}; });
    R.near("calculus.lc_variation_order", 2.0, 0.1, [=] {
        std::vector<double> t = {4e-3, 2e-3, 1e-3}, e;
        for (double s : t) e.push_back(measure::lc_variation_error(n, s, seed));
        return std::vector<double>{loglog_fit(t, e).first};
    });
}

void dirac_variation_suite(Runner& R) {
    const int n = R.cfg.grids.front();
    const std::uint64_t seed = R.cfg.seed;
    const std::vector<double> ladder = R.cfg.epsilons;
    R.near("dirac_variation.order", 2.0, 0.1, [=] {
        std::vector<double> e;
        for (double t : ladder) e.push_back(measure::dirac_variation_error(n, t, seed));
        return std::vector<double>{loglog_fit(ladder, e).first};
    });
    R.le("dirac_variation.scalar", 1e-10, [=] {
        Sampler r(Grid(n), seed);
        MetricField g = r.metric(0.3);
        SpincStructure xi = metric_to_frame(g);
        Connection a = r.oneform(0.5);
        Field<Vec4c> psi = r.spinor4(1.0);
        const double c = 0.7;
        Field<Vec4c> dv = dirac_variation(xi, a, psi, Field<Mat4>(g.grid, c * Mat4::Identity()));
        Field<Vec4c> D = dirac(xi, a, psi);
        double num = grid_sum(g.grid, [&](std::size_t x) { return (dv[x] + c * D[x]).squaredNorm(); });
        double den = grid_sum(g.grid, [&](std::size_t x) { return (c * D[x]).squaredNorm(); });
        return std::vector<double>{std::sqrt(num / den)};
    });
}

void adjoint_suite(Runner& R) {
    const int n = R.cfg.grids.front();
    const std::uint64_t seed = R.cfg.seed;
    R.le("adjoint.flat", 1e-9, [=] { return std::vector<double>{measure::adjoint_defect(n, false, seed, 5)}; });
    R.le("adjoint.dirac_divergence_flat", 1e-10, [=] {
        Sampler r(Grid(n), seed);
        Geometry geo = make_geometry(identity_frame(r.grid));
        Connection a = r.oneform(0.7);
        Field<Vec2c> phi = r.spinor2(1.0), zeta = r.spinor2(1.0);
        return std::vector<double>{dirac_divergence_defect(geo, a, phi, zeta)};
    });
}

void holonomy_suite(Runner& R) {
    const std::vector<double> ladder = R.cfg.epsilons;
    const std::uint64_t seed = R.cfg.seed;
    std::vector<std::vector<double>> errs;
    for (double e : ladder) errs.push_back(measure::holonomy_errors(e, 20, seed));
    R.near("holonomy.halving_ratio", 2.0, 0.3, [&] {
        std::vector<double> r;
        for (std::size_t l = 0; l + 1 < ladder.size(); ++l)
            for (std::size_t i = 0; i < errs[l].size(); ++i) {
                double order = std::log(errs[l][i] / errs[l + 1][i]) / std::log(ladder[l] / ladder[l + 1]);
                r.push_back(std::pow(2.0, order));
            }
        return r;
    });
    // The leading order is 1; a fit over finite epsilon sits slightly below it.
    R.ge("holonomy.order", 0.95, [&] {
        std::vector<double> mean;
        for (auto& e : errs) mean.push_back(std::accumulate(e.begin(), e.end(), 0.0) / e.size());
        return std::vector<double>{loglog_fit(ladder, mean).first};
    });
}

void kahler_suite(Runner& R) {
    const std::uint64_t seed = R.cfg.seed;
    const Grid g4(4);
    R.le("kahler.identity", 1e-12, [&] {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> N;
        FormField f = zero_forms(g4);
        for (auto& c : f.v)
            for (auto& z : c) z = cd(N(rng), N(rng));
        FormField u = del_adjoint(dbar(f)), v = dbar(del_adjoint(f));
        double e = 0;
        for (std::size_t x = 0; x < g4.size(); ++x)
            for (int m = 0; m < 16; ++m) e = std::max(e, std::abs(u[x][m] + v[x][m]));
        return std::vector<double>{e};
    });
    Connection a0(g4, Vec4::Zero());
    KernelReport one = kernel_dimension(assemble_kernel_operator(a0, Field<cd>(g4, 1.0)), kKernelRelTol);
    R.le("kahler.kernel_dim_alpha1", 0, [&] { return std::vector<double>{double(one.dimension)}; });
    R.ge("kahler.kernel_gap_alpha1", kKernelMinGap, [&] { return std::vector<double>{one.gap}; });
    R.ge("kahler.kernel_dim_alpha0", 1, [&] {
        KernelReport zero = kernel_dimension(assemble_kernel_operator(a0, Field<cd>(g4, 0.0)), kKernelRelTol);
        return std::vector<double>{zero.indeterminate ? 0.0 : double(zero.dimension)};
    });
}

}  // namespace

std::vector<CheckReport> run_suite(const SuiteConfig& config) {
    config.validate();
    set_thread_count(config.threads);
    Runner R{config, {}};
    static const std::map<std::string, void (*)(Runner&)> table = {
        {"clifford", clifford_suite}, {"metric", metric_suite},     {"calculus", calculus_suite},
        {"dirac-variation", dirac_variation_suite}, {"adjoint", adjoint_suite}, {"holonomy", holonomy_suite},
        {"kahler-kernel", kahler_suite}};
    for (const auto& s : config.suites) table.at(s)(R);
    return R.out;
}

std::string report_json(const SuiteConfig& config, const std::vector<CheckReport>& checks, bool timing) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["seed"] = config.seed;
    j["grids"] = config.grids;
    j["epsilons"] = config.epsilons;
    j["checks"] = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& c : checks) {
        nlohmann::ordered_json r;
        r["name"] = c.name;
        r["measured"] = c.measured;
        r["comparison"] = c.comparison;
        r["threshold"] = c.threshold;
        if (c.comparison == "near") r["target"] = c.target;
        r["pass"] = c.pass;
        if (timing) r["runtime"] = c.runtime;
        j["checks"].push_back(r);
        all = all && c.pass;
    }
    j["pass"] = all;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- studies

std::vector<std::string> study_names() {
    return {"dirac-variation", "lc-variation", "holonomy", "adjoint-curved", "adjoint-flat"};
}

StudyResult convergence_study(const std::string& check, const std::vector<double>& levels, std::uint64_t seed) {
    if (levels.size() < 3) throw std::invalid_argument("a convergence study needs at least 3 levels");
    StudyResult r;
    r.check = check;
    auto grid_of = [](double v) {
        int n = int(std::lround(v));
        if (std::abs(v - n) > 1e-9) throw std::invalid_argument("grid levels must be integers");
        return n;
    };
    for (double v : levels) {
        if (!(v > 0)) throw std::invalid_argument("levels must be positive");
        if (check == "dirac-variation") {
            r.levels.push_back(v);
            r.errors.push_back(measure::dirac_variation_error(8, v, seed));
        } else if (check == "lc-variation") {
            r.levels.push_back(v);
            r.errors.push_back(measure::lc_variation_error(8, v, seed));
        } else if (check == "holonomy") {
            auto e = measure::holonomy_errors(v, 20, seed);
            r.levels.push_back(v);
            r.errors.push_back(std::accumulate(e.begin(), e.end(), 0.0) / e.size());
        } else if (check == "adjoint-curved" || check == "adjoint-flat") {
            int n = grid_of(v);
            r.levels.push_back(Grid(n).h);
            r.errors.push_back(measure::adjoint_defect(n, check == "adjoint-curved", seed, 1));
        } else {
            throw std::invalid_argument("unknown study check: " + check);
        }
    }
    auto [slope, res] = loglog_fit(r.levels, r.errors);
    r.slope = slope;
    r.residual = res;
    std::vector<std::size_t> idx(r.levels.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return r.levels[a] > r.levels[b]; });
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (r.errors[idx[i]] > r.errors[idx[i - 1]]) r.monotone = false;
    r.saturated = std::all_of(r.errors.begin(), r.errors.end(), [](double e) { return e < 1e-12; });
    return r;
}

}  // namespace swlab
