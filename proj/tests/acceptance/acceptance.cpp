// One pass/fail line per acceptance criterion.  `acceptance --only k` runs a
// single criterion; without arguments all thirteen run in order.
#include "lhdl/core/errors.hpp"
#include "lhdl/entropy/bounds.hpp"
#include "lhdl/entropy/char_curve.hpp"
#include "lhdl/entropy/entropy_table.hpp"
#include "lhdl/entropy/goursat.hpp"
#include "lhdl/harness/convergence.hpp"
#include "lhdl/harness/microcanonical.hpp"
#include "lhdl/harness/tails.hpp"
#include "lhdl/model/conditions.hpp"
#include "lhdl/model/flux.hpp"
#include "lhdl/model/thermo.hpp"
#include "lhdl/pde/eigen.hpp"
#include "lhdl/pde/riemann.hpp"
#include "lhdl/pde/solver.hpp"
#include "lhdl/sim/generator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace lhdl;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1
Outcome stationarity()
{
    auto t0 = std::chrono::steady_clock::now();
    auto m = build_model("pm1");
    double worst = 0;
    for (auto [r, u] : std::vector<std::pair<double, double>>{{1.0 / 3, 0.0}, {0.5, 0.2}, {0.2, -0.4}}) {
        auto p = product_marginal(m, r, u);
        for (int n : {3, 4}) {
            auto c = check_stationarity(m, n, p);
            worst = std::max({worst, c.piL, c.detailed_balance});
        }
    }
    double dt = seconds_since(t0);
    return {worst < 1e-12 && dt < 5.0, "max |pi L|, detailed balance residual " + fmt(worst) + " in " + fmt(dt) + " s"};
}

// ---------------------------------------------------------------- 2
Outcome conditions()
{
    bool ok = true;
    std::ostringstream os;
    for (auto name : {"pm1", "two-lane"}) {
        auto m = build_model(name, 2.0);
        auto r = validate_conditions(m, 6);
        double res = std::max({r.conservation.residual, r.lr_symmetry.residual, r.asym_stationarity.residual,
                               r.sym_reversibility.residual, r.gradient_flux.residual});
        bool pass = r.all_pass() && res < 1e-12;
        ok = ok && pass;
        os << name << (pass ? " ok" : " FAILED") << " (max residual " << fmt(res) << "); ";
    }
    // negative control: scale one asymmetric rate
    auto m = build_model("pm1");
    for (double& x : m.r)
        if (x > 0) {
            x *= 1.5;
            break;
        }
    auto bad = validate_conditions(m, 6);
    bool caught = !bad.asym_stationarity.pass;
    os << "mutated rates " << (caught ? "rejected by (D)" : "NOT rejected");
    return {ok && caught, os.str()};
}

// ---------------------------------------------------------------- 3
Outcome closed_forms()
{
    double err = 0;
    auto pm = build_model("pm1");
    FluxPair f(pm);
    for (int i = 1; i <= 20; ++i)
        for (int k = 1; k <= 20; ++k) {
            double r = i / 21.0, u = (2.0 * k / 21.0 - 1.0) * (1.0 - r);
            err = std::max(err, std::fabs(f.psi(r, u) - r * u));
            err = std::max(err, std::fabs(f.phi(r, u) - (r + u * u)));
        }
    double gerr = std::fabs(f.gamma() - 1.0);
    for (double g : {0.3, 2.0}) {
        FluxPair t(build_model("two-lane", g));
        for (int i = 1; i <= 20; ++i)
            for (int k = 1; k <= 20; ++k) {
                double r = i / 21.0, u = -1.0 + 2.0 * k / 21.0;
                err = std::max(err, std::fabs(t.psi(r, u) - r * (1 - r) * u));
                err = std::max(err, std::fabs(t.phi(r, u) - (r - g) * (1 - u * u)));
            }
        gerr = std::max(gerr, std::fabs(t.gamma() - g));
    }
    return {err < 1e-10 && gerr < 1e-4, "max flux error " + fmt(err) + ", gamma error " + fmt(gerr)};
}

// ---------------------------------------------------------------- 4
Outcome onsager()
{
    double worst = 0;
    for (auto name : {"pm1", "two-lane"}) {
        auto m = build_model(name, 2.0);
        FluxPair f(m);
        for (int i = 1; i <= 9; ++i)
            for (int k = -8; k <= 8; ++k) {
                double r = 0.1 * i, u = 0.1 * k;
                if (!m.domain.interior(r, u, 0.02)) continue;
                worst = std::max(worst, onsager_residual(f, r, u));
            }
    }
    return {worst < 1e-8, "max residual " + fmt(worst)};
}

// ---------------------------------------------------------------- 5
double refinement_order(Scheme s)
{
    LimitFlux f(2.0);
    SolverOptions o;
    o.scheme = s;
    auto r0 = [](double x) { return 1.0 + 0.2 * std::sin(2 * M_PI * x); };
    auto u0 = [](double x) { return 0.1 * std::cos(2 * M_PI * x); };
    std::vector<Field> out;
    for (int m : {64, 128, 256})
        out.push_back(solve(f, initial_field(r0, m, s, FieldKind::Rho), initial_field(u0, m, s, FieldKind::U), 0.05, o)
                          .final_rho());
    const bool fv = s == Scheme::MusclHancock;
    auto diff = [&](const Field& a, const Field& b) {
        double acc = 0;
        for (int k = 0; k < a.m(); ++k)
            acc += std::fabs(a.values[k] - (fv ? 0.5 * (b.values[2 * k] + b.values[2 * k + 1]) : b.values[2 * k]));
        return acc / a.m();
    };
    return std::log2(diff(out[0], out[1]) / diff(out[1], out[2]));
}

Outcome pde_solver()
{
    std::ostringstream os;
    bool ok = true;
    for (Scheme s : {Scheme::MusclHancock, Scheme::Central4}) {
        double p = refinement_order(s), design = s == Scheme::MusclHancock ? 2 : 4;
        ok = ok && std::fabs(p - design) <= 0.3;
        os << scheme_name(s) << " order " << fmt(p) << " (design " << design << "); ";
    }
    LimitFlux f(2.0);
    double cdev = 0, mdev = 0;
    for (Scheme s : {Scheme::MusclHancock, Scheme::Central4}) {
        SolverOptions o;
        o.scheme = s;
        auto c = solve(f, initial_field([](double) { return 0.8; }, 64, s, FieldKind::Rho),
                       initial_field([](double) { return -0.3; }, 64, s, FieldKind::U), 0.2, o);
        for (int k = 0; k < 64; ++k)
            cdev = std::max({cdev, std::fabs(c.final_rho().values[k] - 0.8), std::fabs(c.final_u().values[k] + 0.3)});
        auto r = solve(f, initial_field([](double x) { return 1.0 + 0.2 * std::sin(2 * M_PI * x); }, 128, s, FieldKind::Rho),
                       initial_field([](double x) { return 0.1 * std::cos(2 * M_PI * x); }, 128, s, FieldKind::U), 0.1, o);
        mdev = std::max({mdev, std::fabs(r.final_rho().mean() - r.rho.front().mean()),
                         std::fabs(r.final_u().mean() - r.u.front().mean())});
    }
    double ecf = 0, efd = 0;
    for (double r : {0.1, 0.5, 2.0})
        for (double u : {-0.5, 0.0, 0.3}) {
            ecf = std::max(ecf, eigen_residual(flux_jacobian(f.jet(r, u)), eigen_closed_form(2.0, r, u)));
        }
    for (auto name : {"pm1", "two-lane"}) {
        FluxPair fp(build_model(name, 2.0));
        for (auto [r, u] : std::vector<std::pair<double, double>>{{0.3, 0.1}, {0.5, -0.2}, {0.4, 0.3}})
            efd = std::max(efd, eigen_residual(flux_jacobian(fp.jet(r, u)), eigenstructure(fp, r, u)));
    }
    ok = ok && cdev < 1e-12 && mdev < 1e-10 && ecf <= 1e-10 && efd <= 1e-8;
    os << "constant drift " << fmt(cdev) << ", mean drift " << fmt(mdev) << ", eigen residual " << fmt(ecf)
       << " / " << fmt(efd);
    return {ok, os.str()};
}

// ---------------------------------------------------------------- 6
Outcome invariants()
{
    LimitFlux f(2.0);
    double dz = 0, dw = 0;
    for (double r : {0.01, 0.1, 0.5}) {
        CharCurve c = characteristic_curve(f, r, 0.5);
        auto ri0 = riemann_invariants(2.0, r, 0.0);
        for (int k = 0; k <= 500; ++k) {
            double u = 0.5 * k / 500;
            dz = std::max(dz, std::fabs(riemann_invariants(2.0, c(u), u).z - ri0.z));
            // the mirror image u -> -u is a level line of w
            dw = std::max(dw, std::fabs(riemann_invariants(2.0, c(u), -u).w - ri0.w));
        }
    }
    std::vector<double> us;
    for (int k = 0; k <= 400; ++k) us.push_back(-1.0 + 0.005 * k);
    double worst = -1e300;
    for (double g : {1.25, 2.0, 4.0})
        for (bool use_w : {true, false})
            for (double c : {0.1, 0.5, 1.0}) {
                auto rho = invariant_level_line(g, use_w, c, us);
                for (size_t k = 1; k + 1 < us.size(); ++k)
                    if (!std::isnan(rho[k - 1]) && !std::isnan(rho[k]) && !std::isnan(rho[k + 1]))
                        worst = std::max(worst, rho[k + 1] - 2 * rho[k] + rho[k - 1]);
            }
    return {dz <= 1e-6 && dw <= 1e-6 && worst <= 1e-12,
            "max |dz| " + fmt(dz) + ", max |dw| " + fmt(dw) + ", max second difference " + fmt(worst)};
}

// ---------------------------------------------------------------- 7
Outcome entropy()
{
    auto f = make_flux("limit", 2.0);
    const double lo = 0.02, hi = 0.02 * std::exp(4.0);
    EntropyOptions o;
    o.grid = 64;
    auto t64 = build_entropy(f, lo, hi, 1, 0, o);
    o.grid = 128;
    auto t128 = build_entropy(f, lo, hi, 1, 0, o);
    auto a = check_entropy(t64), b = check_entropy(t128);
    double ratio = a.pde_residual / b.pde_residual;
    bool ok = a.pde_residual < 1e-4 && ratio >= 3.5 && a.d1_max == 0.0 && a.d2_max <= 1e-12 &&
              a.flux_rel_error < 1e-3;
    return {ok, "residual " + fmt(a.pde_residual) + " -> " + fmt(b.pde_residual) + " (ratio " + fmt(ratio) +
                    "), D1 max " + fmt(a.d1_max) + ", D2 max " + fmt(a.d2_max) + ", flux error " +
                    fmt(a.flux_rel_error)};
}

// ---------------------------------------------------------------- 8
Outcome bounds()
{
    auto f = make_flux("limit", 2.0);
    const double lo = 0.02, hi = 0.02 * std::exp(4.0);
    EntropyOptions o;
    o.grid = 64;
    auto b64 = verify_bounds(build_entropy(f, lo, hi, 1, 0, o));
    o.grid = 128;
    auto b128 = verify_bounds(build_entropy(f, lo, hi, 1, 0, o));
    double refine = 0;
    for (const auto& fit : b64.fits) {
        double c2 = b128.get(fit.name).C;
        refine = std::max(refine, std::fabs(c2 - fit.C) / std::max(fit.C, 1e-300));
    }
    auto u = verify_bounds_across_n(std::make_shared<TwoLaneFlux>(2.0), lo, hi, 0.25, {1e2, 1e3, 1e4});
    double across = 0;
    for (size_t k = 0; k < u.names.size(); ++k) across = std::max(across, u.spread(k));
    bool finite = b64.all_finite() && b128.all_finite();
    bool ind = b64.all_indicator() && b128.all_indicator();
    for (auto& r : u.per_n) {
        finite = finite && r.all_finite();
        ind = ind && r.all_indicator();
    }
    return {finite && ind && refine <= 0.2 && across <= 0.5,
            std::string(finite ? "constants finite" : "non-finite constant") + ", refinement change " + fmt(refine) +
                ", spread across n " + fmt(across) + (ind ? ", supports respected" : ", support violated")};
}

// ---------------------------------------------------------------- 9
Outcome goursat()
{
    auto R = riemann_function(zero_coeffs(), 1.0, 0.2, 100);
    double one = (R.phi.array() - 1.0).abs().maxCoeff();

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> U(-1, 1);
    int fields = 0, held = 0;
    double worst = 0;
    while (fields < 100) {
        double p[9];
        for (double& x : p) x = U(gen);
        double scale = 1.0;
        GoursatProblem P;
        P.x1 = 0;
        P.x2 = 1;
        P.y1 = 0;
        P.y2 = 1;
        double f0 = 2 * U(gen), f1 = U(gen), g1 = U(gen);
        P.f = [=](double w) { return f0 + f1 * std::sin(4 * w); };
        P.g = [=](double z) { return f0 + g1 * (1 - z) * std::cos(3 * z); };
        P.ABC = [&scale, p](double w, double z) {
            return std::array<double, 3>{scale * (p[0] + p[1] * std::cos(3 * w + p[2] * z)),
                                         scale * (p[3] + p[4] * std::sin(2 * w - 3 * p[5] * z)),
                                         scale * (p[6] + p[7] * w * z + p[8] * std::cos(z))};
        };
        double b = coefficient_integral_bound(P, 80);
        scale = 0.999 / (6 * b);   // puts the largest integral just under 1/6
        auto r = solve_goursat(P, 80);
        ++fields;
        worst = std::max(worst, r.sup / r.M);
        if (r.sup <= 5 * r.M) ++held;
    }

    std::vector<std::array<double, 2>> pts{{0.3, 0.03}, {0.3, 0.15}, {1.0, 0.1}, {1.0, 0.5}, {1.5, 0.3}, {1.5, 1.2}};
    std::ostringstream os;
    bool env = true;
    for (double kap : {1.0, 3.0, 2.0, 4.0}) {   // 1, 2g-1, 2, 2g at g = 2
        auto e = fit_riemann_envelope(2.0, kap, pts, 100);
        env = env && e.finite();
        os << " kappa " << kap << ": c " << fmt(e.c) << "/" << fmt(e.c_diag) << ";";
    }
    return {one == 0.0 && held == fields && env, "zero-coefficient deviation " + fmt(one) + ", " +
                                                    std::to_string(held) + "/" + std::to_string(fields) +
                                                    " fields within 5M (max sup/M " + fmt(worst) + "), envelope" + os.str()};
}

// ---------------------------------------------------------------- 10
Outcome eulerian()
{
    ExperimentConfig c;
    c.model = "pm1";
    c.n_list = {256, 512, 1024, 2048};
    c.replicas = 64;
    c.checkpoints = {0.0, 0.1, 0.2};
    c.rho_mean = 0.5;
    c.rho_amp = 0.1;
    c.u_amp = 0.1;
    auto r = run_eulerian(c);
    auto l1 = r.final_l1();
    std::ostringstream os;
    os << "L1 at t=0.2:";
    for (double v : l1) os << " " << fmt(v);
    os << " (" << c.replicas << " replicas, " << fmt(r.seconds) << " s)";
    return {r.l1_strictly_decreasing() && !l1.empty() && l1.back() < 0.05, os.str()};
}

// ---------------------------------------------------------------- 11
Outcome weak()
{
    ExperimentConfig c;
    c.model = "pm1";
    c.mode = ScalingMode::Intermediate;
    c.beta = 0.1;
    c.delta = 0.0;
    c.n_list = {10000};
    c.replicas = 20;
    c.checkpoints = {0.0, 0.05, 0.1};
    c.rho_mean = 1.0;
    c.rho_amp = 0.5;
    c.u_mean = 0.0;
    c.u_amp = 0.5;
    auto r = run_intermediate(c);
    int within = 0;
    for (auto& w : r.weak) within += w.within;
    return {r.weak_all_within() && r.mass_constant,
            std::to_string(within) + "/" + std::to_string(r.weak.size()) + " pairings inside the " +
                fmt(c.band_sigmas) + " sd band, mass " + (r.mass_constant ? "constant" : "NOT constant")};
}

// ---------------------------------------------------------------- 12
Outcome tails()
{
    TailConfig c;
    auto r = tail_checks(c);
    return {r.pass(), std::to_string(r.violations) + "/" + std::to_string(r.bins.size()) + " bins violated (l " +
                          std::to_string(r.l) + ", L " + fmt(r.L) + ", C " + fmt(r.C) + ", " +
                          std::to_string(c.samples) + " test blocks)"};
}

// ---------------------------------------------------------------- 13
Outcome moments()
{
    MomentConfig c;
    auto r = microcanonical_moment_check(build_model("pm1"), c);
    std::ostringstream os;
    os << "C(l):";
    double g0 = 0;
    for (auto& row : r.rows) {
        os << " " << row.l << ":" << fmt(row.C);
        g0 = std::max(g0, row.gamma0_error);
    }
    os << ", spread " << fmt(r.spread()) << " (allowed " << fmt(c.stability) << ")";
    return {r.stable() && g0 < 1e-12, os.str()};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{{"exact stationarity", stationarity},
                                     {"condition suite", conditions},
                                     {"flux closed forms", closed_forms},
                                     {"Onsager relation", onsager},
                                     {"PDE solver", pde_solver},
                                     {"Riemann invariants", invariants},
                                     {"entropy construction", entropy},
                                     {"bound verification", bounds},
                                     {"Goursat machinery", goursat},
                                     {"Eulerian limit", eulerian},
                                     {"weak convergence", weak},
                                     {"tail checks", tails},
                                     {"microcanonical moments", moments}};
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: acceptance [--only k]\n");
            return 2;
        }
    }
    if (only < 0 || only > int(all.size())) {
        std::fprintf(stderr, "criterion must be in 1..%zu\n", all.size());
        return 2;
    }
    int failed = 0;
    for (int k = 1; k <= int(all.size()); ++k) {
        if (only && k != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[k - 1].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%2d] %-4s %-24s %s  [%.1f s]\n", k, o.pass ? "PASS" : "FAIL", all[k - 1].name,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
