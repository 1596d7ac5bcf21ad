// lhdl: command-line front end.  Every run resolves one flat config
// (file + flag overrides + defaults), rejects unknown keys and writes
// <out>/manifest.cfg; `lhdl <cmd> --config <out>/manifest.cfg` replays it.
#include "lhdl/core/config.hpp"
#include "lhdl/core/csv.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/entropy/bounds.hpp"
#include "lhdl/entropy/entropy_table.hpp"
#include "lhdl/harness/convergence.hpp"
#include "lhdl/harness/microcanonical.hpp"
#include "lhdl/harness/report.hpp"
#include "lhdl/harness/tails.hpp"
#include "lhdl/model/conditions.hpp"
#include "lhdl/model/flux.hpp"
#include "lhdl/model/spin_model.hpp"
#include "lhdl/pde/solver.hpp"
#include "lhdl/sim/blocks.hpp"
#include "lhdl/sim/state_io.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <iostream>
#include <sstream>

using namespace lhdl;

namespace {

enum class Kind { Num, Str, List, Bool };

struct Flag {
    const char* name;
    const char* section;
    const char* key;
    Kind kind;
    const char* help;
};

struct Override {
    std::string section, key;
    Kind kind;
    std::string raw;
};

ConfigValue to_value(Kind k, const std::string& raw)
{
    switch (k) {
    case Kind::Str: return ConfigValue::string(raw);
    case Kind::Bool: return ConfigValue::boolean(raw == "1" || raw == "true" || raw == "yes");
    case Kind::Num: {
        size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw Error(ErrorKind::Usage, "not a number: " + raw);
        return ConfigValue::number(v);
    }
    case Kind::List: {
        std::vector<ConfigValue> items;
        std::stringstream ss(raw);
        std::string tok;
        while (std::getline(ss, tok, ',')) items.push_back(to_value(Kind::Num, tok));
        return ConfigValue::array(items);
    }
    }
    return {};
}

const std::set<std::string> kModelKeys{"name", "gamma", "label", "phi_gauge"};
const std::set<std::string> kRunKeys{"command", "seed", "version"};
const std::set<std::string> kProfileKeys{"rho_mean", "rho_amp", "u_mean", "u_amp"};

std::set<std::string> with(std::set<std::string> a, const std::set<std::string>& b)
{
    a.insert(b.begin(), b.end());
    return a;
}

using Allowed = std::map<std::string, std::set<std::string>>;

Allowed with(Allowed a, const Allowed& b)
{
    a.insert(b.begin(), b.end());
    return a;
}

Allowed model_sections()
{
    return {{"model", kModelKeys}, {"omega", {"labels", "eta", "zeta", "involution"}}, {"measure", {"pi"}},
            {"rates.*", {"*"}}, {"run", kRunKeys}};
}

struct Ctx {
    Config cfg;
    std::string out;
    uint64_t seed = 1;
    std::string command;
};

void defaults_model(Config& c)
{
    c.set_default("model", "name", ConfigValue::string("pm1"));
    c.set_default("model", "gamma", ConfigValue::number(2.0));
}

void defaults_profile(Config& c, const std::string& s, double rm, double ra, double um, double ua)
{
    c.set_default(s, "rho_mean", ConfigValue::number(rm));
    c.set_default(s, "rho_amp", ConfigValue::number(ra));
    c.set_default(s, "u_mean", ConfigValue::number(um));
    c.set_default(s, "u_amp", ConfigValue::number(ua));
}

std::function<double(double)> profile(const Config& c, const std::string& s, bool rho)
{
    double m = c.number(s, rho ? "rho_mean" : "u_mean", 0), a = c.number(s, rho ? "rho_amp" : "u_amp", 0);
    if (rho) return [m, a](double x) { return m + a * std::sin(2 * M_PI * x); };
    return [m, a](double x) { return m + a * std::cos(2 * M_PI * x); };
}

// ---------------------------------------------------------------------------

int cmd_validate(Ctx& x)
{
    x.cfg.reject_unknown(with(model_sections(), {{"validate", {"block_len", "tol"}}}) );
    defaults_model(x.cfg);
    x.cfg.set_default("validate", "block_len", ConfigValue::number(6));
    x.cfg.set_default("validate", "tol", ConfigValue::number(1e-12));
    write_manifest(x.out, x.cfg, x.command, x.seed);
    SpinModel m = build_model(x.cfg);
    ConditionReport r = validate_conditions(m, int(x.cfg.integer("validate", "block_len", 6)),
                                            x.cfg.number("validate", "tol", 1e-12));
    std::string text = r.render();
    write_text(x.out + "/conditions.txt", text);
    std::cout << text;
    return r.all_pass() ? 0 : 1;
}

int cmd_fluxes(Ctx& x)
{
    x.cfg.reject_unknown(with(model_sections(), {{"fluxes", {"grid"}}}));
    defaults_model(x.cfg);
    x.cfg.set_default("fluxes", "grid", ConfigValue::number(20));
    write_manifest(x.out, x.cfg, x.command, x.seed);
    SpinModel m = build_model(x.cfg);
    FluxPair f(m);
    const int g = int(x.cfg.integer("fluxes", "grid", 20));
    CsvWriter w(x.out + "/fluxes.csv", {"rho", "u", "Psi", "Phi", "onsager_residual"});
    const auto& dom = m.domain;
    double lo_r = 1e300, hi_r = -1e300, lo_u = 1e300, hi_u = -1e300;
    for (auto& v : dom.vertices) {
        lo_r = std::min(lo_r, v[0]);
        hi_r = std::max(hi_r, v[0]);
        lo_u = std::min(lo_u, v[1]);
        hi_u = std::max(hi_u, v[1]);
    }
    double worst = 0;
    int rows = 0;
    for (int i = 1; i <= g; ++i)
        for (int j = 1; j <= g; ++j) {
            double r = lo_r + (hi_r - lo_r) * i / (g + 1), u = lo_u + (hi_u - lo_u) * j / (g + 1);
            if (!dom.interior(r, u, 1e-3)) continue;
            double on = onsager_residual(f, r, u);
            worst = std::max(worst, on);
            w.row({r, u, f.psi(r, u), f.phi(r, u), on});
            ++rows;
        }
    std::cout << "model " << m.name << ": gamma = " << format_double(f.gamma()) << ", " << rows
              << " interior points, max Onsager residual " << format_double(worst) << "\n";
    for (auto& s : f.warnings()) std::cout << "warning: " << s << "\n";
    return 0;
}

int cmd_simulate(Ctx& x)
{
    x.cfg.reject_unknown(with(model_sections(), {{"simulate", with({"n", "mode", "beta", "delta", "block", "t_end",
                                                                     "snapshots", "m_out", "strict"},
                                                                    kProfileKeys)}}));
    defaults_model(x.cfg);
    const std::string s = "simulate";
    x.cfg.set_default(s, "n", ConfigValue::number(512));
    x.cfg.set_default(s, "mode", ConfigValue::string("eulerian"));
    x.cfg.set_default(s, "beta", ConfigValue::number(0));
    x.cfg.set_default(s, "delta", ConfigValue::number(0));
    x.cfg.set_default(s, "block", ConfigValue::number(0));
    x.cfg.set_default(s, "t_end", ConfigValue::number(0.1));
    x.cfg.set_default(s, "snapshots", ConfigValue::number(4));
    x.cfg.set_default(s, "m_out", ConfigValue::number(128));
    x.cfg.set_default(s, "strict", ConfigValue::boolean(false));
    defaults_profile(x.cfg, s, 0.5, 0.1, 0.0, 0.1);
    write_manifest(x.out, x.cfg, x.command, x.seed);

    SpinModel m = build_model(x.cfg);
    const long n = x.cfg.integer(s, "n", 512);
    const std::string mode = x.cfg.string(s, "mode", "eulerian");
    ScalingPlan plan;
    if (mode == "eulerian") plan = ScalingPlan::eulerian(n, x.cfg.number(s, "delta", 0), x.cfg.integer(s, "block", 0));
    else if (mode == "intermediate")
        plan = ScalingPlan::intermediate(n, x.cfg.number(s, "beta", 0), x.cfg.number(s, "delta", 0),
                                         x.cfg.integer(s, "block", 0), x.cfg.boolean(s, "strict", false));
    else throw Error(ErrorKind::Config, "simulate.mode must be eulerian or intermediate");
    for (auto& w : plan.validate()) std::cerr << "warning: " << w << "\n";
    LatticeState st = sample_local_equilibrium(m, profile(x.cfg, s, true), profile(x.cfg, s, false), plan, x.seed);
    const double t_end = x.cfg.number(s, "t_end", 0.1);
    const int ns = int(x.cfg.integer(s, "snapshots", 4)), mo = int(x.cfg.integer(s, "m_out", 128));
    SnapshotWriter snap(x.out + "/snapshots.csv");
    snap.write(0.0, empirical_fields(st, m, plan, mo));
    ObserverSchedule sch;
    for (int k = 1; k <= ns; ++k) sch.times.push_back(t_end * k / ns);
    sch.callback = [&](const LatticeState& s2, double t) { snap.write(t, empirical_fields(s2, m, plan, mo)); };
    simulate(st, m, plan, t_end, &sch);
    dump_state(st, m.K(), x.out + "/final_state.bin");
    std::cout << "n " << n << ", l " << plan.l << ", events " << st.events << ", trace " << st.trace
              << ", totals consistent " << (st.totals_consistent(m) ? "yes" : "no") << "\n";
    return st.totals_consistent(m) ? 0 : 1;
}

int cmd_solve_pde(Ctx& x)
{
    const std::string s = "pde";
    x.cfg.reject_unknown({{s, with({"flux", "gamma", "m", "t_end", "scheme", "cfl", "hyperviscosity", "snapshots"},
                                   kProfileKeys)},
                          {"run", kRunKeys}});
    x.cfg.set_default(s, "flux", ConfigValue::string("limit"));
    x.cfg.set_default(s, "gamma", ConfigValue::number(1.0));
    x.cfg.set_default(s, "m", ConfigValue::number(512));
    x.cfg.set_default(s, "t_end", ConfigValue::number(0.2));
    x.cfg.set_default(s, "scheme", ConfigValue::string("muscl"));
    x.cfg.set_default(s, "cfl", ConfigValue::number(0.4));
    x.cfg.set_default(s, "hyperviscosity", ConfigValue::number(0.01));
    x.cfg.set_default(s, "snapshots", ConfigValue::number(4));
    defaults_profile(x.cfg, s, 1.0, 0.3, 0.0, 0.3);
    write_manifest(x.out, x.cfg, x.command, x.seed);

    FluxPtr f = make_flux(x.cfg.string(s, "flux", "limit"), x.cfg.number(s, "gamma", 1.0));
    SolverOptions o;
    o.scheme = parse_scheme(x.cfg.string(s, "scheme", "muscl"));
    o.cfl = x.cfg.number(s, "cfl", 0.4);
    o.hyperviscosity = x.cfg.number(s, "hyperviscosity", 0.01);
    const double t_end = x.cfg.number(s, "t_end", 0.2);
    const int ns = int(x.cfg.integer(s, "snapshots", 4)), mm = int(x.cfg.integer(s, "m", 512));
    for (int k = 0; k < ns; ++k) o.snapshot_times.push_back(t_end * k / ns);
    SolverRun run = solve(*f, initial_field(profile(x.cfg, s, true), mm, o.scheme, FieldKind::Rho),
                          initial_field(profile(x.cfg, s, false), mm, o.scheme, FieldKind::U), t_end, o);
    CsvWriter w(x.out + "/pde.csv", {"t", "x", "rho", "u"});
    for (size_t k = 0; k < run.rho.size(); ++k)
        for (int i = 0; i < run.rho[k].m(); ++i)
            w.row({run.rho[k].time, run.rho[k].x(i), run.rho[k].values[i], run.u[k].values[i]});
    std::cout << f->name() << ", " << scheme_name(run.scheme) << ", m " << mm << ", steps " << run.steps
              << ", reached t = " << format_double(run.t_reached);
    if (run.blowup_time) std::cout << " (gradient blow-up detected at " << format_double(*run.blowup_time) << ")";
    std::cout << "\n";
    return 0;
}

const std::set<std::string> kEntropyKeys{"flux", "gamma", "r_lo", "r_hi", "n", "beta", "grid", "n_list",
                                         "r0", "r0_cap", "v_min", "w_max_factor"};

void defaults_entropy(Config& c)
{
    const std::string s = "entropy";
    c.set_default(s, "flux", ConfigValue::string("limit"));
    c.set_default(s, "gamma", ConfigValue::number(2.0));
    c.set_default(s, "r_lo", ConfigValue::number(0.02));
    c.set_default(s, "r_hi", ConfigValue::number(0.02 * std::exp(4.0)));
    c.set_default(s, "n", ConfigValue::number(1));
    c.set_default(s, "beta", ConfigValue::number(0));
    c.set_default(s, "grid", ConfigValue::number(64));
    c.set_default(s, "r0", ConfigValue::number(0));
    c.set_default(s, "r0_cap", ConfigValue::number(2.0));
    c.set_default(s, "v_min", ConfigValue::number(1e-4));
    c.set_default(s, "w_max_factor", ConfigValue::number(1.5));
}

EntropyOptions entropy_options(const Config& c)
{
    EntropyOptions o;
    o.grid = int(c.integer("entropy", "grid", o.grid));
    o.r0 = c.number("entropy", "r0", o.r0);
    o.r0_cap = c.number("entropy", "r0_cap", o.r0_cap);
    o.v_min = c.number("entropy", "v_min", o.v_min);
    o.w_max_factor = c.number("entropy", "w_max_factor", o.w_max_factor);
    return o;
}

int cmd_build_entropy(Ctx& x)
{
    x.cfg.reject_unknown({{"entropy", kEntropyKeys}, {"run", kRunKeys}});
    defaults_entropy(x.cfg);
    write_manifest(x.out, x.cfg, x.command, x.seed);
    const auto& c = x.cfg;
    FluxPtr f = make_flux(c.string("entropy", "flux", "limit"), c.number("entropy", "gamma", 2.0));
    EntropyTable t = build_entropy(f, c.number("entropy", "r_lo", 0), c.number("entropy", "r_hi", 0),
                                   c.number("entropy", "n", 1), c.number("entropy", "beta", 0), entropy_options(c));
    t.write_csv(x.out + "/entropy.csv");
    EntropyChecks k = check_entropy(t);
    std::ostringstream os;
    os << "entropy for " << t.flux_name << ": r_lo " << t.r_lo << ", r_hi " << t.r_hi << ", r0 " << t.r0
       << (t.r0_adaptive ? " (adaptive)" : "") << ", " << t.rows.size() << " rows\n"
       << "pde residual " << format_double(k.pde_residual) << ", flux relative error "
       << format_double(k.flux_rel_error) << ", D1 max " << format_double(k.d1_max) << ", D2 max "
       << format_double(k.d2_max) << ", overlap " << format_double(t.overlap) << "\n";
    write_text(x.out + "/entropy_summary.txt", os.str());
    std::cout << os.str();
    return (k.d1_max == 0 && k.d2_max == 0 && std::isfinite(k.pde_residual)) ? 0 : 1;
}

int cmd_verify_bounds(Ctx& x)
{
    x.cfg.reject_unknown({{"entropy", kEntropyKeys}, {"run", kRunKeys}});
    defaults_entropy(x.cfg);
    const auto& c = x.cfg;
    const bool sweep = c.has("entropy", "n_list");
    write_manifest(x.out, x.cfg, x.command, x.seed);
    FluxPtr f = make_flux(c.string("entropy", "flux", "limit"), c.number("entropy", "gamma", 2.0));
    const double r_lo = c.number("entropy", "r_lo", 0), r_hi = c.number("entropy", "r_hi", 0);
    bool ok = true;
    std::ostringstream os;
    CsvWriter w(x.out + "/bounds.csv", {"n", "C", "rho", "u", "indicator_ok", "name"});
    auto emit = [&](const BoundReport& b) {
        for (auto& fit : b.fits)
            w.row({b.n, fit.C, fit.rho, fit.u, fit.indicator_ok ? 1.0 : 0.0}, fit.name);
        ok = ok && b.all_finite() && b.all_indicator();
    };
    if (sweep) {
        UniformReport u = verify_bounds_across_n(f, r_lo, r_hi, c.number("entropy", "beta", 0),
                                                 c.numbers("entropy", "n_list", {}), entropy_options(c));
        for (auto& b : u.per_n) emit(b);
        os << u.render();
    } else {
        EntropyTable t = build_entropy(f, r_lo, r_hi, c.number("entropy", "n", 1), c.number("entropy", "beta", 0),
                                       entropy_options(c));
        BoundReport b = verify_bounds(t);
        emit(b);
        os << b.render();
    }
    write_text(x.out + "/bounds_summary.txt", os.str());
    std::cout << os.str();
    return ok ? 0 : 1;
}

int cmd_converge(Ctx& x)
{
    auto keys = ExperimentConfig::keys();
    x.cfg.reject_unknown({{"experiment", keys}, {"run", kRunKeys}});
    ExperimentConfig e = ExperimentConfig::from_config(x.cfg);
    e.seed = x.seed;
    e.out_dir = x.out;
    e.to_config(x.cfg);
    write_manifest(x.out, x.cfg, x.command, x.seed);
    ConvergenceReport r = e.mode == ScalingMode::Eulerian ? run_eulerian(e) : run_intermediate(e);
    r.write_csv(x.out);
    std::string text = r.summary();
    write_text(x.out + "/summary.txt", text);
    std::cout << text;
    bool ok = r.mass_constant && r.weak_all_within();
    if (e.mode == ScalingMode::Eulerian) ok = ok && r.l1_strictly_decreasing();
    return ok ? 0 : 1;
}

int cmd_tails(Ctx& x)
{
    x.cfg.reject_unknown({{"tails", TailConfig::keys()}, {"run", kRunKeys}});
    TailConfig t = TailConfig::from_config(x.cfg);
    t.seed = x.seed;
    t.to_config(x.cfg);
    write_manifest(x.out, x.cfg, x.command, x.seed);
    TailReport r = tail_checks(t);
    r.write_csv(x.out);
    std::string text = r.summary();
    write_text(x.out + "/summary.txt", text);
    std::cout << text;
    return r.pass() ? 0 : 1;
}

int cmd_enumerate(Ctx& x)
{
    x.cfg.reject_unknown(with(model_sections(), {{"moments", {"ls", "variant", "observable", "max_states", "stability"}}}));
    defaults_model(x.cfg);
    const std::string s = "moments";
    x.cfg.set_default(s, "ls", to_value(Kind::List, "4,5,6,7,8"));
    x.cfg.set_default(s, "variant", ConfigValue::number(0));
    x.cfg.set_default(s, "observable", ConfigValue::string("psi"));
    x.cfg.set_default(s, "max_states", ConfigValue::number(1e7));
    x.cfg.set_default(s, "stability", ConfigValue::number(0.3));
    write_manifest(x.out, x.cfg, x.command, x.seed);
    MomentConfig mc;
    mc.ls.clear();
    for (double l : x.cfg.numbers(s, "ls", {})) mc.ls.push_back(int(l));
    mc.variant = int(x.cfg.integer(s, "variant", 0));
    mc.observable = x.cfg.string(s, "observable", "psi");
    mc.max_states = x.cfg.number(s, "max_states", 1e7);
    mc.stability = x.cfg.number(s, "stability", 0.3);
    MomentReport r = microcanonical_moment_check(build_model(x.cfg), mc);
    r.write_csv(x.out);
    std::string text = r.summary();
    write_text(x.out + "/summary.txt", text);
    std::cout << text;
    // asserted: exact normalization at gamma = 0; the C stability is reported
    for (auto& row : r.rows)
        if (row.gamma0_error > 1e-12) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lhdl: lattice gas hydrodynamics, PDE and entropy toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out = "out";
    uint64_t seed = 1;
    int threads = 0;
    bool seed_given = false;
    app.add_option("--config", config_path, "config file (flat sectioned key = value)");
    app.add_option("--out", out, "output directory")->capture_default_str();
    app.add_option_function<uint64_t>("--seed", [&](const uint64_t& v) { seed = v; seed_given = true; }, "RNG seed");
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

    std::vector<Override> overrides;
    auto flags = [&](CLI::App* sub, std::initializer_list<Flag> fl) {
        for (const Flag& f : fl) {
            Flag fc = f;
            sub->add_option_function<std::string>(
                fc.name, [&overrides, fc](const std::string& v) { overrides.push_back({fc.section, fc.key, fc.kind, v}); },
                fc.help);
        }
    };
    const Flag model_flags[] = {{"--model", "model", "name", Kind::Str, "built-in model name or custom"},
                                {"--gamma", "model", "gamma", Kind::Num, "two-lane parameter"}};

    std::map<std::string, std::function<int(Ctx&)>> handlers;
    auto add = [&](const char* name, const char* help, std::function<int(Ctx&)> h) {
        handlers[name] = std::move(h);
        return app.add_subcommand(name, help);
    };

    auto* v = add("validate", "check the model conditions", cmd_validate);
    flags(v, {model_flags[0], model_flags[1], {"--block-len", "validate", "block_len", Kind::Num, "irreducibility block length"}});
    auto* fx = add("fluxes", "tabulate macroscopic fluxes and the Onsager residual", cmd_fluxes);
    flags(fx, {model_flags[0], model_flags[1], {"--grid", "fluxes", "grid", Kind::Num, "points per axis"}});
    auto* sim = add("simulate", "run the particle system from a local equilibrium", cmd_simulate);
    flags(sim, {model_flags[0], model_flags[1],
                {"--n", "simulate", "n", Kind::Num, "torus size"},
                {"--mode", "simulate", "mode", Kind::Str, "eulerian | intermediate"},
                {"--beta", "simulate", "beta", Kind::Num, "low-density exponent"},
                {"--delta", "simulate", "delta", Kind::Num, "symmetric speed-up exponent"},
                {"--block", "simulate", "block", Kind::Num, "block length (0 = default)"},
                {"--t-end", "simulate", "t_end", Kind::Num, "macroscopic end time"},
                {"--snapshots", "simulate", "snapshots", Kind::Num, "number of snapshots"},
                {"--m-out", "simulate", "m_out", Kind::Num, "field sample points"}});
    auto* pde = add("solve-pde", "solve the conservation law on the periodic interval", cmd_solve_pde);
    flags(pde, {{"--flux", "pde", "flux", Kind::Str, "limit | two-lane-exact | model:<name>"},
                {"--gamma", "pde", "gamma", Kind::Num, "gamma"},
                {"--m", "pde", "m", Kind::Num, "grid cells"},
                {"--t-end", "pde", "t_end", Kind::Num, "end time"},
                {"--scheme", "pde", "scheme", Kind::Str, "muscl | central4"},
                {"--cfl", "pde", "cfl", Kind::Num, "CFL number"},
                {"--snapshots", "pde", "snapshots", Kind::Num, "number of snapshots"}});
    const std::initializer_list<Flag> ent = {{"--flux", "entropy", "flux", Kind::Str, "limit | two-lane-exact | model:<name>"},
                                             {"--gamma", "entropy", "gamma", Kind::Num, "gamma"},
                                             {"--r-lo", "entropy", "r_lo", Kind::Num, "lower cutoff level"},
                                             {"--r-hi", "entropy", "r_hi", Kind::Num, "upper cutoff level"},
                                             {"--n", "entropy", "n", Kind::Num, "scaling parameter n"},
                                             {"--beta", "entropy", "beta", Kind::Num, "scaling exponent"},
                                             {"--grid", "entropy", "grid", Kind::Num, "nodes between the kinks"},
                                             {"--n-list", "entropy", "n_list", Kind::List, "comma-separated n values"}};
    flags(add("build-entropy", "build the Lax entropy / flux table", cmd_build_entropy), ent);
    flags(add("verify-bounds", "fit the entropy bound constants", cmd_verify_bounds), ent);
    auto* cv = add("converge", "particle system against PDE (Eulerian or intermediate)", cmd_converge);
    flags(cv, {{"--model", "experiment", "model", Kind::Str, "model"},
               {"--mode", "experiment", "mode", Kind::Str, "eulerian | intermediate"},
               {"--beta", "experiment", "beta", Kind::Num, "beta"},
               {"--delta", "experiment", "delta", Kind::Num, "delta"},
               {"--n-list", "experiment", "n_list", Kind::List, "comma-separated n values"},
               {"--replicas", "experiment", "replicas", Kind::Num, "replicas per n"},
               {"--checkpoints", "experiment", "checkpoints", Kind::List, "comma-separated times"}});
    auto* tl = add("tails", "stochastic domination tail checks", cmd_tails);
    flags(tl, {{"--model", "tails", "model", Kind::Str, "model"},
               {"--n", "tails", "n", Kind::Num, "n"},
               {"--beta", "tails", "beta", Kind::Num, "beta"},
               {"--samples", "tails", "samples", Kind::Num, "test blocks"},
               {"--train", "tails", "train", Kind::Num, "training blocks"}});
    auto* en = add("enumerate", "exact microcanonical exponential moments", cmd_enumerate);
    flags(en, {model_flags[0], model_flags[1],
               {"--ls", "moments", "ls", Kind::List, "block lengths"},
               {"--variant", "moments", "variant", Kind::Num, "0: M(b)=0, 1: M(b)=1"},
               {"--observable", "moments", "observable", Kind::Str, "psi | phi | eta"}});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Ctx x;
        x.out = out;
        x.command = app.get_subcommands().front()->get_name();
        if (!config_path.empty()) x.cfg = Config::load(config_path);
        for (auto& o : overrides) x.cfg.set(o.section, o.key, to_value(o.kind, o.raw));
        if (x.cfg.has("run", "command") && x.cfg.string("run", "command", "") != x.command)
            throw Error(ErrorKind::Usage, "manifest was written by '" + x.cfg.string("run", "command", "") + "'");
        if (!seed_given && x.cfg.has("run", "seed")) seed = uint64_t(x.cfg.number("run", "seed", 1));
        x.seed = seed;
        if (threads > 0) omp_set_num_threads(threads);
        return handlers.at(x.command)(x);
    } catch (const Error& e) {
        std::cerr << "lhdl: " << e.what() << "\n";
        return (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Usage) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "lhdl: " << e.what() << "\n";
        return 2;
    }
}
