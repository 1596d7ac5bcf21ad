#include "lhdl/harness/convergence.hpp"
#include "lhdl/core/csv.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/harness/report.hpp"
#include "lhdl/model/flux.hpp"
#include "lhdl/model/spin_model.hpp"
#include "lhdl/pde/solver.hpp"
#include "lhdl/sim/blocks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace lhdl {

const std::set<std::string>& ExperimentConfig::keys()
{
    static const std::set<std::string> k{"model", "gamma", "mode", "beta", "delta", "strict", "n_list",
                                         "replicas", "checkpoints", "trig_basis", "rho_mean", "rho_amp",
                                         "u_mean", "u_amp", "m_out", "block", "band_sigmas"};
    return k;
}

ExperimentConfig ExperimentConfig::from_config(const Config& c)
{
    ExperimentConfig e;
    const std::string s = "experiment";
    e.model = c.string(s, "model", e.model);
    e.model_gamma = c.number(s, "gamma", e.model_gamma);
    std::string mode = c.string(s, "mode", "eulerian");
    if (mode == "eulerian") e.mode = ScalingMode::Eulerian;
    else if (mode == "intermediate") e.mode = ScalingMode::Intermediate;
    else throw Error(ErrorKind::Config, "experiment.mode must be eulerian or intermediate, got " + mode);
    e.beta = c.number(s, "beta", e.mode == ScalingMode::Eulerian ? 0.0 : 0.1);
    e.delta = c.number(s, "delta", e.delta);
    e.strict = c.boolean(s, "strict", e.strict);
    if (c.has(s, "n_list")) {
        e.n_list.clear();
        for (double v : c.numbers(s, "n_list", {})) e.n_list.push_back(long(v));
    }
    e.replicas = int(c.integer(s, "replicas", e.replicas));
    e.checkpoints = c.numbers(s, "checkpoints", e.checkpoints);
    e.trig_basis = int(c.integer(s, "trig_basis", e.trig_basis));
    e.rho_mean = c.number(s, "rho_mean", e.rho_mean);
    e.rho_amp = c.number(s, "rho_amp", e.rho_amp);
    e.u_mean = c.number(s, "u_mean", e.u_mean);
    e.u_amp = c.number(s, "u_amp", e.u_amp);
    e.m_out = int(c.integer(s, "m_out", e.m_out));
    e.block = c.integer(s, "block", e.block);
    e.band_sigmas = c.number(s, "band_sigmas", e.band_sigmas);
    if (e.replicas < 2) throw Error(ErrorKind::Config, "experiment.replicas must be >= 2");
    if (e.n_list.empty() || e.checkpoints.empty()) throw Error(ErrorKind::Config, "empty n_list or checkpoints");
    return e;
}

void ExperimentConfig::to_config(Config& c) const
{
    const std::string s = "experiment";
    auto num = ConfigValue::number;
    c.set(s, "model", ConfigValue::string(model));
    c.set(s, "gamma", num(model_gamma));
    c.set(s, "mode", ConfigValue::string(mode == ScalingMode::Eulerian ? "eulerian" : "intermediate"));
    c.set(s, "beta", num(beta));
    c.set(s, "delta", num(delta));
    c.set(s, "strict", ConfigValue::boolean(strict));
    std::vector<ConfigValue> ns, ts;
    for (long n : n_list) ns.push_back(num(double(n)));
    for (double t : checkpoints) ts.push_back(num(t));
    c.set(s, "n_list", ConfigValue::array(ns));
    c.set(s, "replicas", num(replicas));
    c.set(s, "checkpoints", ConfigValue::array(ts));
    c.set(s, "trig_basis", num(trig_basis));
    c.set(s, "rho_mean", num(rho_mean));
    c.set(s, "rho_amp", num(rho_amp));
    c.set(s, "u_mean", num(u_mean));
    c.set(s, "u_amp", num(u_amp));
    c.set(s, "m_out", num(m_out));
    c.set(s, "block", num(double(block)));
    c.set(s, "band_sigmas", num(band_sigmas));
}

namespace {

struct TestFn {
    std::string name;
    std::function<double(double)> g;
};

std::vector<TestFn> test_functions(int k_max)
{
    std::vector<TestFn> out{{"1", [](double) { return 1.0; }}};
    for (int k = 1; k <= k_max; ++k) {
        std::string ks = k == 1 ? "" : std::to_string(k);
        out.push_back({"sin" + ks, [k](double x) { return std::sin(2 * M_PI * k * x); }});
        out.push_back({"cos" + ks, [k](double x) { return std::cos(2 * M_PI * k * x); }});
    }
    return out;
}

// periodic trapezoid of g * field on the oracle grid
double pairing(const Field& f, const std::function<double(double)>& g)
{
    double s = 0;
    for (int k = 0; k < f.m(); ++k) s += g(f.x(k)) * f.values[k];
    return s / f.m();
}

struct Observation {
    std::vector<FieldPair> fields;            // per checkpoint
    std::vector<std::vector<double>> weak;    // per checkpoint: rho stats then u stats
};

ConvergenceReport run(const ExperimentConfig& cfg, bool intermediate)
{
    auto t_start = std::chrono::steady_clock::now();
    ConvergenceReport rep;
    rep.cfg = cfg;
    SpinModel model = build_model(cfg.model, cfg.model_gamma);
    auto base = std::make_shared<FluxPair>(model);
    FluxPtr flux;
    if (intermediate) {
        if (base->gamma() <= 1.0)
            rep.warnings.push_back("model gamma <= 1: outside the theorem regime (extension run)");
        flux = std::make_shared<LimitFlux>(base->gamma());
    } else {
        flux = base;
    }
    rep.flux_name = flux->name();

    auto rho0 = [&](double x) { return cfg.rho_mean + cfg.rho_amp * std::sin(2 * M_PI * x); };
    auto u0 = [&](double x) { return cfg.u_mean + cfg.u_amp * std::cos(2 * M_PI * x); };

    std::vector<double> times = cfg.checkpoints;
    std::sort(times.begin(), times.end());
    std::vector<Field> orc_rho, orc_u;
    for (double t : times) {
        OracleResult o;
        try {
            o = smooth_solution_oracle(*flux, rho0, u0, t, cfg.m_out);
        } catch (const Error& e) {
            throw Error(ErrorKind::BlowupBeforeT, "oracle run failed before checkpoint " + std::to_string(t) + ": " + e.what());
        }
        orc_rho.push_back(o.rho);
        orc_u.push_back(o.u);
    }
    const auto tests = test_functions(cfg.trig_basis);
    const int nt = int(times.size()), ng = int(tests.size());

    for (size_t in = 0; in < cfg.n_list.size(); ++in) {
        const long n = cfg.n_list[in];
        ScalingPlan plan = intermediate ? ScalingPlan::intermediate(n, cfg.beta, cfg.delta, cfg.block, cfg.strict)
                                        : ScalingPlan::eulerian(n, cfg.delta, cfg.block);
        for (auto& w : plan.validate()) rep.warnings.push_back("n=" + std::to_string(n) + ": " + w);
        LocalEquilibrium le(model, rho0, u0, plan);
        JumpTable jt = JumpTable::build(model, plan.lambda_speed(), plan.kappa_speed());
        std::vector<double> gx(n * ng);
        for (int q = 0; q < ng; ++q)
            for (long j = 0; j < n; ++j) gx[q * n + j] = tests[q].g(double(j) / n);

        std::vector<Observation> obs(cfg.replicas);
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < cfg.replicas; ++r) {
            LatticeState st = le.sample(cfg.seed, uint64_t(in) << 32 | uint64_t(r));
            Observation& o = obs[r];
            auto record = [&](const LatticeState& s) {
                o.fields.push_back(empirical_fields(s, model, plan, cfg.m_out));
                auto eta = site_values(s, model, SiteObservable::Eta);
                auto zeta = site_values(s, model, SiteObservable::Zeta);
                std::vector<double> w(2 * ng, 0.0);
                for (int q = 0; q < ng; ++q) {
                    const double* g = &gx[q * n];
                    double a = 0, b = 0;
                    for (long j = 0; j < n; ++j) {
                        a += g[j] * eta[j];
                        b += g[j] * zeta[j];
                    }
                    w[q] = plan.rho_scale() * a / n;
                    w[ng + q] = plan.u_scale() * b / n;
                }
                o.weak.push_back(std::move(w));
            };
            int first = 0;
            if (times[0] <= 0) {
                record(st);
                first = 1;
            }
            ObserverSchedule sch;
            sch.times.assign(times.begin() + first, times.end());
            sch.callback = [&](const LatticeState& s, double) { record(s); };
            if (!sch.times.empty()) simulate(st, model, jt, times.back(), &sch);
        }

        // single-threaded reduction in replica order
        const double R = cfg.replicas;
        for (int it = 0; it < nt; ++it) {
            std::vector<double> mr(cfg.m_out, 0), mu(cfg.m_out, 0), vr(cfg.m_out, 0), vu(cfg.m_out, 0);
            for (const auto& o : obs)
                for (int k = 0; k < cfg.m_out; ++k) {
                    mr[k] += o.fields[it].rho.values[k] / R;
                    mu[k] += o.fields[it].u.values[k] / R;
                }
            for (const auto& o : obs)
                for (int k = 0; k < cfg.m_out; ++k) {
                    vr[k] += std::pow(o.fields[it].rho.values[k] - mr[k], 2) / (R - 1);
                    vu[k] += std::pow(o.fields[it].u.values[k] - mu[k], 2) / (R - 1);
                }
            Field fr = orc_rho[it], fu = orc_u[it];
            fr.values = mr;
            fu.values = mu;
            ConvergenceRow row;
            row.n = n;
            row.l = plan.l;
            row.t = times[it];
            row.l1_rho = l1_distance(fr, orc_rho[it]);
            row.l1_u = l1_distance(fu, orc_u[it]);
            row.linf_rho = linf_distance(fr, orc_rho[it]);
            row.linf_u = linf_distance(fu, orc_u[it]);
            for (int k = 0; k < cfg.m_out; ++k) {
                row.se_rho += std::sqrt(vr[k] / R) / cfg.m_out;
                row.se_u += std::sqrt(vu[k] / R) / cfg.m_out;
            }
            rep.rows.push_back(row);

            for (int q = 0; q < 2 * ng; ++q) {
                WeakStat ws;
                ws.n = n;
                ws.t = times[it];
                ws.field = q < ng ? "rho" : "u";
                ws.g = tests[q % ng].name;
                for (const auto& o : obs) ws.mean += o.weak[it][q] / R;
                for (const auto& o : obs) ws.sd += std::pow(o.weak[it][q] - ws.mean, 2) / (R - 1);
                ws.sd = std::sqrt(ws.sd);
                ws.pde = pairing(q < ng ? orc_rho[it] : orc_u[it], tests[q % ng].g);
                ws.within = std::fabs(ws.mean - ws.pde) <= cfg.band_sigmas * ws.sd + 1e-12 * (1 + std::fabs(ws.pde));
                rep.weak.push_back(ws);
            }
        }
        for (const auto& o : obs)
            for (int it = 1; it < nt; ++it)
                if (o.weak[it][0] != o.weak[0][0]) rep.mass_constant = false;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

} // namespace

ConvergenceReport run_eulerian(const ExperimentConfig& cfg)
{
    ExperimentConfig c = cfg;
    c.mode = ScalingMode::Eulerian;
    c.beta = 0;
    return run(c, false);
}

ConvergenceReport run_intermediate(const ExperimentConfig& cfg)
{
    if (!(cfg.beta > 0)) throw Error(ErrorKind::Config, "intermediate scaling needs beta > 0");
    ExperimentConfig c = cfg;
    c.mode = ScalingMode::Intermediate;
    return run(c, true);
}

std::vector<double> ConvergenceReport::final_l1() const
{
    double tmax = *std::max_element(cfg.checkpoints.begin(), cfg.checkpoints.end());
    std::vector<double> out;
    for (long n : cfg.n_list)
        for (const auto& r : rows)
            if (r.n == n && r.t == tmax) out.push_back(r.l1());
    return out;
}

bool ConvergenceReport::l1_strictly_decreasing() const
{
    auto v = final_l1();
    for (size_t k = 1; k < v.size(); ++k)
        if (!(v[k] < v[k - 1])) return false;
    return true;
}

bool ConvergenceReport::weak_all_within() const
{
    return std::all_of(weak.begin(), weak.end(), [](const WeakStat& w) { return w.within; });
}

void ConvergenceReport::write_csv(const std::string& dir) const
{
    ensure_dir(dir);
    CsvWriter a(dir + "/convergence.csv", {"n", "l", "t", "l1_rho", "l1_u", "linf_rho", "linf_u", "se_rho", "se_u"});
    for (const auto& r : rows)
        a.row({double(r.n), double(r.l), r.t, r.l1_rho, r.l1_u, r.linf_rho, r.linf_u, r.se_rho, r.se_u});
    CsvWriter b(dir + "/weak.csv", {"n", "t", "mean", "sd", "pde", "within", "field_g"});
    for (const auto& w : weak)
        b.row({double(w.n), w.t, w.mean, w.sd, w.pde, w.within ? 1.0 : 0.0}, w.field + ":" + w.g);
}

std::string ConvergenceReport::summary() const
{
    std::ostringstream os;
    os << (cfg.mode == ScalingMode::Eulerian ? "eulerian" : "intermediate") << " run, model " << cfg.model
       << ", oracle flux " << flux_name << ", replicas " << cfg.replicas << ", seed " << cfg.seed << "\n";
    auto v = final_l1();
    os << "final-time L1(rho)+L1(u) by n:";
    for (size_t k = 0; k < v.size(); ++k) os << " " << cfg.n_list[k] << ":" << format_double(v[k]);
    os << "\nstrictly decreasing: " << (l1_strictly_decreasing() ? "yes" : "no") << "\n";
    int bad = 0;
    for (const auto& w : weak) bad += !w.within;
    os << "weak statistics outside the " << cfg.band_sigmas << "-sigma replica band: " << bad << " of " << weak.size()
       << "\nmass statistic time-constant: " << (mass_constant ? "yes" : "no") << "\n";
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    os << "elapsed " << format_double(seconds) << " s\n";
    return os.str();
}

} // namespace lhdl
