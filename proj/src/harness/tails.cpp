#include "lhdl/harness/tails.hpp"
#include "lhdl/core/csv.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/harness/report.hpp"
#include "lhdl/model/spin_model.hpp"
#include "lhdl/model/thermo.hpp"
#include "lhdl/sim/blocks.hpp"
#include "lhdl/sim/rng.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lhdl {

const std::set<std::string>& TailConfig::keys()
{
    static const std::set<std::string> k{"model", "gamma", "n", "beta", "block", "target_L", "rho", "u",
                                         "samples", "train", "quantiles", "ci"};
    return k;
}

TailConfig TailConfig::from_config(const Config& c)
{
    TailConfig t;
    const std::string s = "tails";
    t.model = c.string(s, "model", t.model);
    t.model_gamma = c.number(s, "gamma", t.model_gamma);
    t.n = c.integer(s, "n", t.n);
    t.beta = c.number(s, "beta", t.beta);
    t.block = c.integer(s, "block", t.block);
    t.target_L = c.number(s, "target_L", t.target_L);
    t.rho = c.number(s, "rho", t.rho);
    t.u = c.number(s, "u", t.u);
    t.samples = c.integer(s, "samples", t.samples);
    t.train = c.integer(s, "train", t.train);
    t.quantiles = int(c.integer(s, "quantiles", t.quantiles));
    t.ci = c.number(s, "ci", t.ci);
    if (t.samples < 100 || t.train < 100) throw Error(ErrorKind::Config, "tails: need at least 100 samples");
    if (!(t.ci > 0 && t.ci < 1)) throw Error(ErrorKind::Config, "tails.ci must be in (0,1)");
    return t;
}

void TailConfig::to_config(Config& c) const
{
    const std::string s = "tails";
    auto num = ConfigValue::number;
    c.set(s, "model", ConfigValue::string(model));
    c.set(s, "gamma", num(model_gamma));
    c.set(s, "n", num(double(n)));
    c.set(s, "beta", num(beta));
    c.set(s, "block", num(double(block)));
    c.set(s, "target_L", num(target_L));
    c.set(s, "rho", num(rho));
    c.set(s, "u", num(u));
    c.set(s, "samples", num(double(samples)));
    c.set(s, "train", num(double(train)));
    c.set(s, "quantiles", num(quantiles));
    c.set(s, "ci", num(ci));
}

double poisson_tail_bound(double L, double z, double C)
{
    double y = z / C * L;
    if (y < 0) return 1.0;
    boost::math::poisson_distribution<double> P(L);
    return boost::math::cdf(boost::math::complement(P, std::floor(y)));
}

double gaussian_tail_bound(double L, double z, double C)
{
    double y = (z / C - 1.0) * std::sqrt(L);
    if (y <= 0) return 1.0;
    return std::erfc(y / std::sqrt(2.0));
}

namespace {

struct Sample {
    std::vector<double> rho, u;
};

Sample draw(const SpinModel& m, const std::vector<double>& cdf, long l, double sr, double su, long count,
            uint64_t seed, uint64_t stream_base)
{
    Sample s;
    s.rho.resize(count);
    s.u.resize(count);
    const int K = m.K();
    std::vector<double> w(2 * l - 1);
    for (long k = -(l - 1); k <= l - 1; ++k) w[k + l - 1] = weight_a(double(k) / l) / l;
#pragma omp parallel for schedule(static)
    for (long b = 0; b < count; ++b) {
        CounterRng rng(seed, stream_base + uint64_t(b));
        double a = 0, c = 0;
        Philox4x32::Ctr blk{};
        for (size_t j = 0; j < w.size(); ++j) {
            if (j % 4 == 0) blk = rng.next();
            double x = CounterRng::u32(blk[j % 4]);
            int q = 0;
            while (q < K - 1 && x > cdf[q]) ++q;
            a += w[j] * m.eta[q];
            c += w[j] * m.zeta[q];
        }
        s.rho[b] = sr * a;
        s.u[b] = su * std::fabs(c);
    }
    return s;
}

double tail_fraction(const std::vector<double>& sorted, double z)
{
    auto it = std::upper_bound(sorted.begin(), sorted.end(), z);
    return double(sorted.end() - it) / sorted.size();
}

// smallest C with bound(C, z) >= p for every (z, p)
double fit_constant(const std::vector<std::pair<double, double>>& zp, double L, bool poisson)
{
    double C = 0;
    for (auto [z, p] : zp) {
        auto ok = [&](double c) {
            return (poisson ? poisson_tail_bound(L, z, c) : gaussian_tail_bound(L, z, c)) >= p;
        };
        double lo = 1e-6, hi = 1.0;
        while (!ok(hi)) hi *= 2;
        if (ok(lo)) continue;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            (ok(mid) ? hi : lo) = mid;
        }
        C = std::max(C, hi);
    }
    return C;
}

} // namespace

TailReport tail_checks(const TailConfig& cfg)
{
    TailReport rep;
    rep.cfg = cfg;
    SpinModel m = build_model(cfg.model, cfg.model_gamma);
    const double sr = std::pow(double(cfg.n), 2 * cfg.beta), su = std::pow(double(cfg.n), cfg.beta);
    rep.l = cfg.block > 0 ? cfg.block : std::max(2L, long(std::lround(cfg.target_L * sr)));
    rep.L = rep.l / sr;
    auto p = product_marginal(m, cfg.rho / sr, cfg.u / su);
    std::vector<double> cdf(p.size());
    double acc = 0;
    for (size_t k = 0; k < p.size(); ++k) cdf[k] = (acc += p[k]);

    Sample train = draw(m, cdf, rep.l, sr, su, cfg.train, cfg.seed, 0);
    Sample test = draw(m, cdf, rep.l, sr, su, cfg.samples, cfg.seed, uint64_t(1) << 40);
    for (auto* v : {&train.rho, &train.u, &test.rho, &test.u}) std::sort(v->begin(), v->end());

    // z grid: training quantiles from the median up to 1 - 10/train
    auto grid = [&](const std::vector<double>& v) {
        std::vector<double> z;
        double q_top = 1.0 - 10.0 / v.size();
        for (int k = 0; k < cfg.quantiles; ++k) {
            double q = 0.5 + (q_top - 0.5) * (1.0 - std::pow(0.5, k * 10.0 / (cfg.quantiles - 1)));
            z.push_back(v[std::min<size_t>(v.size() - 1, size_t(q * v.size()))]);
        }
        return z;
    };
    auto zr = grid(train.rho), zu = grid(train.u);
    std::vector<std::pair<double, double>> pr, pu;
    for (double z : zr) pr.push_back({z, tail_fraction(train.rho, z)});
    for (double z : zu) pu.push_back({z, tail_fraction(train.u, z)});
    rep.C_rho = fit_constant(pr, rep.L, true);
    rep.C_u = fit_constant(pu, rep.L, false);
    rep.C = std::max(rep.C_rho, rep.C_u);

    const double alpha = 1.0 - cfg.ci;
    auto add = [&](const std::string& kind, const std::vector<double>& zs, const std::vector<double>& sorted) {
        for (double z : zs) {
            TailBin b;
            b.kind = kind;
            b.z = z;
            b.total = long(sorted.size());
            b.p_hat = tail_fraction(sorted, z);
            b.count = std::lround(b.p_hat * b.total);
            using B = boost::math::binomial_distribution<double>;
            b.lo = B::find_lower_bound_on_p(double(b.total), double(b.count), alpha / 2);
            b.hi = B::find_upper_bound_on_p(double(b.total), double(b.count), alpha / 2);
            b.bound = kind == "rho" ? poisson_tail_bound(rep.L, z, rep.C) : gaussian_tail_bound(rep.L, z, rep.C);
            b.violation = b.lo > b.bound;
            rep.violations += b.violation;
            rep.bins.push_back(b);
        }
    };
    // explicit points beyond C where the Gaussian bound is informative
    for (int k = 1; k <= 4; ++k) zu.push_back(rep.C * (1.0 + k / std::sqrt(rep.L)));
    add("rho", zr, test.rho);
    add("u", zu, test.u);
    return rep;
}

void TailReport::write_csv(const std::string& dir) const
{
    ensure_dir(dir);
    CsvWriter w(dir + "/tails.csv", {"z", "count", "total", "p_hat", "ci_lo", "ci_hi", "bound", "violation", "kind"});
    for (const auto& b : bins)
        w.row({b.z, double(b.count), double(b.total), b.p_hat, b.lo, b.hi, b.bound, b.violation ? 1.0 : 0.0}, b.kind);
}

std::string TailReport::summary() const
{
    std::ostringstream os;
    os << "tail checks, model " << cfg.model << ", n " << cfg.n << ", beta " << cfg.beta << ", l " << l << ", L "
       << format_double(L) << "\n"
       << "fitted C " << format_double(C) << " (rho " << format_double(C_rho) << ", u " << format_double(C_u)
       << ") on " << cfg.train << " training blocks\n"
       << "out-of-sample violations " << violations << " of " << bins.size() << " bins over " << cfg.samples
       << " blocks (allowed rate " << format_double(1.0 - cfg.ci) << "): " << (pass() ? "pass" : "fail") << "\n";
    return os.str();
}

} // namespace lhdl
