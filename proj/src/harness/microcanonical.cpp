#include "lhdl/harness/microcanonical.hpp"
#include "lhdl/core/csv.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/harness/report.hpp"
#include "lhdl/model/flux.hpp"
#include "lhdl/sim/blocks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace lhdl {

namespace {

double b_weight(int variant, double s)
{
    return variant == 0 ? weight_a_prime(2 * s - 1) : 2 * weight_a(2 * s - 1);
}

std::vector<double> default_gammas()
{
    std::vector<double> g;
    for (int k = 1; k <= 60; ++k) g.push_back(0.05 * k);
    return g;
}

} // namespace

std::vector<LevelSetMoment> level_set_moments(const SpinModel& m, int l, const std::vector<double>& gammas,
                                              int variant, const std::string& observable, double max_states)
{
    int obs = observable == "psi" ? 0 : observable == "phi" ? 1 : observable == "eta" ? 2 : -1;
    if (obs < 0) throw Error(ErrorKind::Config, "observable must be psi, phi or eta, got " + observable);
    if (variant == 1 && obs == 1) throw Error(ErrorKind::Config, "the centred variant supports psi and eta only");
    const int K = m.K(), sites = l + 2;
    if (l < 1) throw Error(ErrorKind::Config, "block length must be positive");
    if (std::pow(double(K), sites) > max_states)
        throw Error(ErrorKind::TooLarge, "|Omega|^(l+2) exceeds the enumeration limit");
    std::unique_ptr<FluxPair> flux;
    if (variant == 1 && obs == 0) flux = std::make_unique<FluxPair>(m);

    std::vector<double> bw(l + 1);
    for (int j = 0; j <= l; ++j) bw[j] = b_weight(variant, double(j) / l) / l;
    const double sq = std::sqrt(double(l));
    // reference-measure mean, an interior point
    std::array<double, 2> y0{0, 0};
    for (int k = 0; k < K; ++k) {
        y0[0] += m.pi[k] * m.eta[k];
        y0[1] += m.pi[k] * m.zeta[k];
    }

    struct Acc {
        double x_rho, x_u, den = 0;
        std::vector<double> num;
    };
    std::map<std::pair<long long, long long>, Acc> sets;
    std::vector<int> w(sites, 0);
    size_t total = 1;
    for (int i = 0; i < sites; ++i) total *= K;
    for (size_t code = 0; code < total; ++code) {
        size_t c = code;
        double p = 1;
        for (int i = 0; i < sites; ++i) {
            w[i] = int(c % K);
            c /= K;
            p *= m.pi[w[i]];
        }
        if (p == 0) continue;
        double se = 0, sz = 0;
        for (int i = 1; i <= l; ++i) {
            se += m.eta[w[i]];
            sz += m.zeta[w[i]];
        }
        double X = 0, be = 0, bz = 0;
        for (int j = 0; j <= l; ++j) {
            X += bw[j] * (obs == 0 ? m.psi(w[j], w[j + 1]) : obs == 1 ? m.phi(w[j], w[j + 1]) : m.eta[w[j]]);
            be += bw[j] * m.eta[w[j]];
            bz += bw[j] * m.zeta[w[j]];
        }
        if (variant == 1 && obs == 2) X -= be;
        if (variant == 1 && obs == 0) {
            // Xi is continuous up to the boundary; evaluate just inside it
            auto y = m.domain.project(be, bz);
            X -= flux->psi(y0[0] + (1 - 1e-7) * (y[0] - y0[0]), y0[1] + (1 - 1e-7) * (y[1] - y0[1]));
        }
        auto key = std::make_pair(std::llround(se * 1e6), std::llround(sz * 1e6));
        auto it = sets.find(key);
        if (it == sets.end()) {
            Acc a{se / l, sz / l, 0, std::vector<double>(gammas.size(), 0.0)};
            it = sets.emplace(key, std::move(a)).first;
        }
        Acc& a = it->second;
        a.den += p;
        for (size_t g = 0; g < gammas.size(); ++g) a.num[g] += p * std::exp(gammas[g] * sq * X);
    }
    std::vector<LevelSetMoment> out;
    for (auto& [k, a] : sets) {
        LevelSetMoment lm;
        lm.x_rho = a.x_rho;
        lm.x_u = a.x_u;
        lm.prob = a.den;
        for (double v : a.num) lm.moment.push_back(v / a.den);
        out.push_back(std::move(lm));
    }
    return out;
}

MomentReport microcanonical_moment_check(const SpinModel& m, const MomentConfig& cfg_in)
{
    MomentReport rep;
    rep.cfg = cfg_in;
    if (rep.cfg.gammas.empty()) rep.cfg.gammas = default_gammas();
    rep.model = m.name;
    const auto& gs = rep.cfg.gammas;
    std::vector<double> all{0.0};
    for (double g : gs) {
        all.push_back(g);
        all.push_back(-g);
    }
    for (int l : rep.cfg.ls) {
        auto sets = level_set_moments(m, l, all, rep.cfg.variant, rep.cfg.observable, rep.cfg.max_states);
        MomentRow row;
        row.l = l;
        row.level_sets = int(sets.size());
        row.C = -INFINITY;
        for (const auto& s : sets) {
            row.gamma0_error = std::max(row.gamma0_error, std::fabs(s.moment[0] - 1.0));
            for (size_t k = 0; k < gs.size(); ++k) {
                double ep = s.moment[1 + 2 * k], em = s.moment[2 + 2 * k];
                double c = std::log(ep) / (gs[k] * gs[k] + gs[k] / std::sqrt(double(l)));
                if (c > row.C) {
                    row.C = c;
                    row.gamma_at = gs[k];
                    row.x_rho_at = s.x_rho;
                    row.x_u_at = s.x_u;
                }
                if (std::fabs(s.x_u) < 1e-12)
                    row.parity_error = std::max(row.parity_error, std::fabs(ep - em) / std::max(ep, em));
            }
        }
        rep.rows.push_back(row);
    }
    return rep;
}

double MomentReport::spread() const
{
    if (rows.empty()) return 0;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : rows) {
        lo = std::min(lo, r.C);
        hi = std::max(hi, r.C);
    }
    return lo > 0 ? hi / lo - 1 : INFINITY;
}

void MomentReport::write_csv(const std::string& dir) const
{
    ensure_dir(dir);
    CsvWriter w(dir + "/moments.csv",
                {"l", "C", "gamma_at", "x_rho_at", "x_u_at", "level_sets", "gamma0_error", "parity_error"});
    for (const auto& r : rows)
        w.row({double(r.l), r.C, r.gamma_at, r.x_rho_at, r.x_u_at, double(r.level_sets), r.gamma0_error,
               r.parity_error});
}

std::string MomentReport::summary() const
{
    std::ostringstream os;
    os << "microcanonical moments, model " << model << ", xi = " << cfg.observable << ", M(b) = " << cfg.variant
       << "\n";
    for (const auto& r : rows)
        os << "  l=" << r.l << " C=" << format_double(r.C) << " at gamma=" << r.gamma_at << " x=(" << r.x_rho_at
           << "," << r.x_u_at << ") level sets " << r.level_sets << "\n";
    os << "relative spread of C: " << format_double(spread()) << " (allowed " << cfg.stability << "): "
       << (stable() ? "stable" : "not stable") << "\n";
    return os.str();
}

} // namespace lhdl
