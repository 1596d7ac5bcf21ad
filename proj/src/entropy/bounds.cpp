#include "lhdl/entropy/bounds.hpp"
#include "lhdl/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lhdl {

bool BoundFit::finite() const { return std::isfinite(C); }

bool BoundReport::all_finite() const
{
    return std::all_of(fits.begin(), fits.end(), [](const BoundFit& f) { return f.finite(); });
}

bool BoundReport::all_indicator() const
{
    return std::all_of(fits.begin(), fits.end(), [](const BoundFit& f) { return f.indicator_ok; });
}

const BoundFit& BoundReport::get(const std::string& name) const
{
    for (const auto& f : fits)
        if (f.name == name) return f;
    throw Error(ErrorKind::Config, "no bound named " + name);
}

std::string BoundReport::render() const
{
    std::ostringstream os;
    char buf[200];
    std::snprintf(buf, sizeof buf, "bounds n=%g beta=%g r_lo=%g r_hi=%g grid=%d\n", n, beta, r_lo, r_hi, grid);
    os << buf;
    for (const auto& f : fits) {
        std::snprintf(buf, sizeof buf, "  %-10s C=%-12.5g at (%.4g, %.4g)  off-D3 max=%.2g %s\n", f.name.c_str(), f.C,
                      f.rho, f.u, f.outside, f.indicator_ok ? "ok" : "VIOLATED");
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "  d1_support C=%.5g   box M=%.4g  min I on box=%.3g\n", d1_support.C, box_M, box_I_min);
    os << buf;
    return os.str();
}

double box_inside_d1(const CharCurve& lo)
{
    // corner (M, M) must stay below sigma(-M)
    auto g = [&](double M) { return (-M >= lo.u_min()) ? lo(-M) - M : -1.0; };
    double a = 0, b = lo.r;
    if (g(b) > 0) return b;
    for (int k = 0; k < 60; ++k) {
        double m = 0.5 * (a + b);
        (g(m) > 0 ? a : b) = m;
    }
    return a;
}

BoundReport verify_bounds(const EntropyTable& t)
{
    BoundReport rep;
    rep.n = t.n;
    rep.beta = t.beta;
    rep.r_lo = t.r_lo;
    rep.r_hi = t.r_hi;
    rep.grid = t.grid;
    const double L = std::log(t.r_hi / t.r_lo);
    const double sl = std::sqrt(t.r_lo), sh = std::sqrt(t.r_hi);

    const char* names[] = {"s_rho", "s_u", "s_rr", "s_ru", "s_uu", "flux", "d3_support"};
    rep.fits.resize(7);
    for (int k = 0; k < 7; ++k) rep.fits[k].name = names[k];

    auto push = [](BoundFit& b, double ratio, const EntropyRow& e) {
        if (ratio > b.C || !std::isfinite(ratio)) {
            b.C = ratio;
            b.rho = e.rho;
            b.u = e.u;
        }
    };
    double d1k = 0;
    for (const auto& e : t.rows) {
        const double ind2 = (e.label == Region::D2) ? 1.0 : 0.0;
        const double lhs[6] = {std::fabs(e.S_rho - ind2),
                               std::fabs(e.S_u),
                               std::fabs(e.S_rr),
                               std::fabs(e.S_ru),
                               std::fabs(e.S_uu),
                               std::fabs(e.F - t.flux->psi(e.rho, e.u) * e.S_rho)};
        if (e.label != Region::D3) {
            for (int k = 0; k < 6; ++k) rep.fits[k].outside = std::max(rep.fits[k].outside, lhs[k]);
        } else {
            const double env[6] = {1.0,
                                   (sh - sl) / L,
                                   1.0 / (L * (t.r_lo + e.rho)),
                                   1.0 / (L * (sl + std::sqrt(e.rho) + std::fabs(e.u))),
                                   1.0 / L,
                                   sh / L * (t.r_hi + e.u * e.u)};
            for (int k = 0; k < 6; ++k) push(rep.fits[k], lhs[k] / env[k], e);
            if (e.rho > t.r_hi) push(rep.fits[6], (e.rho - t.r_hi) / (sh * std::fabs(e.u)), e);
        }
        if (e.label != Region::D1 && e.rho < t.r_lo && e.u != 0)
            d1k = std::max(d1k, (t.r_lo - e.rho) / (sl * std::fabs(e.u)));
    }
    for (auto& f : rep.fits) f.indicator_ok = f.outside <= 1e-8;
    rep.d1_support.name = "d1_support";
    rep.d1_support.C = d1k > 0 ? 1.0 / d1k : std::numeric_limits<double>::infinity();

    CharCurve lo = characteristic_curve(*t.flux, t.r_lo, 4 * std::sqrt(t.r_lo));
    rep.box_M = box_inside_d1(lo);
    for (const auto& e : t.rows)
        if (e.rho <= rep.box_M && std::fabs(e.u) <= rep.box_M) rep.box_I_min = std::min(rep.box_I_min, e.I());
    return rep;
}

std::string UniformReport::render() const
{
    std::ostringstream os;
    char buf[160];
    os << "uniform-in-n constants over n =";
    for (double n : n_list) os << ' ' << n;
    os << '\n';
    for (std::size_t k = 0; k < names.size(); ++k) {
        std::snprintf(buf, sizeof buf, "  %-10s max C=%-12.5g min C=%-12.5g spread=%.1f%%\n", names[k].c_str(), max_C[k],
                      min_C[k], 100 * spread(k));
        os << buf;
    }
    return os.str();
}

UniformReport verify_bounds_across_n(FluxPtr base, double r_lo, double r_hi, double beta,
                                     const std::vector<double>& n_list, const EntropyOptions& opt)
{
    UniformReport u;
    u.n_list = n_list;
    for (double n : n_list) u.per_n.push_back(verify_bounds(build_entropy(base, r_lo, r_hi, n, beta, opt)));
    if (u.per_n.empty()) return u;
    for (const auto& f : u.per_n.front().fits) u.names.push_back(f.name);
    u.max_C.assign(u.names.size(), 0.0);
    u.min_C.assign(u.names.size(), std::numeric_limits<double>::infinity());
    for (const auto& r : u.per_n)
        for (std::size_t k = 0; k < u.names.size(); ++k) {
            u.max_C[k] = std::max(u.max_C[k], r.fits[k].C);
            u.min_C[k] = std::min(u.min_C[k], r.fits[k].C);
        }
    return u;
}

} // namespace lhdl
