#include "lhdl/entropy/char_curve.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/pde/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lhdl {

double sigma_slope(const FluxFunctions& f, double rho, double u)
{
    FluxJet j = f.jet(rho, u);
    return char_slope(j.psi_rho, j.psi_u, j.phi_rho, j.phi_u);
}

double CharCurve::operator()(double x) const
{
    if (!covers(x)) throw Error(ErrorKind::OutOfDomain, "u outside the sampled characteristic curve");
    auto it = std::upper_bound(u.begin(), u.end(), x);
    std::size_t k = (it == u.begin()) ? 0 : std::size_t(it - u.begin()) - 1;
    if (k + 1 >= u.size()) return rho.back();
    const double h = u[k + 1] - u[k];
    const double t = (x - u[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * rho[k] + (t3 - 2 * t2 + t) * h * slope[k] + (-2 * t3 + 3 * t2) * rho[k + 1] +
           (t3 - t2) * h * slope[k + 1];
}

namespace {

struct Branch {
    std::vector<double> u, rho, slope;
    double u_hit = std::numeric_limits<double>::quiet_NaN();
    bool left = false;
};

// Close the curve on rho = 0 by integrating du/drho = 1/g downwards.
void land(const FluxFunctions& f, double u, double rho, double floor_rho, Branch& b)
{
    const int m = 8;
    const double h = -rho / m;
    auto inv = [&](double r, double x) { return 1.0 / sigma_slope(f, std::max(r, floor_rho), x); };
    for (int k = 0; k < m; ++k) {
        double k1 = inv(rho, u);
        double k2 = inv(rho + 0.5 * h, u + 0.5 * h * k1);
        double k3 = inv(rho + 0.5 * h, u + 0.5 * h * k2);
        double k4 = inv(rho + h, u + h * k3);
        u += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        rho += h;
    }
    b.u_hit = u;
    b.u.push_back(u);
    b.rho.push_back(0.0);
    b.slope.push_back(sigma_slope(f, floor_rho, u));
}

// Adaptive RK4 (step doubling) from (u0, rho0) to u1.  scale is the squared
// length scale of the curve; the error tolerance is tol * (rho + scale).
Branch integrate(const FluxFunctions& f, double u0, double rho0, double u1, double scale, const CurveOptions& opt)
{
    Branch b;
    const double dir = u1 > u0 ? 1.0 : -1.0;
    const double floor_rho = 1e-14 * scale;
    double u = u0, rho = rho0;
    double g = sigma_slope(f, rho, u);
    b.u.push_back(u);
    b.rho.push_back(rho);
    b.slope.push_back(g);
    double h = 1e-3 * std::sqrt(scale);

    auto rk = [&](double uu, double rr, double k1, double hh, bool& neg) {
        auto eval = [&](double r, double x) {
            if (r < 0) { neg = true; return k1; }
            return sigma_slope(f, r, x);
        };
        double k2 = eval(rr + 0.5 * hh * k1, uu + 0.5 * hh);
        double k3 = eval(rr + 0.5 * hh * k2, uu + 0.5 * hh);
        double k4 = eval(rr + hh * k3, uu + hh);
        return rr + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    };

    for (int step = 0; step < opt.max_steps; ++step) {
        double rem = (u1 - u) * dir;
        if (rem <= 0) break;
        double cap = opt.h_rel_max * (std::sqrt(std::max(rho, 0.0)) + std::fabs(u) + 1e-3 * std::sqrt(scale));
        h = std::min({h, cap, rem});
        bool neg = false;
        double full, half2, gm = 0;
        try {
            full = rk(u, rho, g, dir * h, neg);
            double mid = rk(u, rho, g, dir * 0.5 * h, neg);
            if (!neg && mid >= 0) {
                gm = sigma_slope(f, mid, u + dir * 0.5 * h);
                half2 = rk(u + dir * 0.5 * h, mid, gm, dir * 0.5 * h, neg);
            } else {
                neg = true;
                half2 = full;
            }
        } catch (const Error&) {
            if (h > 1e-9 * std::sqrt(scale)) { h *= 0.25; continue; }
            b.left = true;
            break;
        }
        if (neg || half2 < 0) {
            if (dir < 0) {
                // near rho = 0 on the backward branch: either refine or land
                if (rho > 1e-6 * scale && h > 1e-6 * std::sqrt(scale)) { h *= 0.25; continue; }
                land(f, u, rho, floor_rho, b);
                return b;
            }
            b.left = true;
            break;
        }
        double err = std::fabs(half2 - full);
        double tol = opt.tol * (std::fabs(rho) + scale);
        if (err > tol && h > 1e-12 * std::sqrt(scale)) {
            h *= std::max(0.2, 0.9 * std::pow(tol / err, 0.2));
            continue;
        }
        double un = (h == rem) ? u1 : u + dir * h;
        double rn = half2 + (half2 - full) / 15.0;
        if (!f.domain().contains(rn, un, 0.0)) { b.left = true; break; }
        double gn;
        try {
            gn = sigma_slope(f, rn, un);
        } catch (const Error&) {
            b.left = true;
            break;
        }
        u = un;
        rho = rn;
        g = gn;
        b.u.push_back(u);
        b.rho.push_back(rho);
        b.slope.push_back(g);
        double grow = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
        h *= std::clamp(grow, 0.2, 4.0);
    }
    return b;
}

CharCurve join(const Branch& back, const Branch& fwd)
{
    CharCurve c;
    for (std::size_t k = back.u.size(); k-- > 1;) {
        c.u.push_back(back.u[k]);
        c.rho.push_back(back.rho[k]);
        c.slope.push_back(back.slope[k]);
    }
    c.u.insert(c.u.end(), fwd.u.begin(), fwd.u.end());
    c.rho.insert(c.rho.end(), fwd.rho.begin(), fwd.rho.end());
    c.slope.insert(c.slope.end(), fwd.slope.begin(), fwd.slope.end());
    c.u_hit = back.u_hit;
    c.truncated = fwd.left;
    return c;
}

} // namespace

CharCurve characteristic_curve(const FluxFunctions& f, double r, double u_max, const CurveOptions& opt)
{
    if (r == 0) throw Error(ErrorKind::SingularStart, "sigma(.;0) starts at the singular point (0,0)");
    if (!(r > 0) || !f.domain().contains(r, 0.0))
        throw Error(ErrorKind::OutOfDomain, "characteristic start (r,0) outside the domain");
    Branch fwd = integrate(f, 0.0, r, u_max, r, opt);
    Branch back = integrate(f, 0.0, r, -u_max, r, opt);
    CharCurve c = join(back, fwd);
    c.r = r;
    return c;
}

CharCurve boundary_curve(const FluxFunctions& f, double v, double u_end, const CurveOptions& opt)
{
    if (!(v > 0)) throw Error(ErrorKind::SingularStart, "boundary curve needs v > 0");
    const double scale = v * v;
    const double rho_s = 1e-12 * scale;
    const double u_s = -v + rho_s / sigma_slope(f, rho_s, -v);
    Branch fwd = integrate(f, u_s, rho_s, u_end, scale, opt);
    Branch back;
    back.u = {-v, u_s};
    back.rho = {0.0, rho_s};
    back.slope = {sigma_slope(f, 1e-14 * scale, -v), 0.0};
    back.u_hit = -v;
    std::reverse(back.u.begin(), back.u.end());
    std::reverse(back.rho.begin(), back.rho.end());
    std::reverse(back.slope.begin(), back.slope.end());
    CharCurve c = join(back, fwd);
    c.r = c.covers(0.0) ? c(0.0) : std::numeric_limits<double>::quiet_NaN();
    return c;
}

Lemma1Fit fit_lemma1(const FluxFunctions& f, double r0, int n_r, int n_u)
{
    Lemma1Fit fit;
    fit.r0 = r0;
    fit.C1 = 0;
    fit.C2 = std::numeric_limits<double>::infinity();
    const double g = f.gamma();
    const double e_r = (4 * g - 3) / (4 * g - 2), e_u = 1.0 / (2 * g - 1);
    for (int a = 0; a < n_r; ++a) {
        double r = r0 * std::pow(1e-3, double(a) / std::max(1, n_r - 1));
        double span = 2.0 * std::sqrt(r0);
        CharCurve c = characteristic_curve(f, r, span);
        double lo = std::isnan(c.u_hit) ? c.u_min() : c.u_hit;
        for (int k = 1; k <= n_u; ++k) {
            double u = std::max(lo * double(k) / n_u, c.u_min());
            double kk = (r - c(u)) / (std::sqrt(r) * std::fabs(u));
            fit.C1 = std::max(fit.C1, kk);
            fit.C2 = std::min(fit.C2, kk);
            ++fit.samples;
        }
        double hi = c.u_max();
        for (int k = 1; k <= n_u; ++k) {
            double u = std::min(hi * double(k) / n_u, c.u_max());
            double env = std::sqrt(r) * u;
            if (g > 0.5) env = std::min(env, std::pow(r, e_r) * std::pow(u, e_u));
            fit.C1 = std::max(fit.C1, (c(u) - r) / env);
            ++fit.samples;
        }
    }
    return fit;
}

const char* region_name(Region r)
{
    switch (r) {
    case Region::D1: return "D1";
    case Region::D2: return "D2";
    case Region::D3: return "D3";
    }
    return "?";
}

Region classify(const CharCurve& c, double rho, double u)
{
    const double a = std::fabs(u);
    double lower;
    if (-a >= c.u_min()) lower = c(-a);
    else if (!std::isnan(c.u_hit)) lower = -std::numeric_limits<double>::infinity();
    else throw Error(ErrorKind::OutOfDomain, "characteristic curve too short to classify point");
    double upper;
    if (a <= c.u_max()) upper = c(a);
    else if (c.truncated) upper = std::numeric_limits<double>::infinity();
    else throw Error(ErrorKind::OutOfDomain, "characteristic curve too short to classify point");
    if (rho < lower) return Region::D1;
    if (rho > upper) return Region::D2;
    return Region::D3;
}

double CharGeometry::sigma(double u, double r) const
{
    CharCurve c = characteristic_curve(*flux, r, std::fabs(u) * 1.001 + 1e-12);
    if (c.covers(u)) return c(u);
    return u < 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
}

namespace {

// The backward branch must land on rho = 0 and the forward branch must
// stay inside the domain over the span later used by the lattice.
bool usable_r0(const FluxFunctions& f, double r)
{
    if (!f.domain().interior(r, 0.0)) return false;
    try {
        CharCurve c = characteristic_curve(f, r, 1e6 * std::sqrt(r));
        if (std::isnan(c.u_hit)) return false;
        double span = 1.5 * std::fabs(c.u_hit);
        if (!f.domain().interior(0.0 + 1e-12, span)) return false;
        CharCurve d = characteristic_curve(f, r, span);
        return !d.truncated || d.u_max() >= span;
    } catch (const Error&) {
        return false;
    }
}

} // namespace

CharGeometry build_geometry(FluxPtr f, double r_lo, double r_hi, double r0, double r0_cap)
{
    if (!(r_lo > 0 && r_hi > r_lo)) throw Error(ErrorKind::Config, "need 0 < r_lo < r_hi");
    CharGeometry g;
    g.flux = f;
    g.r_lo = r_lo;
    g.r_hi = r_hi;
    if (r0 > 0) {
        if (!(r0 > r_hi)) throw Error(ErrorKind::Config, "need r_hi < r0");
        g.r0 = r0;
    } else {
        g.r0_adaptive = true;
        double top = r0_cap * r_hi;
        if (usable_r0(*f, top)) g.r0 = top;
        else {
            double a = r_hi, b = top;
            if (!usable_r0(*f, a * (1 + 1e-9)))
                throw Error(ErrorKind::OutOfDomain, "no usable r0 above r_hi for this flux/domain");
            for (int k = 0; k < 50; ++k) {
                double m = 0.5 * (a + b);
                (usable_r0(*f, m) ? a : b) = m;
            }
            g.r0 = a;
        }
    }
    g.lemma1 = fit_lemma1(*f, g.r0);
    CharCurve c0 = characteristic_curve(*f, g.r0, 1e6 * std::sqrt(g.r0));
    double span = 1.5 * std::fabs(c0.u_hit);
    g.lo = characteristic_curve(*f, r_lo, span);
    g.hi = characteristic_curve(*f, r_hi, span);
    return g;
}

Region classify(const CharGeometry& g, double rho, double u)
{
    if (classify(g.lo, rho, u) == Region::D1) return Region::D1;
    if (classify(g.hi, rho, u) == Region::D2) return Region::D2;
    return Region::D3;
}

} // namespace lhdl
