#include "lhdl/entropy/goursat.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/pde/riemann.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lhdl {

using Mat = Eigen::MatrixXd;

namespace {

constexpr double kSixth = 1.0 / 6.0;

struct Sampled {
    Mat A, B, C;
};

Sampled sample(const GoursatProblem& p, int n)
{
    Sampled s{Mat(n + 1, n + 1), Mat(n + 1, n + 1), Mat(n + 1, n + 1)};
    const double hw = (p.x2 - p.x1) / n, hz = (p.y2 - p.y1) / n;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            auto c = p.ABC(p.x1 + a * hw, p.y2 - b * hz);
            s.A(a, b) = c[0];
            s.B(a, b) = c[1];
            s.C(a, b) = c[2];
        }
    return s;
}

double a_integral(const Sampled& s, double hz, int a0, int a1, int b0, int b1)
{
    double worst = 0;
    for (int a = a0; a <= a1; ++a) {
        double acc = 0;
        for (int b = b0; b < b1; ++b) acc += 0.5 * hz * (std::fabs(s.A(a, b)) + std::fabs(s.A(a, b + 1)));
        worst = std::max(worst, acc);
    }
    return worst;
}

double b_integral(const Sampled& s, double hw, int a0, int a1, int b0, int b1)
{
    double worst = 0;
    for (int b = b0; b <= b1; ++b) {
        double acc = 0;
        for (int a = a0; a < a1; ++a) acc += 0.5 * hw * (std::fabs(s.B(a, b)) + std::fabs(s.B(a + 1, b)));
        worst = std::max(worst, acc);
    }
    return worst;
}

double c_integral(const Sampled& s, double hw, double hz, int a0, int a1, int b0, int b1)
{
    double acc = 0;
    for (int a = a0; a < a1; ++a)
        for (int b = b0; b < b1; ++b)
            acc += 0.25 * hw * hz *
                   (std::fabs(s.C(a, b)) + std::fabs(s.C(a + 1, b)) + std::fabs(s.C(a, b + 1)) +
                    std::fabs(s.C(a + 1, b + 1)));
    return acc;
}

// greedy breakpoints along one axis
std::vector<int> greedy(int n, const std::function<double(int, int)>& integral)
{
    std::vector<int> br{0};
    int s = 0;
    while (s < n) {
        if (integral(s, s + 1) >= kSixth)
            throw Error(ErrorKind::NoContraction, "a single grid cell violates the 1/6 coefficient bound");
        int e = s + 1;
        while (e < n && integral(s, e + 1) < kSixth) ++e;
        br.push_back(e);
        s = e;
    }
    return br;
}

// cumulative trapezoid along index k from k0
void cumtrap(const double* f, std::ptrdiff_t stride, int len, double h, double* out, std::ptrdiff_t ostride)
{
    out[0] = 0;
    for (int k = 1; k < len; ++k)
        out[k * ostride] = out[(k - 1) * ostride] + 0.5 * h * (f[(k - 1) * stride] + f[k * stride]);
}

int picard_block(Mat& U, const Sampled& s, double hw, double hz, int a0, int a1, int b0, int b1, double tol)
{
    const int na = a1 - a0 + 1, nb = b1 - b0 + 1;
    Mat Ab = s.A.block(a0, b0, na, nb), Bb = s.B.block(a0, b0, na, nb), Cb = s.C.block(a0, b0, na, nb);
    Eigen::VectorXd ft(na), gt(nb), tmp(std::max(na, nb));
    {
        Eigen::VectorXd bu(na);
        for (int a = 0; a < na; ++a) bu[a] = Bb(a, 0) * U(a0 + a, b0);
        cumtrap(bu.data(), 1, na, hw, tmp.data(), 1);
        for (int a = 0; a < na; ++a) ft[a] = U(a0 + a, b0) - tmp[a];
        Eigen::VectorXd au(nb);
        for (int b = 0; b < nb; ++b) au[b] = Ab(0, b) * U(a0, b0 + b);
        cumtrap(au.data(), 1, nb, hz, tmp.data(), 1);
        // int_{z_b0}^{z_b} = -hz * trapezoid since z decreases with b
        for (int b = 0; b < nb; ++b) gt[b] = U(a0, b0 + b) + tmp[b];
    }
    const double u00 = U(a0, b0);
    Mat W(na, nb), IA(na, nb), IB(na, nb), IC(na, nb), R(na, nb);
    for (int it = 1; it <= 1000; ++it) {
        Mat Ub = U.block(a0, b0, na, nb);
        W = Ab.cwiseProduct(Ub);
        for (int a = 0; a < na; ++a) cumtrap(&W(a, 0), W.outerStride(), nb, hz, &IA(a, 0), IA.outerStride());
        W = Bb.cwiseProduct(Ub);
        for (int b = 0; b < nb; ++b) cumtrap(&W(0, b), 1, na, hw, &IB(0, b), 1);
        W = Cb.cwiseProduct(Ub);
        for (int a = 0; a < na; ++a) cumtrap(&W(a, 0), W.outerStride(), nb, hz, &R(a, 0), R.outerStride());
        for (int b = 0; b < nb; ++b) cumtrap(&R(0, b), 1, na, hw, &IC(0, b), 1);
        double change = 0, sup = 0;
        for (int a = 1; a < na; ++a)
            for (int b = 1; b < nb; ++b) {
                // IA and IC carry the orientation sign of the z integral
                double v = ft[a] + gt[b] - u00 - IA(a, b) + IB(a, b) + IC(a, b);
                change = std::max(change, std::fabs(v - U(a0 + a, b0 + b)));
                sup = std::max(sup, std::fabs(v));
                U(a0 + a, b0 + b) = v;
            }
        if (change <= tol * std::max(1.0, sup)) return it;
        if (!std::isfinite(change)) break;
    }
    throw Error(ErrorKind::NoContraction, "Picard iteration did not converge");
}

} // namespace

double coefficient_integral_bound(const GoursatProblem& p, int n)
{
    Sampled s = sample(p, n);
    const double hw = (p.x2 - p.x1) / n, hz = (p.y2 - p.y1) / n;
    return std::max({a_integral(s, hz, 0, n, 0, n), b_integral(s, hw, 0, n, 0, n), c_integral(s, hw, hz, 0, n, 0, n)});
}

GoursatResult solve_goursat(const GoursatProblem& p, int n, double tol)
{
    if (!(p.x2 > p.x1 && p.y2 > p.y1) || n < 2) throw Error(ErrorKind::Config, "degenerate Goursat rectangle");
    const double hw = (p.x2 - p.x1) / n, hz = (p.y2 - p.y1) / n;
    Sampled s = sample(p, n);

    std::vector<int> bw = greedy(n, [&](int a0, int a1) { return b_integral(s, hw, a0, a1, 0, n); });
    std::vector<int> bz = greedy(n, [&](int b0, int b1) { return a_integral(s, hz, 0, n, b0, b1); });
    // refine both axes until every block also has a small C integral
    for (;;) {
        bool ok = true;
        std::vector<char> splitw(bw.size() - 1, 0), splitz(bz.size() - 1, 0);
        for (std::size_t I = 0; I + 1 < bw.size(); ++I)
            for (std::size_t J = 0; J + 1 < bz.size(); ++J)
                if (c_integral(s, hw, hz, bw[I], bw[I + 1], bz[J], bz[J + 1]) >= kSixth) {
                    ok = false;
                    splitw[I] = splitz[J] = 1;
                }
        if (ok) break;
        bool any = false;
        auto refine = [&](std::vector<int>& br, const std::vector<char>& flag) {
            std::vector<int> out{br[0]};
            for (std::size_t k = 0; k + 1 < br.size(); ++k) {
                if (flag[k] && br[k + 1] - br[k] > 1) {
                    out.push_back((br[k] + br[k + 1]) / 2);
                    any = true;
                }
                out.push_back(br[k + 1]);
            }
            br = out;
        };
        refine(bw, splitw);
        refine(bz, splitz);
        if (!any) throw Error(ErrorKind::NoContraction, "cannot split below the 1/6 bound on C");
    }

    GoursatResult r;
    r.w.resize(n + 1);
    r.z.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        r.w[k] = p.x1 + k * hw;
        r.z[k] = p.y2 - k * hz;
    }
    r.U = Mat::Zero(n + 1, n + 1);
    double sf = 0, sg = 0;
    for (int k = 0; k <= n; ++k) {
        r.U(k, 0) = p.f(r.w[k]);
        r.U(0, k) = p.g(r.z[k]);
        sf = std::max(sf, std::fabs(r.U(k, 0)));
        sg = std::max(sg, std::fabs(r.U(0, k)));
    }
    r.M = sf + sg;
    r.blocks = int((bw.size() - 1) * (bz.size() - 1));
    for (std::size_t I = 0; I + 1 < bw.size(); ++I)
        for (std::size_t J = 0; J + 1 < bz.size(); ++J)
            r.iterations += picard_block(r.U, s, hw, hz, bw[I], bw[I + 1], bz[J], bz[J + 1], tol);
    r.sup = r.U.cwiseAbs().maxCoeff();
    return r;
}

// ---------------------------------------------------------------------------

CharCoeffs zero_coeffs() { return constant_coeffs(0, 0, 0); }

CharCoeffs constant_coeffs(double alpha, double beta, double nu)
{
    CharCoeffs c;
    c.eval = [=](double, double) { return std::array<double, 3>{alpha, beta, nu}; };
    return c;
}

namespace {

struct InvJet {
    double w, z, w_r, w_u, z_r, z_u;
};

// closed-form invariants of the limit system with their gradients (gamma > 3/4)
InvJet limit_inv(double g, double rho, double u)
{
    const double p = (2 * g - 1) / (4 * g - 3), q = (2 * g - 2) / (4 * g - 3);
    const double sq = std::sqrt((2 * g - 1) * (2 * g - 1) * u * u + 4 * rho);
    const double s_r = 2 / sq, s_u = (2 * g - 1) * (2 * g - 1) * u / sq;
    RiemannInvariants ri = riemann_invariants(g, rho, u);
    InvJet j{ri.w, ri.z, 0, 0, 0, 0};
    const double X = (sq + (2 * g - 1) * u) / (4 * g - 2), Y = sq - (2 * g - 2) * u;
    const double Xz = (sq - (2 * g - 1) * u) / (4 * g - 2), Yz = sq + (2 * g - 2) * u;
    j.w_r = j.w * (p * s_r / (4 * g - 2) / X + q * s_r / Y);
    j.w_u = j.w * (p * (s_u + 2 * g - 1) / (4 * g - 2) / X + q * (s_u - (2 * g - 2)) / Y);
    j.z_r = j.z * (p * s_r / (4 * g - 2) / Xz + q * s_r / Yz);
    j.z_u = j.z * (p * (s_u - (2 * g - 1)) / (4 * g - 2) / Xz + q * (s_u + 2 * g - 2) / Yz);
    return j;
}

} // namespace

LimitPoint limit_point(double g, double w, double z)
{
    if (!(g > 0.75)) throw Error(ErrorKind::DegenerateGamma, "limit coefficients need gamma > 3/4");
    if (!(w > 0 && z > 0)) throw Error(ErrorKind::OutOfDomain, "limit_point needs w, z > 0");
    // Newton in (sqrt(rho), u); on the diagonal w = c sqrt(rho)
    const double c = riemann_invariants(g, 1.0, 0.0).w;
    double sr = std::min(w, z) / c, u = 0.5 * (w - z);
    auto resid = [&](double s, double x) {
        RiemannInvariants ri = riemann_invariants(g, s * s, x);
        return std::hypot(ri.w - w, ri.z - z);
    };
    double r0 = resid(sr, u);
    for (int it = 0; it < 100 && r0 > 1e-15 * (w + z); ++it) {
        InvJet j = limit_inv(g, sr * sr, u);
        const double a11 = 2 * sr * j.w_r, a12 = j.w_u, a21 = 2 * sr * j.z_r, a22 = j.z_u;
        const double det = a11 * a22 - a12 * a21;
        const double e1 = w - j.w, e2 = z - j.z;
        const double ds = (e1 * a22 - a12 * e2) / det, du = (a11 * e2 - a21 * e1) / det;
        double t = 1;
        for (; t > 1e-6; t *= 0.5) {
            double sn = std::fabs(sr + t * ds), un = u + t * du;
            double rn = resid(sn, un);
            if (rn < r0) {
                sr = sn;
                u = un;
                r0 = rn;
                break;
            }
        }
        if (t <= 1e-6) break;
    }
    if (r0 > 1e-10 * (w + z)) throw Error(ErrorKind::NonConvergence, "limit_point inversion failed");
    LimitPoint lp;
    lp.rho = sr * sr;
    lp.u = u;
    InvJet j = limit_inv(g, lp.rho, u);
    const double det = j.w_r * j.z_u - j.w_u * j.z_r;
    lp.rho_w = j.z_u / det;
    lp.rho_z = -j.w_u / det;
    lp.u_w = -j.z_r / det;
    lp.u_z = j.w_r / det;
    return lp;
}

CharCoeffs limit_char_coeffs(double g, double kappa)
{
    CharCoeffs c;
    c.kappa = kappa;
    c.eval = [g, kappa](double w, double z) {
        LimitPoint p = limit_point(g, w, z);
        const double sq = std::sqrt((2 * g - 1) * (2 * g - 1) * p.u * p.u + 4 * p.rho);
        const double lr = 1 / sq, lu = 0.5 * ((2 * g + 1) + (2 * g - 1) * (2 * g - 1) * p.u / sq);
        const double mr = -1 / sq, mu_u = 0.5 * ((2 * g + 1) - (2 * g - 1) * (2 * g - 1) * p.u / sq);
        const double lam_z = lr * p.rho_z + lu * p.u_z;
        const double mu_w = mr * p.rho_w + mu_u * p.u_w;
        return std::array<double, 3>{(lam_z - kappa * p.u_z) / sq, -(mu_w - kappa * p.u_w) / sq, 0.0};
    };
    return c;
}

// ---------------------------------------------------------------------------

double RiemannFunction::diag_dwdz(int k) const
{
    const int a = n - k, b = k;
    auto d = [&](int idx, bool along_a) {
        auto v = [&](int m) { return along_a ? phi(m, b) : phi(a, m); };
        if (idx == 0) return (-3 * v(0) + 4 * v(1) - v(2)) / 2;
        if (idx == n) return (3 * v(n) - 4 * v(n - 1) + v(n - 2)) / 2;
        return (v(idx + 1) - v(idx - 1)) / 2;
    };
    // s = w0 - a h, t = z0 + b h
    const double phi_w = -d(a, true) / h, phi_z = d(b, false) / h;
    return phi_w - phi_z;
}

RiemannFunction riemann_function(const CharCoeffs& c, double w0, double z0, int n)
{
    if (!(w0 > z0)) throw Error(ErrorKind::Config, "riemann_function needs z0 < w0");
    boost::math::quadrature::gauss<double, 15> gq;
    GoursatProblem p;
    // lemma coordinates (W, Z) = (-s, -t) put the data on W = x1 and Z = y2
    p.x1 = -w0;
    p.x2 = -z0;
    p.y1 = -w0;
    p.y2 = -z0;
    p.ABC = [&c](double W, double Z) {
        auto k = c.eval(-W, -Z);
        return std::array<double, 3>{-k[0], -k[1], k[2]};
    };
    p.f = [&](double W) {   // phi(s, z0) = exp int_{w0}^{s} beta(v, z0) dv
        double s = -W;
        if (s == w0) return 1.0;
        return std::exp(gq.integrate([&](double v) { return c.eval(v, z0)[1]; }, w0, s));
    };
    p.g = [&](double Z) {   // phi(w0, t) = exp int_{z0}^{t} alpha(w0, v) dv
        double t = -Z;
        if (t == z0) return 1.0;
        return std::exp(gq.integrate([&](double v) { return c.eval(w0, v)[0]; }, z0, t));
    };
    GoursatResult g = solve_goursat(p, n);
    RiemannFunction r;
    r.w0 = w0;
    r.z0 = z0;
    r.n = n;
    r.h = (w0 - z0) / n;
    r.phi = g.U;
    r.blocks = g.blocks;
    r.iterations = g.iterations;
    return r;
}

double solve_cauchy(const RiemannFunction& R, const CharCoeffs& c, const CauchyData& d)
{
    const int n = R.n;
    const double h = R.h;
    double acc = 0.5 * R.diag(0) * d.s_tilde(R.z0) + 0.5 * R.diag(n) * d.s_tilde(R.w0);
    double I1 = 0, I2 = 0, I3 = 0;
    for (int k = 0; k <= n; ++k) {
        const double v = R.z0 + k * h;
        const double wt = (k == 0 || k == n) ? 0.5 * h : h;
        const double s = d.s_tilde(v);
        const double t = d.t_tilde ? d.t_tilde(v) : 0.0;
        auto co = c.eval(v, v);
        I1 += wt * R.diag(k) * t;
        I2 += wt * R.diag_dwdz(k) * s;
        I3 += wt * R.diag(k) * (co[1] - co[0]) * s;
    }
    acc += 0.5 * I1 - 0.5 * I2 + I3;
    if (d.rhs) {
        // triangle a + b <= n: full cells plus half cells along the diagonal
        double T = 0;
        auto gp = [&](int a, int b) { return d.rhs(R.s_of(a), R.t_of(b)) * R.phi(a, b); };
        for (int a = 0; a < n; ++a)
            for (int b = 0; a + b < n; ++b) {
                if (a + b + 2 <= n) T += 0.25 * h * h * (gp(a, b) + gp(a + 1, b) + gp(a, b + 1) + gp(a + 1, b + 1));
                else T += 0.5 * h * h * (gp(a, b) + gp(a + 1, b) + gp(a, b + 1)) / 3.0;
            }
        acc -= T;
    }
    return acc;
}

double solve_cauchy(const CharCoeffs& c, const CauchyData& d, double w0, double z0, int n)
{
    if (w0 == z0) return d.s_tilde(w0);
    return solve_cauchy(riemann_function(c, w0, z0, n), c, d);
}

EnvelopeFit fit_riemann_envelope(double gamma, double kappa, const std::vector<std::array<double, 2>>& points,
                                 int n)
{
    EnvelopeFit e;
    e.gamma = gamma;
    e.kappa = kappa;
    e.exponent = (kappa - 1) / (2 * gamma - 1);
    const CharCoeffs c = limit_char_coeffs(gamma, kappa);
    for (auto [w0, z0] : points) {
        if (!(0 < z0 && z0 < w0)) throw Error(ErrorKind::Config, "envelope points need 0 < z0 < w0");
        RiemannFunction R = riemann_function(c, w0, z0, n);
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b) {
                double s = R.s_of(a);
                e.c = std::max(e.c, std::fabs(R.at(a, b)) / std::pow(s / w0, e.exponent));
            }
        for (int k = 0; k <= n; ++k) {
            double s = R.t_of(k);
            e.c_diag = std::max(e.c_diag, std::fabs(R.diag_dwdz(k)) * w0 / std::pow(s / w0, e.exponent - 1));
        }
        ++e.triangles;
    }
    return e;
}

} // namespace lhdl
