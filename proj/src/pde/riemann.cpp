#include "lhdl/pde/riemann.hpp"

#include "lhdl/core/errors.hpp"

#include <cmath>
#include <limits>

namespace lhdl {

RiemannInvariants riemann_invariants(double gamma, double rho, double u)
{
    if (std::abs(gamma - 0.75) < 1e-14) throw Error(ErrorKind::DegenerateGamma, "gamma = 3/4");
    if (rho < 0) throw Error(ErrorKind::OutOfDomain, "rho < 0");
    double g1 = 2 * gamma - 1, g2 = 2 * gamma - 2;
    double sq = std::sqrt(g1 * g1 * u * u + 4 * rho);
    RiemannInvariants out;
    if (std::abs(g1) < 1e-14) {
        // gamma = 1/2: the first factor tends to one
        out.w = sq + u;
        out.z = sq - u;
        return out;
    }
    double p = g1 / (4 * gamma - 3), q = g2 / (4 * gamma - 3);
    double a = std::max(0.0, (sq + g1 * u) / (2 * g1));
    double b = std::max(0.0, (sq - g1 * u) / (2 * g1));
    out.w = std::pow(a, p) * std::pow(std::max(0.0, sq - g2 * u), q);
    out.z = std::pow(b, p) * std::pow(std::max(0.0, sq + g2 * u), q);
    return out;
}

std::array<double, 4> riemann_gradients(double gamma, double rho, double u)
{
    double h = 1e-4 * std::max(rho, 1e-3);
    double hu = 1e-4;
    auto W = [&](double r, double v) { return riemann_invariants(gamma, r, v); };
    auto d = [&](double s, bool dr) {
        RiemannInvariants p = dr ? W(rho + s, u) : W(rho, u + s);
        RiemannInvariants m = dr ? W(rho - s, u) : W(rho, u - s);
        return std::array<double, 2>{(p.w - m.w) / (2 * s), (p.z - m.z) / (2 * s)};
    };
    auto rich = [&](double s, bool dr) {
        auto a = d(s, dr), b = d(0.5 * s, dr);
        return std::array<double, 2>{(4 * b[0] - a[0]) / 3, (4 * b[1] - a[1]) / 3};
    };
    auto gr = rich(h, true), gu = rich(hu, false);
    return {gr[0], gu[0], gr[1], gu[1]};
}

double eigen_lambda(double gamma, double rho, double u)
{
    return 0.5 * (std::sqrt((2 * gamma - 1) * (2 * gamma - 1) * u * u + 4 * rho) + (2 * gamma + 1) * u);
}

double eigen_mu(double gamma, double rho, double u)
{
    return 0.5 * ((2 * gamma + 1) * u - std::sqrt((2 * gamma - 1) * (2 * gamma - 1) * u * u + 4 * rho));
}

GnlValues genuine_nonlinearity(double gamma, double rho, double u)
{
    double g1 = 2 * gamma - 1;
    double sq = std::sqrt(g1 * g1 * u * u + 4 * rho);
    double lam = eigen_lambda(gamma, rho, u), mu = eigen_mu(gamma, rho, u);
    double lam_r = 1 / sq, lam_u = 0.5 * (g1 * g1 * u / sq + 2 * gamma + 1);
    double mu_r = -1 / sq, mu_u = 0.5 * (-g1 * g1 * u / sq + 2 * gamma + 1);
    GnlValues v;
    v.gn_lambda = lam_r * (lam - 2 * gamma * u) + lam_u;
    v.gn_mu = mu_r * (mu - 2 * gamma * u) + mu_u;
    return v;
}

double gnl_locus(double gamma, double u)
{
    double g1 = 2 * gamma - 1;
    return -4 * gamma * g1 * g1 / ((gamma + 1) * (gamma + 1)) * u * u;
}

double convex_entropy(double rho, double u)
{
    return rho * std::log(rho) + 0.5 * u * u;
}

double convex_entropy_residual(double gamma, double rho, double u)
{
    double s_rr = 1 / rho, s_ru = 0, s_uu = 1;
    return rho * s_rr + (2 * gamma - 1) * u * s_ru - s_uu;
}

double char_slope(double psi_rho, double psi_u, double phi_rho, double phi_u)
{
    double b = phi_u - psi_rho;
    double disc = b * b + 4 * phi_rho * psi_u;
    if (disc < 0) throw Error(ErrorKind::ComplexEigenvalues, "characteristic discriminant < 0");
    // rationalized branch avoids cancellation when b > 0
    if (b > 0) return 2 * psi_u / (std::sqrt(disc) + b);
    return (std::sqrt(disc) - b) / (2 * phi_rho);
}

std::vector<double> invariant_level_line(double gamma, bool use_w, double c, const std::vector<double>& us)
{
    std::vector<double> out;
    out.reserve(us.size());
    for (double u : us) {
        auto val = [&](double r) {
            auto wz = riemann_invariants(gamma, r, u);
            return (use_w ? wz.w : wz.z) - c;
        };
        double lo = 0, hi = 1;
        if (val(lo) > 0) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        while (val(hi) < 0 && hi < 1e12) hi *= 2;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            double mid = 0.5 * (lo + hi);
            (val(mid) < 0 ? lo : hi) = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

} // namespace lhdl
