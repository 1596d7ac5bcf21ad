#include "lhdl/model/thermo.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/core/numdiff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lhdl {

double log_partition(const SpinModel& m, double tau, double theta)
{
    double mx = -INFINITY;
    for (int w = 0; w < m.K(); ++w)
        if (m.pi[w] > 0) mx = std::max(mx, tau * m.eta[w] + theta * m.zeta[w]);
    double acc = 0.0;
    for (int w = 0; w < m.K(); ++w)
        if (m.pi[w] > 0) acc += m.pi[w] * std::exp(tau * m.eta[w] + theta * m.zeta[w] - mx);
    return mx + std::log(acc);
}

std::vector<double> gibbs_measure(const SpinModel& m, double tau, double theta)
{
    double G = log_partition(m, tau, theta);
    std::vector<double> p(m.K(), 0.0);
    for (int w = 0; w < m.K(); ++w)
        if (m.pi[w] > 0) p[w] = m.pi[w] * std::exp(tau * m.eta[w] + theta * m.zeta[w] - G);
    return p;
}

SiteMoments site_moments(const SpinModel& m, const std::vector<double>& p)
{
    SiteMoments s;
    for (int w = 0; w < m.K(); ++w) {
        s.mean_eta += p[w] * m.eta[w];
        s.mean_zeta += p[w] * m.zeta[w];
    }
    for (int w = 0; w < m.K(); ++w) {
        double de = m.eta[w] - s.mean_eta, dz = m.zeta[w] - s.mean_zeta;
        s.var_eta += p[w] * de * de;
        s.var_zeta += p[w] * dz * dz;
        s.cov += p[w] * de * dz;
    }
    return s;
}

Eigen::Matrix2d hessian_G(const SpinModel& m, double tau, double theta)
{
    return site_moments(m, gibbs_measure(m, tau, theta)).covariance();
}

CanonicalParams invert_parameters(const SpinModel& m, double rho, double u)
{
    if (!std::isfinite(rho) || !std::isfinite(u) || !m.domain.interior(rho, u, 1e-15)) {
        std::ostringstream os;
        os << "(rho,u)=(" << rho << "," << u << ") is not in the interior of the domain";
        throw Error(ErrorKind::OutOfDomain, os.str());
    }
    // minimise G(t) - <t,x>, a strictly convex function
    Eigen::Vector2d t(0.0, 0.0), x(rho, u);
    auto objective = [&](const Eigen::Vector2d& v) { return log_partition(m, v[0], v[1]) - v.dot(x); };
    double f = objective(t);
    for (int it = 0; it < 100; ++it) {
        auto p = gibbs_measure(m, t[0], t[1]);
        SiteMoments s = site_moments(m, p);
        Eigen::Vector2d g(s.mean_eta - rho, s.mean_zeta - u);
        double scale = 1.0 + std::fabs(rho) + std::fabs(u);
        if (g.lpNorm<Eigen::Infinity>() < 2e-16 * scale) {
            CanonicalParams cp{t[0], t[1], s.mean_eta, s.mean_zeta, log_partition(m, t[0], t[1]), it};
            return cp;
        }
        Eigen::Matrix2d H = s.covariance();
        Eigen::Vector2d step = -H.ldlt().solve(g);
        if (!step.allFinite()) step = -g;
        if (step.lpNorm<Eigen::Infinity>() < 1e-7) {
            // quadratic regime: the full step is safe and line search would
            // only see rounding noise
            t += step;
            f = objective(t);
            if (step.lpNorm<Eigen::Infinity>() < 1e-15 * (1.0 + t.lpNorm<Eigen::Infinity>())) break;
            continue;
        }
        double a = 1.0;
        Eigen::Vector2d tn = t + step;
        double fn = objective(tn);
        // slack of a few ulps so that rounding in G cannot stall the search
        const double slack = 8e-16 * (1.0 + std::fabs(f));
        while (!(fn <= f + 1e-4 * a * g.dot(step) + slack) && a > 1e-12) {
            a *= 0.5;
            tn = t + a * step;
            fn = objective(tn);
        }
        if (a <= 1e-12) {
            // no decrease possible at double precision: accept if already tight
            if (g.lpNorm<Eigen::Infinity>() < 1e-12 * scale)
                return CanonicalParams{t[0], t[1], s.mean_eta, s.mean_zeta, log_partition(m, t[0], t[1]), it};
            break;
        }
        t = tn;
        f = fn;
    }
    auto p = gibbs_measure(m, t[0], t[1]);
    SiteMoments s = site_moments(m, p);
    if (std::fabs(s.mean_eta - rho) < 1e-12 && std::fabs(s.mean_zeta - u) < 1e-12)
        return CanonicalParams{t[0], t[1], s.mean_eta, s.mean_zeta, log_partition(m, t[0], t[1]), 100};
    std::ostringstream os;
    os << "Newton did not converge at (rho,u)=(" << rho << "," << u << ")";
    throw Error(ErrorKind::NonConvergence, os.str());
}

std::vector<double> product_marginal(const SpinModel& m, double rho, double u)
{
    auto cp = invert_parameters(m, rho, u);
    return gibbs_measure(m, cp.tau, cp.theta);
}

double thermo_entropy(const SpinModel& m, double rho, double u)
{
    auto cp = invert_parameters(m, rho, u);
    return rho * cp.tau + u * cp.theta - cp.G;
}

Eigen::Matrix2d hessian_S(const SpinModel& m, double rho, double u)
{
    double hr = std::min(1e-3, 0.25 * m.domain.reach(rho, u, 1, 0));
    double hu = std::min(1e-3, 0.25 * m.domain.reach(rho, u, 0, 1));
    double h = std::min(hr, hu);
    auto S = [&](double a, double b) { return thermo_entropy(m, a, b); };
    Eigen::Matrix2d H;
    H(0, 0) = numdiff::d2([&](double a) { return S(a, u); }, rho, h);
    H(1, 1) = numdiff::d2([&](double b) { return S(rho, b); }, u, h);
    H(0, 1) = H(1, 0) = numdiff::d11(S, rho, u, h, h);
    return H;
}

} // namespace lhdl
