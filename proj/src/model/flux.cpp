#include "lhdl/model/flux.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/core/numdiff.hpp"
#include "lhdl/model/thermo.hpp"

#include <cmath>
#include <cstdio>

namespace lhdl {

LimitFlux::LimitFlux(double gamma) : g_(gamma), dom_(Domain::rho_nonnegative()) {}

FluxJet LimitFlux::jet(double rho, double u) const
{
    FluxJet j;
    j.psi = rho * u;
    j.phi = rho + g_ * u * u;
    j.psi_rho = u;
    j.psi_u = rho;
    j.phi_rho = 1.0;
    j.phi_u = 2.0 * g_ * u;
    return j;
}

std::string LimitFlux::name() const
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "limit(gamma=%g)", g_);
    return buf;
}

TwoLaneFlux::TwoLaneFlux(double gamma)
    : g_(gamma), dom_(Domain::hull({{0.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {0.0, 1.0}}))
{
}

FluxJet TwoLaneFlux::jet(double rho, double u) const
{
    FluxJet j;
    j.psi = psi(rho, u);
    j.phi = phi(rho, u);
    j.psi_rho = (1 - 2 * rho) * u;
    j.psi_u = rho * (1 - rho);
    j.phi_rho = 1 - u * u;
    j.phi_u = -2 * (rho - g_) * u;
    return j;
}

std::string TwoLaneFlux::name() const
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "two-lane-exact(gamma=%g)", g_);
    return buf;
}

// ---------------------------------------------------------------------------

FluxPair::FluxPair(const SpinModel& m, double fd_step) : model_(m), h_(fd_step)
{
    const int k = m.K();
    psi_tab_.resize(k * k);
    phi_tab_.resize(k * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            psi_tab_[a * k + b] = m.psi(a, b);
            phi_tab_[a * k + b] = m.phi(a, b);
        }
    phi00_ = corner_limit([&](double r) { return phi(r, 0.0); });
    gamma_ = 0.5 * corner_limit([&](double r) { return phi_uu(r, 0.0); });
    psi_ru00_ = corner_limit([&](double r) { return psi_rhou(r, 0.0); });
    phi_r00_ = corner_limit([&](double r) { return jet(r, 0.0).phi_rho; });
    if (std::fabs(psi_ru00_ - 1.0) > 1e-6) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "NormalizationWarning: Psi_rhou(0,0)=%.10g differs from 1; rescale time", psi_ru00_);
        warnings_.push_back(buf);
    }
}

double FluxPair::corner_limit(const std::function<double(double)>& f) const
{
    // rho = eps^2 for eps = 0.1, 0.05, 0.025
    return numdiff::romberg3(f(1e-2), f(2.5e-3), f(6.25e-4));
}

void FluxPair::values(double rho, double u, double& ps, double& ph) const
{
    auto p = product_marginal(model_, rho, u);
    const int k = model_.K();
    ps = 0.0;
    ph = 0.0;
    for (int a = 0; a < k; ++a) {
        if (p[a] == 0.0) continue;
        double sa = 0.0, fa = 0.0;
        for (int b = 0; b < k; ++b) {
            sa += psi_tab_[a * k + b] * p[b];
            fa += phi_tab_[a * k + b] * p[b];
        }
        ps += p[a] * sa;
        ph += p[a] * fa;
    }
    ph += model_.phi_gauge;
}

double FluxPair::psi(double rho, double u) const
{
    double a, b;
    values(rho, u, a, b);
    return a;
}

double FluxPair::phi(double rho, double u) const
{
    double a, b;
    values(rho, u, a, b);
    return b;
}

double FluxPair::step_for(double rho, double u, double er, double eu) const
{
    double reach = model_.domain.reach(rho, u, er, eu);
    return std::min(h_, 0.45 * reach);
}

FluxJet FluxPair::jet(double rho, double u) const
{
    FluxJet j;
    values(rho, u, j.psi, j.phi);
    double hr = step_for(rho, u, 1, 0), hu = step_for(rho, u, 0, 1);
    double p[4], f[4];
    auto diff = [&](double h, double er, double eu, double& dpsi, double& dphi) {
        const double off[4] = {h, -h, 0.5 * h, -0.5 * h};
        for (int i = 0; i < 4; ++i) values(rho + off[i] * er, u + off[i] * eu, p[i], f[i]);
        double cp1 = (p[0] - p[1]) / (2 * h), cp2 = (p[2] - p[3]) / h;
        double cf1 = (f[0] - f[1]) / (2 * h), cf2 = (f[2] - f[3]) / h;
        dpsi = (4 * cp2 - cp1) / 3;
        dphi = (4 * cf2 - cf1) / 3;
    };
    diff(hr, 1, 0, j.psi_rho, j.phi_rho);
    diff(hu, 0, 1, j.psi_u, j.phi_u);
    return j;
}

double FluxPair::phi_uu(double rho, double u) const
{
    double h = step_for(rho, u, 0, 1);
    return numdiff::d2([&](double x) { return phi(rho, x); }, u, h);
}

double FluxPair::psi_rhou(double rho, double u) const
{
    double h = std::min(step_for(rho, u, 1, 0), step_for(rho, u, 0, 1));
    // the mixed stencil also visits the diagonal corners
    h = std::min(h, 0.45 * model_.domain.reach(rho, u, M_SQRT1_2, M_SQRT1_2) * M_SQRT1_2);
    h = std::min(h, 0.45 * model_.domain.reach(rho, u, M_SQRT1_2, -M_SQRT1_2) * M_SQRT1_2);
    return numdiff::d11([&](double a, double b) { return psi(a, b); }, rho, u, h, h);
}

FluxPair macroscopic_flux(const SpinModel& m) { return FluxPair(m); }

// ---------------------------------------------------------------------------

ScaledFlux::ScaledFlux(FluxPtr base, double n, double beta)
    : base_(std::move(base)), n_(n), beta_(beta), a_(std::pow(n, beta)), b_(std::pow(n, 2 * beta))
{
    if (auto fp = dynamic_cast<const FluxPair*>(base_.get())) phi00_ = fp->phi_corner();
    else phi00_ = base_->phi(0.0, 0.0);
    dom_ = base_->domain().scaled(b_, a_);
}

double ScaledFlux::psi(double rho, double u) const { return b_ * a_ * base_->psi(rho / b_, u / a_); }

double ScaledFlux::phi(double rho, double u) const { return b_ * (base_->phi(rho / b_, u / a_) - phi00_); }

FluxJet ScaledFlux::jet(double rho, double u) const
{
    FluxJet j = base_->jet(rho / b_, u / a_);
    FluxJet s;
    s.psi = b_ * a_ * j.psi;
    s.phi = b_ * (j.phi - phi00_);
    s.psi_rho = a_ * j.psi_rho;
    s.psi_u = b_ * j.psi_u;
    s.phi_rho = j.phi_rho;
    s.phi_u = a_ * j.phi_u;
    return s;
}

std::string ScaledFlux::name() const
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "scaled(%s, n=%g, beta=%g)", base_->name().c_str(), n_, beta_);
    return buf;
}

// ---------------------------------------------------------------------------

double onsager_residual(const FluxPair& f, double rho, double u)
{
    FluxJet j = f.jet(rho, u);
    SiteMoments s = site_moments(f.model(), product_marginal(f.model(), rho, u));
    return std::fabs(j.psi_u * s.var_zeta - j.phi_u * s.cov - j.phi_rho * s.var_eta + j.psi_rho * s.cov);
}

double onsager_residual(const SpinModel& m, double rho, double u) { return onsager_residual(FluxPair(m), rho, u); }

FluxPtr make_flux(const std::string& spec, double gamma)
{
    if (spec == "limit") return std::make_shared<LimitFlux>(gamma);
    if (spec == "two-lane-exact") return std::make_shared<TwoLaneFlux>(gamma);
    if (spec.rfind("model:", 0) == 0) {
        std::string name = spec.substr(6);
        return std::make_shared<FluxPair>(build_model(name, gamma));
    }
    throw Error(ErrorKind::Config, "flux must be 'limit', 'two-lane-exact' or 'model:<name>', got '" + spec + "'");
}

} // namespace lhdl
