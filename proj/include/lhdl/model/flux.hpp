#pragma once
#include "lhdl/model/domain.hpp"
#include "lhdl/model/spin_model.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace lhdl {

struct FluxJet {
    double psi = 0, phi = 0;
    double psi_rho = 0, psi_u = 0, phi_rho = 0, phi_u = 0;
};

// A pair of macroscopic fluxes (Psi, Phi) on a convex domain.
class FluxFunctions {
public:
    virtual ~FluxFunctions() = default;
    virtual double psi(double rho, double u) const = 0;
    virtual double phi(double rho, double u) const = 0;
    virtual FluxJet jet(double rho, double u) const = 0;
    virtual double gamma() const = 0;
    virtual const Domain& domain() const = 0;
    virtual std::string name() const = 0;
    virtual bool closed_form() const { return false; }
};

using FluxPtr = std::shared_ptr<const FluxFunctions>;

// Psi = rho*u, Phi = rho + gamma*u^2 on rho >= 0
class LimitFlux final : public FluxFunctions {
public:
    explicit LimitFlux(double gamma);
    double psi(double rho, double u) const override { return rho * u; }
    double phi(double rho, double u) const override { return rho + g_ * u * u; }
    FluxJet jet(double rho, double u) const override;
    double gamma() const override { return g_; }
    const Domain& domain() const override { return dom_; }
    std::string name() const override;
    bool closed_form() const override { return true; }

private:
    double g_;
    Domain dom_;
};

// Closed-form fluxes of the two-lane model:
// Psi = rho(1-rho)u, Phi = (rho-gamma)(1-u^2) on [0,1]x[-1,1].
// Equal to FluxPair(two-lane) up to rounding; used where many jets are needed.
class TwoLaneFlux final : public FluxFunctions {
public:
    explicit TwoLaneFlux(double gamma);
    double psi(double rho, double u) const override { return rho * (1 - rho) * u; }
    double phi(double rho, double u) const override { return (rho - g_) * (1 - u * u); }
    FluxJet jet(double rho, double u) const override;
    double gamma() const override { return g_; }
    const Domain& domain() const override { return dom_; }
    std::string name() const override;

private:
    double g_;
    Domain dom_;
};

// Fluxes of a spin model: exact double sums against pi_{rho,u} x pi_{rho,u},
// derivatives by Richardson-extrapolated centered differences.
class FluxPair final : public FluxFunctions {
public:
    explicit FluxPair(const SpinModel& m, double fd_step = 1e-3);

    double psi(double rho, double u) const override;
    double phi(double rho, double u) const override;
    void values(double rho, double u, double& psi, double& phi) const;
    FluxJet jet(double rho, double u) const override;
    double phi_uu(double rho, double u) const;
    double psi_rhou(double rho, double u) const;
    double gamma() const override { return gamma_; }
    const Domain& domain() const override { return model_.domain; }
    std::string name() const override { return "model:" + model_.name; }

    const SpinModel& model() const { return model_; }
    double fd_step() const { return h_; }
    // corner data, extrapolated along rho = eps^2, u = 0
    double phi_corner() const { return phi00_; }
    double psi_rhou_corner() const { return psi_ru00_; }
    double phi_rho_corner() const { return phi_r00_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    double step_for(double rho, double u, double er, double eu) const;
    double corner_limit(const std::function<double(double)>& f) const;

    SpinModel model_;
    double h_;
    std::vector<double> psi_tab_, phi_tab_;
    double gamma_ = 0, phi00_ = 0, psi_ru00_ = 0, phi_r00_ = 0;
    std::vector<std::string> warnings_;
};

FluxPair macroscopic_flux(const SpinModel& m);

// Psi^n(rho,u) = n^{3b} Psi(n^{-2b} rho, n^{-b} u),
// Phi^n(rho,u) = n^{2b} (Phi(n^{-2b} rho, n^{-b} u) - Phi(0,0)).
class ScaledFlux final : public FluxFunctions {
public:
    ScaledFlux(FluxPtr base, double n, double beta);
    double psi(double rho, double u) const override;
    double phi(double rho, double u) const override;
    FluxJet jet(double rho, double u) const override;
    double gamma() const override { return base_->gamma(); }
    const Domain& domain() const override { return dom_; }
    std::string name() const override;
    bool closed_form() const override { return base_->closed_form(); }
    double n() const { return n_; }
    double beta() const { return beta_; }
    const FluxFunctions& base() const { return *base_; }

private:
    FluxPtr base_;
    double n_, beta_, a_, b_;   // a_ = n^beta, b_ = n^{2 beta}
    double phi00_;
    Domain dom_;
};

// |Psi_u Var(zeta) - Phi_u Cov - Phi_rho Var(eta) + Psi_rho Cov|
double onsager_residual(const FluxPair& f, double rho, double u);
double onsager_residual(const SpinModel& m, double rho, double u);

// (rho,u) -> "model:<name>" | "limit" flux from a config-style string
FluxPtr make_flux(const std::string& spec, double gamma);

} // namespace lhdl
