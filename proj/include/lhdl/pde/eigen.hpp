#pragma once
#include "lhdl/model/flux.hpp"

#include <Eigen/Dense>

namespace lhdl {

struct EigenData {
    double lambda = 0, mu = 0;
    Eigen::Vector2d r, s;   // right eigenvectors for lambda, mu
    Eigen::Vector2d l, m;   // left eigenvectors for lambda, mu
};

// D = [[Psi_rho, Psi_u], [Phi_rho, Phi_u]]
Eigen::Matrix2d flux_jacobian(const FluxJet& j);

// Closed form for Psi = rho u, Phi = rho + gamma u^2.
EigenData eigen_closed_form(double gamma, double rho, double u);
// Eigensystem of an arbitrary 2x2 Jacobian; ComplexEigenvalues if the
// discriminant is negative.
EigenData eigen_from_jacobian(const Eigen::Matrix2d& D);
// Closed form for closed-form fluxes, FD Jacobian otherwise.
EigenData eigenstructure(const FluxFunctions& f, double rho, double u);

// max of the four eigen-relation residuals
double eigen_residual(const Eigen::Matrix2d& D, const EigenData& e);

// max(|lambda|, |mu|)
double max_wave_speed(const FluxFunctions& f, double rho, double u);

} // namespace lhdl
