#pragma once
#include "lhdl/model/spin_model.hpp"

#include <Eigen/Dense>
#include <vector>

namespace lhdl {

struct CanonicalParams {
    double tau = 0.0;
    double theta = 0.0;
    double rho = 0.0;
    double u = 0.0;
    double G = 0.0;
    int iterations = 0;
};

struct SiteMoments {
    double mean_eta = 0.0, mean_zeta = 0.0;
    double var_eta = 0.0, var_zeta = 0.0, cov = 0.0;
    Eigen::Matrix2d covariance() const
    {
        Eigen::Matrix2d c;
        c << var_eta, cov, cov, var_zeta;
        return c;
    }
};

// log E_pi exp(tau*eta + theta*zeta)
double log_partition(const SpinModel& m, double tau, double theta);
std::vector<double> gibbs_measure(const SpinModel& m, double tau, double theta);
SiteMoments site_moments(const SpinModel& m, const std::vector<double>& p);
// Hessian of G at (tau,theta) = covariance of (eta,zeta)
Eigen::Matrix2d hessian_G(const SpinModel& m, double tau, double theta);

// Newton on grad G = (rho,u).  OutOfDomain unless (rho,u) is strictly inside
// the domain; NonConvergence after 100 steps.
CanonicalParams invert_parameters(const SpinModel& m, double rho, double u);

// pi_{rho,u}
std::vector<double> product_marginal(const SpinModel& m, double rho, double u);

// S(rho,u) = rho*tau + u*theta - G(tau,theta)
double thermo_entropy(const SpinModel& m, double rho, double u);
// finite-difference Hessian of S
Eigen::Matrix2d hessian_S(const SpinModel& m, double rho, double u);

} // namespace lhdl
