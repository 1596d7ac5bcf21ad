#pragma once
// Riemann invariants, genuine nonlinearity and the convex entropy of the
// limit system rho_t + (rho u)_x = 0, u_t + (rho + gamma u^2)_x = 0.
#include <array>
#include <functional>
#include <vector>

namespace lhdl {

struct RiemannInvariants {
    double w = 0, z = 0;
};

// Product-power formula; DegenerateGamma at gamma = 3/4.  Normalized so
// that w(0,u) = u 1{u>0}, z(0,u) = -u 1{u<0} when gamma > 3/4.
RiemannInvariants riemann_invariants(double gamma, double rho, double u);
// (w_rho, w_u, z_rho, z_u) by centered differences of the closed form
std::array<double, 4> riemann_gradients(double gamma, double rho, double u);

double eigen_lambda(double gamma, double rho, double u);
double eigen_mu(double gamma, double rho, double u);

struct GnlValues {
    double gn_lambda = 0, gn_mu = 0;
};
// (grad lambda).r and (grad mu).s with the closed-form eigenvectors
GnlValues genuine_nonlinearity(double gamma, double rho, double u);
// rho on the zero locus -4 gamma (2gamma-1)^2 (gamma+1)^-2 u^2
double gnl_locus(double gamma, double u);

double convex_entropy(double rho, double u);
// rho S_rr + (2gamma-1) u S_ru - S_uu for S = rho log rho + u^2/2
double convex_entropy_residual(double gamma, double rho, double u);

// Characteristic slope d rho / d u of the Lax-entropy equation for a flux
// with jet (Psi_rho, Psi_u, Phi_rho, Phi_u).
double char_slope(double psi_rho, double psi_u, double phi_rho, double phi_u);

// Level line u -> rho(u) of w (or z) at value c, sampled on us; NaN where
// the level does not intersect rho >= 0.
std::vector<double> invariant_level_line(double gamma, bool use_w, double c, const std::vector<double>& us);

} // namespace lhdl
