#pragma once
// Goursat problems by Picard iteration of the integral equation, the
// Riemann function of f_wz + alpha f_w + beta f_z + nu f = 0 and the
// resulting quadrature for the Cauchy problem with data on w = z.
#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace lhdl {

using CoeffFn = std::function<double(double, double)>;
using Coeff3 = std::function<std::array<double, 3>(double, double)>;

// U_wz - (A U)_w - (B U)_z + C U = 0 on [x1,x2] x [y1,y2],
// U(w, y2) = f(w), U(x1, z) = g(z), f(x1) = g(y2).
struct GoursatProblem {
    double x1 = 0, x2 = 1, y1 = 0, y2 = 1;
    std::function<double(double)> f, g;
    Coeff3 ABC;   // (A, B, C) at (w, z)
};

struct GoursatResult {
    std::vector<double> w;   // x1 + a h_w
    std::vector<double> z;   // y2 - b h_z (decreasing)
    Eigen::MatrixXd U;       // U(a, b)
    int iterations = 0;      // Picard sweeps summed over blocks
    int blocks = 1;          // sub-rectangles after splitting
    double M = 0;            // sup|g| + sup|f|
    double sup = 0;          // sup|U|
};

// Picard iteration to a sup-change below tol on every sub-rectangle.  The
// rectangle is split until the three coefficient integrals are below 1/6;
// NoContraction if a single grid cell already violates them.
GoursatResult solve_goursat(const GoursatProblem& p, int n, double tol = 1e-10);

// Largest of the three coefficient integrals over the whole rectangle.
double coefficient_integral_bound(const GoursatProblem& p, int n);

// Coefficients of f_wz + alpha f_w + beta f_z + nu f = 0.
struct CharCoeffs {
    Coeff3 eval;   // (alpha, beta, nu)
    double kappa = 0;

    double alpha(double w, double z) const { return eval(w, z)[0]; }
    double beta_c(double w, double z) const { return eval(w, z)[1]; }
    double nu(double w, double z) const { return eval(w, z)[2]; }
};

CharCoeffs zero_coeffs();
CharCoeffs constant_coeffs(double alpha, double beta, double nu);

// Limit system with A = kappa, B = G = 0:
// alpha = (lambda_z - kappa u_z)/(lambda - mu), beta = -(mu_w - kappa u_w)/(lambda - mu), nu = 0.
CharCoeffs limit_char_coeffs(double gamma, double kappa);

struct LimitPoint {
    double rho = 0, u = 0;
    double rho_w = 0, rho_z = 0, u_w = 0, u_z = 0;
};
// (w, z) -> (rho, u) for the limit system, by Newton on the closed-form invariants
LimitPoint limit_point(double gamma, double w, double z);

struct RiemannFunction {
    double w0 = 0, z0 = 0, h = 0;
    int n = 0;
    Eigen::MatrixXd phi;     // phi(w0 - a h, z0 + b h); the triangle is a + b <= n
    int blocks = 1, iterations = 0;

    double at(int a, int b) const { return phi(a, b); }
    double s_of(int a) const { return w0 - a * h; }
    double t_of(int b) const { return z0 + b * h; }
    // value and (phi_w - phi_z) at the diagonal node v = z0 + k h
    double diag(int k) const { return phi(n - k, k); }
    double diag_dwdz(int k) const;
};

// Adjoint Goursat problem phi_wz - (alpha phi)_w - (beta phi)_z + nu phi = 0
// with phi(w0,t) = exp int_{z0}^t alpha(w0,v) dv, phi(s,z0) = exp int_{w0}^s beta(v,z0) dv.
// Solved on the square [z0,w0]^2, which contains the triangle.
RiemannFunction riemann_function(const CharCoeffs& c, double w0, double z0, int n = 200);

struct CauchyData {
    std::function<double(double)> s_tilde;             // f(v,v)
    std::function<double(double)> t_tilde;             // (f_w - f_z)(v,v)
    CoeffFn rhs;                                       // g in f_wz + ... = g (optional)
};

double solve_cauchy(const CharCoeffs& c, const CauchyData& d, double w0, double z0, int n = 200);
double solve_cauchy(const RiemannFunction& phi, const CharCoeffs& c, const CauchyData& d);

// Power-law envelope of the Riemann function for the limit system with A = kappa:
// |phi(s,t)| <= c (s/w0)^p and |(phi_w - phi_z)(s,s)| <= c_diag (s/w0)^(p-1) / w0,
// p = (kappa-1)/(2 gamma-1), fitted over the triangles of the given (w0, z0).
struct EnvelopeFit {
    double gamma = 0, kappa = 0, exponent = 0;
    double c = 0, c_diag = 0;
    int triangles = 0;
    bool finite() const { return std::isfinite(c) && std::isfinite(c_diag) && triangles > 0; }
};

EnvelopeFit fit_riemann_envelope(double gamma, double kappa, const std::vector<std::array<double, 2>>& points,
                                 int n = 100);

} // namespace lhdl
