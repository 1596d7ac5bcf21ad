#include "lhdl/pde/eigen.hpp"

#include "lhdl/core/errors.hpp"

#include <cmath>
#include <sstream>

namespace lhdl {

Eigen::Matrix2d flux_jacobian(const FluxJet& j)
{
    Eigen::Matrix2d D;
    D << j.psi_rho, j.psi_u, j.phi_rho, j.phi_u;
    return D;
}

EigenData eigen_closed_form(double gamma, double rho, double u)
{
    double disc = (2 * gamma - 1) * (2 * gamma - 1) * u * u + 4 * rho;
    if (disc < 0) throw Error(ErrorKind::ComplexEigenvalues, "negative discriminant");
    double sq = std::sqrt(disc);
    EigenData e;
    e.lambda = 0.5 * (sq + (2 * gamma + 1) * u);
    e.mu = 0.5 * ((2 * gamma + 1) * u - sq);
    e.r = {e.lambda - 2 * gamma * u, 1.0};
    e.s = {e.mu - 2 * gamma * u, 1.0};
    e.l = {1.0, e.lambda - u};
    e.m = {1.0, e.mu - u};
    return e;
}

namespace {
Eigen::Vector2d pick(const Eigen::Vector2d& a, const Eigen::Vector2d& b)
{
    const Eigen::Vector2d& v = a.norm() >= b.norm() ? a : b;
    double n = v.norm();
    return n > 0 ? Eigen::Vector2d(v / n) : Eigen::Vector2d(0.0, 1.0);
}
} // namespace

EigenData eigen_from_jacobian(const Eigen::Matrix2d& D)
{
    double a = D(0, 0), b = D(0, 1), c = D(1, 0), d = D(1, 1);
    double disc = (d - a) * (d - a) + 4 * b * c;
    double scale = (d - a) * (d - a) + 4 * std::abs(b * c);
    if (disc < -1e-14 * std::max(1.0, scale)) {
        std::ostringstream os;
        os << "discriminant " << disc;
        throw Error(ErrorKind::ComplexEigenvalues, os.str());
    }
    double sq = std::sqrt(std::max(disc, 0.0));
    EigenData e;
    e.lambda = 0.5 * (a + d + sq);
    e.mu = 0.5 * (a + d - sq);
    for (int k = 0; k < 2; ++k) {
        double ev = k == 0 ? e.lambda : e.mu;
        Eigen::Vector2d right = pick({b, ev - a}, {ev - d, c});
        Eigen::Vector2d left = pick({ev - d, b}, {c, ev - a});
        if (k == 0) { e.r = right; e.l = left; }
        else { e.s = right; e.m = left; }
    }
    return e;
}

EigenData eigenstructure(const FluxFunctions& f, double rho, double u)
{
    if (f.closed_form()) return eigen_closed_form(f.gamma(), rho, u);
    return eigen_from_jacobian(flux_jacobian(f.jet(rho, u)));
}

double eigen_residual(const Eigen::Matrix2d& D, const EigenData& e)
{
    double r1 = (D * e.r - e.lambda * e.r).cwiseAbs().maxCoeff();
    double r2 = (D * e.s - e.mu * e.s).cwiseAbs().maxCoeff();
    double r3 = (e.l.transpose() * D - e.lambda * e.l.transpose()).cwiseAbs().maxCoeff();
    double r4 = (e.m.transpose() * D - e.mu * e.m.transpose()).cwiseAbs().maxCoeff();
    return std::max(std::max(r1, r2), std::max(r3, r4));
}

double max_wave_speed(const FluxFunctions& f, double rho, double u)
{
    if (f.closed_form()) {
        double g = f.gamma();
        double sq = std::sqrt(std::max(0.0, (2 * g - 1) * (2 * g - 1) * u * u + 4 * rho));
        return 0.5 * (sq + std::abs((2 * g + 1) * u));
    }
    EigenData e = eigen_from_jacobian(flux_jacobian(f.jet(rho, u)));
    return std::max(std::abs(e.lambda), std::abs(e.mu));
}

} // namespace lhdl
