#include "lhdl/entropy/char_lattice.hpp"
#include "lhdl/core/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>

namespace lhdl {

std::vector<double> kink_grid(double v_min, double kink_lo, double kink_hi, double v_max, int per_interval)
{
    if (!(0 < v_min && v_min < kink_lo && kink_lo < kink_hi && kink_hi < v_max) || per_interval < 2)
        throw Error(ErrorKind::Config, "kink_grid needs 0 < v_min < kink_lo < kink_hi < v_max");
    const double t_lo = std::log(kink_lo);
    const double d = (std::log(kink_hi) - t_lo) / per_interval;
    const int k0 = int(std::ceil((std::log(v_min) - t_lo) / d - 0.5));
    const int k1 = int(std::floor((std::log(v_max) - t_lo) / d - 0.5));
    std::vector<double> v;
    for (int k = k0; k <= k1; ++k) v.push_back(std::exp(t_lo + (k + 0.5) * d));
    return v;
}

double diagonal_coordinate(const FluxFunctions& f, double r)
{
    CharCurve c = characteristic_curve(f, r, 1e6 * std::sqrt(r));
    if (std::isnan(c.u_hit)) throw Error(ErrorKind::OutOfDomain, "characteristic through (r,0) does not reach rho = 0");
    return -c.u_hit;
}

// ---------------------------------------------------------------------------

namespace {

// Lagrange derivative weights of the nodes x[0..m) evaluated at `at`
std::array<double, 5> weights(const double* x, int m, double at)
{
    std::array<double, 5> w{};
    for (int a = 0; a < m; ++a) {
        double denom = 1, num = 0;
        for (int b = 0; b < m; ++b)
            if (b != a) denom *= x[a] - x[b];
        for (int b = 0; b < m; ++b) {
            if (b == a) continue;
            double p = 1;
            for (int c = 0; c < m; ++c)
                if (c != a && c != b) p *= at - x[c];
            num += p;
        }
        w[a] = num / denom;
    }
    return w;
}

} // namespace

Diff1::Diff1(const std::vector<double>& x, const std::vector<int>& breaks, int width) : width_(width)
{
    const int n = int(x.size());
    if (width != 3 && width != 5) throw Error(ErrorKind::Config, "stencil width must be 3 or 5");
    if (n < width) throw Error(ErrorKind::Config, "too few nodes for the difference stencil");
    auto blocked = [&](int a) {   // does [a, a+width-1] straddle a break?
        for (int k : breaks)
            if (k >= a && k < a + width - 1) return true;
        return false;
    };
    const int half = width / 2;
    off_.resize(n);
    c_.resize(n);
    for (int k = 0; k < n; ++k) {
        int s = std::clamp(k - half, 0, n - width);
        if (blocked(s)) {
            // shift towards the side without a break, keeping k in the stencil
            int best = -1;
            for (int t = std::max(0, k - width + 1); t <= std::min(k, n - width); ++t)
                if (!blocked(t) && (best < 0 || std::abs(t + half - k) < std::abs(best + half - k))) best = t;
            if (best >= 0) s = best;
        }
        off_[k] = s;
        c_[k] = weights(&x[s], width, x[k]);
    }
}

double Diff1::apply(const double* f, std::ptrdiff_t stride, int k) const
{
    const double* p = f + off_[k] * stride;
    double acc = 0;
    for (int a = 0; a < width_; ++a) acc += c_[k][a] * p[a * stride];
    return acc;
}

Eigen::MatrixXd CharLattice::d_w(const Eigen::MatrixXd& F, const Diff1* d) const
{
    const Diff1& D = d ? *d : diff;
    Eigen::MatrixXd out(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) out(i, j) = D.apply(&F(0, j), 1, i);
    return out;
}

Eigen::MatrixXd CharLattice::d_z(const Eigen::MatrixXd& F, const Diff1* d) const
{
    const Diff1& D = d ? *d : diff;
    Eigen::MatrixXd out(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) out(i, j) = D.apply(&F(i, 0), F.outerStride(), j);
    return out;
}

// ---------------------------------------------------------------------------

CharLattice build_char_lattice(const FluxFunctions& f, const std::vector<double>& v, const CurveOptions& opt)
{
    CharLattice L;
    L.N = int(v.size());
    L.v = v;
    const int N = L.N;
    const double v_end = v.back() * (1 + 1e-9);

    std::vector<CharCurve> lines(N);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < N; ++k) lines[k] = boundary_curve(f, v[k], v_end, opt);

    L.r_diag.resize(N);
    for (int k = 0; k < N; ++k) {
        if (!lines[k].covers(0.0)) throw Error(ErrorKind::OutOfDomain, "level line does not cross u = 0");
        L.r_diag[k] = lines[k](0.0);
    }

    L.rho.setConstant(N, N, std::nan(""));
    L.u.setConstant(N, N, std::nan(""));
    bool complete = true;
#pragma omp parallel for schedule(dynamic) reduction(&& : complete)
    for (int i = 0; i < N; ++i) {
        L.rho(i, i) = L.r_diag[i];
        L.u(i, i) = 0.0;
        for (int j = 0; j < i; ++j) {
            const CharCurve& zl = lines[j];
            const CharCurve& wl = lines[i];
            double top = std::min(v[i], zl.u_max());
            auto h = [&](double x) { return zl(x) - wl(std::max(-x, wl.u_min())); };
            if (h(top) < 0) {
                complete = false;
                continue;
            }
            boost::math::tools::eps_tolerance<double> tol(52);
            std::uintmax_t it = 100;
            auto [a, b] = boost::math::tools::toms748_solve(h, 0.0, top, h(0.0), h(top), tol, it);
            double x = 0.5 * (a + b);
            L.u(i, j) = x;
            L.rho(i, j) = zl(x);
        }
    }
    L.complete = complete;

    // mirror half: (i, j) with j > i is (rho, -u) of node (j, i)
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            L.rho(i, j) = L.rho(j, i);
            L.u(i, j) = -L.u(j, i);
        }

    L.lam.setConstant(N, N, std::nan(""));
    L.mu.setConstant(N, N, std::nan(""));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < N; ++i)
        for (int j = 0; j <= i; ++j) {
            if (std::isnan(L.rho(i, j))) continue;
            FluxJet J = f.jet(L.rho(i, j), L.u(i, j));
            double tr = J.psi_rho + J.phi_u;
            double d = (J.psi_rho - J.phi_u) * (J.psi_rho - J.phi_u) + 4 * J.psi_u * J.phi_rho;
            if (d < 0) throw Error(ErrorKind::ComplexEigenvalues, "lattice node outside the hyperbolic region");
            double sq = std::sqrt(d);
            L.lam(i, j) = 0.5 * (tr + sq);
            L.mu(i, j) = 0.5 * (tr - sq);
        }
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            L.lam(i, j) = -L.mu(j, i);
            L.mu(i, j) = -L.lam(j, i);
        }

    L.diff = Diff1(v);
    Eigen::MatrixXd lz = L.d_z(L.lam), mw = L.d_w(L.mu);
    L.alpha = lz.cwiseQuotient(L.lam - L.mu);
    L.beta = -mw.cwiseQuotient(L.lam - L.mu);
    return L;
}

} // namespace lhdl
