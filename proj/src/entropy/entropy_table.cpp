#include "lhdl/entropy/entropy_table.hpp"
#include "lhdl/core/csv.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/entropy/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lhdl {

using Mat = Eigen::MatrixXd;

namespace {

struct Fields {
    Mat P, Q, S, F, R, T, f;
    explicit Fields(int N)
        : P(Mat::Zero(N, N)), Q(Mat::Zero(N, N)), S(Mat::Zero(N, N)), F(Mat::Zero(N, N)), R(Mat::Zero(N, N)),
          T(Mat::Zero(N, N)), f(Mat::Zero(N, N))
    {
    }
};

} // namespace

EntropyTable build_entropy(FluxPtr base, double r_lo, double r_hi, double n, double beta, const EntropyOptions& opt)
{
    if (!(r_lo > 0 && r_hi > r_lo)) throw Error(ErrorKind::Config, "need 0 < r_lo < r_hi");
    if (opt.grid < 4) throw Error(ErrorKind::Config, "entropy grid must be >= 4");
    FluxPtr flux = (n > 1) ? FluxPtr(std::make_shared<ScaledFlux>(base, n, beta)) : base;
    const FluxFunctions& fl = *flux;

    EntropyTable t;
    t.flux = flux;
    t.flux_name = flux->name();
    t.gamma = flux->gamma();
    t.r_lo = r_lo;
    t.r_hi = r_hi;
    t.n = n;
    t.beta = beta;
    t.grid = opt.grid;
    t.shift = cutoff_shift(r_lo, r_hi);

    CharGeometry geo = build_geometry(flux, r_lo, r_hi, opt.r0, opt.r0_cap);
    t.r0_adaptive = geo.r0_adaptive;
    const double v_lo = diagonal_coordinate(fl, r_lo);
    const double v_hi = diagonal_coordinate(fl, r_hi);
    const double v_0 = diagonal_coordinate(fl, geo.r0);
    std::vector<double> v = kink_grid(opt.v_min, v_lo, v_hi, opt.w_max_factor * v_0, opt.grid);

    auto L = std::make_shared<CharLattice>(build_char_lattice(fl, v, opt.curve));
    if (!L->complete) throw Error(ErrorKind::OutOfDomain, "characteristic lattice leaves the domain");
    t.lattice = L;
    const int N = L->N;

    t.i_lo = int(std::upper_bound(v.begin(), v.end(), v_lo) - v.begin());
    t.j_hi = int(std::upper_bound(v.begin(), v.end(), v_hi) - v.begin());
    t.i0 = int(std::min_element(v.begin(), v.end(), [&](double a, double b) {
                   return std::fabs(a - v_0) < std::fabs(b - v_0);
               }) - v.begin());
    t.i0 = std::max(t.i0, t.j_hi);
    t.r0 = L->r_diag[t.i0];

    // geometry on the full square
    const Mat& rho = L->rho;
    const Mat& uu = L->u;
    Mat rw = L->d_w(rho), rz = L->d_z(rho), uw = L->d_w(uu), uz = L->d_z(uu);
    Mat rww = L->d_w(rw), rzz = L->d_z(rz);
    Mat aw = L->d_w(L->alpha), az = L->d_z(L->alpha);
    Mat bw = L->d_w(L->beta), bz = L->d_z(L->beta);
    const Mat& al = L->alpha;
    const Mat& be = L->beta;

    // diagonal data s~(v) = s(r(v)) and its derivatives
    std::vector<double> rp(N), rpp(N);
    for (int k = 0; k < N; ++k) rp[k] = L->diff.apply(L->r_diag.data(), 1, k);
    for (int k = 0; k < N; ++k) rpp[k] = L->diff.apply(rp.data(), 1, k);

    Fields m(N);
    auto closed = [&](int i, int j) {
        m.P(i, j) = rw(i, j);
        m.Q(i, j) = rz(i, j);
        m.R(i, j) = rww(i, j);
        m.T(i, j) = rzz(i, j);
        m.S(i, j) = rho(i, j) - t.shift;
        m.F(i, j) = fl.psi(rho(i, j), uu(i, j));
        m.f(i, j) = al(i, j) * m.P(i, j) + be(i, j) * m.Q(i, j);
    };

    int goursat = 0;
    for (int d = 0; d < N; ++d)
        for (int i = d; i < N; ++i) {
            const int j = i - d;
            if (i > t.i0 && j >= t.j_hi) {
                closed(i, j);
                continue;
            }
            if (d == 0) {
                CutoffValue c = cutoff_profile(r_lo, r_hi, L->r_diag[i]);
                double s1 = c.ds * rp[i];
                double s2 = c.d2s * rp[i] * rp[i] + c.ds * rpp[i];
                m.P(i, i) = m.Q(i, i) = 0.5 * s1;
                m.f(i, i) = al(i, i) * m.P(i, i) + be(i, i) * m.Q(i, i);
                m.R(i, i) = m.T(i, i) = 0.5 * s2 + m.f(i, i);
                m.S(i, i) = c.s;
                m.F(i, i) = 0.0;
                continue;
            }
            if (i > t.i0) ++goursat;
            // A = (i, j+1) above in z, B = (i-1, j) left in w
            const double hz = v[j + 1] - v[j], hw = v[i] - v[i - 1];
            const double a = al(i, j), b = be(i, j);
            const double PA = m.P(i, j + 1), QA = m.Q(i, j + 1), fA = m.f(i, j + 1);
            const double PB = m.P(i - 1, j), QB = m.Q(i - 1, j), fB = m.f(i - 1, j);
            // [1 - hz a/2, -hz b/2; hw a/2, 1 + hw b/2] (P,Q) = (PA + hz fA/2, QB - hw fB/2)
            const double m11 = 1 - 0.5 * hz * a, m12 = -0.5 * hz * b;
            const double m21 = 0.5 * hw * a, m22 = 1 + 0.5 * hw * b;
            const double y1 = PA + 0.5 * hz * fA, y2 = QB - 0.5 * hw * fB;
            const double det = m11 * m22 - m12 * m21;
            const double P = (y1 * m22 - m12 * y2) / det;
            const double Q = (m11 * y2 - m21 * y1) / det;
            const double f = a * P + b * Q;
            m.P(i, j) = P;
            m.Q(i, j) = Q;
            m.f(i, j) = f;

            const double lam = L->lam(i, j), mu = L->mu(i, j);
            double Sz = m.S(i, j + 1) - 0.5 * hz * (Q + QA);
            double Sw = m.S(i - 1, j) + 0.5 * hw * (P + PB);
            m.S(i, j) = 0.5 * (Sz + Sw);
            double Fz = m.F(i, j + 1) - 0.5 * hz * (mu * Q + L->mu(i, j + 1) * QA);
            double Fw = m.F(i - 1, j) + 0.5 * hw * (lam * P + L->lam(i - 1, j) * PB);
            m.F(i, j) = 0.5 * (Fz + Fw);

            // R_z = -alpha R + H,  T_w = -beta T + K
            const double H = -aw(i, j) * P - bw(i, j) * Q + b * f;
            const double HA = -aw(i, j + 1) * PA - bw(i, j + 1) * QA + be(i, j + 1) * fA;
            const double RA = m.R(i, j + 1);
            m.R(i, j) = (RA - 0.5 * hz * (H + (-al(i, j + 1) * RA + HA))) / (1 - 0.5 * hz * a);
            const double K = -az(i, j) * P + a * f - bz(i, j) * Q;
            const double KB = -az(i - 1, j) * PB + al(i - 1, j) * fB - bz(i - 1, j) * QB;
            const double TB = m.T(i - 1, j);
            m.T(i, j) = (TB + 0.5 * hw * (K + (-be(i - 1, j) * TB + KB))) / (1 + 0.5 * hw * b);
        }
    t.goursat_nodes = goursat;

    // the Cauchy solution must agree with the closed form where both apply
    double ov = 0;
    for (int i = t.j_hi; i <= t.i0; ++i)
        for (int j = t.j_hi; j <= i; ++j) ov = std::max(ov, std::fabs(m.S(i, j) - (rho(i, j) - t.shift)));
    t.overlap = ov;
    if (ov > opt.overlap_tol * r_hi) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "Cauchy and closed-form values differ by %.3g on D2", ov);
        throw Error(ErrorKind::InconsistentOverlap, buf);
    }

    // inverse Jacobian of (w,z) -> (rho,u) and its derivatives
    Mat det = rw.cwiseProduct(uz) - rz.cwiseProduct(uw);
    Mat wr = uz.cwiseQuotient(det), wu = -rz.cwiseQuotient(det);
    Mat zr = -uw.cwiseQuotient(det), zu = rw.cwiseQuotient(det);
    Mat wr_w = L->d_w(wr), wr_z = L->d_z(wr), wu_w = L->d_w(wu), wu_z = L->d_z(wu);
    Mat zr_w = L->d_w(zr), zr_z = L->d_z(zr), zu_w = L->d_w(zu), zu_z = L->d_z(zu);

    // F on the full square (odd under the mirror) for the difference check
    Mat Fsq = m.F;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) Fsq(i, j) = -m.F(j, i);
    Diff1 kinked(v, {t.i_lo - 1, t.j_hi - 1});
    Mat Fw = L->d_w(Fsq, &kinked), Fz = L->d_z(Fsq, &kinked);

    t.rows.reserve(std::size_t(N) * N);
    t.grad_F_fd.reserve(std::size_t(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j <= i; ++j) {
            EntropyRow e{};
            e.rho = rho(i, j);
            e.u = uu(i, j);
            e.i = i;
            e.j = j;
            e.edge = (j == 0 || i == N - 1);
            if (i < t.i_lo) {
                e.label = Region::D1;
            } else if (j >= t.j_hi) {
                e.label = Region::D2;
                e.S = e.rho - t.shift;
                e.F = fl.psi(e.rho, e.u);
                e.S_rho = 1.0;
            } else {
                e.label = Region::D3;
                const double P = m.P(i, j), Q = m.Q(i, j), M = -m.f(i, j), R = m.R(i, j), T = m.T(i, j);
                const double a1 = wr(i, j), a2 = wu(i, j), b1 = zr(i, j), b2 = zu(i, j);
                const double w_rr = wr_w(i, j) * a1 + wr_z(i, j) * b1;
                const double w_ru = wr_w(i, j) * a2 + wr_z(i, j) * b2;
                const double w_uu = wu_w(i, j) * a2 + wu_z(i, j) * b2;
                const double z_rr = zr_w(i, j) * a1 + zr_z(i, j) * b1;
                const double z_ru = zr_w(i, j) * a2 + zr_z(i, j) * b2;
                const double z_uu = zu_w(i, j) * a2 + zu_z(i, j) * b2;
                e.S = m.S(i, j);
                e.F = m.F(i, j);
                e.S_rho = P * a1 + Q * b1;
                e.S_u = P * a2 + Q * b2;
                e.S_rr = R * a1 * a1 + 2 * M * a1 * b1 + T * b1 * b1 + P * w_rr + Q * z_rr;
                e.S_ru = R * a1 * a2 + M * (a1 * b2 + a2 * b1) + T * b1 * b2 + P * w_ru + Q * z_ru;
                e.S_uu = R * a2 * a2 + 2 * M * a2 * b2 + T * b2 * b2 + P * w_uu + Q * z_uu;
            }
            std::array<double, 2> gF{Fw(i, j) * wr(i, j) + Fz(i, j) * zr(i, j),
                                     Fw(i, j) * wu(i, j) + Fz(i, j) * zu(i, j)};
            t.rows.push_back(e);
            t.grad_F_fd.push_back(gF);
            if (i == j) continue;
            EntropyRow mirror = e;
            mirror.u = -e.u;
            mirror.F = -e.F;
            mirror.S_u = -e.S_u;
            mirror.S_ru = -e.S_ru;
            t.rows.push_back(mirror);
            t.grad_F_fd.push_back({-gF[0], gF[1]});
        }
    return t;
}

void EntropyTable::write_csv(const std::string& path) const
{
    CsvWriter w(path, {"rho", "u", "S", "F", "S_rho", "S_u", "S_rr", "S_ru", "S_uu", "domain_label"});
    for (const auto& e : rows)
        w.row({e.rho, e.u, e.S, e.F, e.S_rho, e.S_u, e.S_rr, e.S_ru, e.S_uu}, region_name(e.label));
}

EntropyChecks check_entropy(const EntropyTable& t)
{
    EntropyChecks c;
    double err_max = 0, scale_max = 0;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const EntropyRow& e = t.rows[k];
        c.partition_error = std::max(c.partition_error, std::fabs(e.I() + e.J() - 1.0));
        if (e.label == Region::D1)
            c.d1_max = std::max({c.d1_max, std::fabs(e.S), std::fabs(e.S_rho), std::fabs(e.S_u), std::fabs(e.F)});
        if (e.label == Region::D2)
            c.d2_max = std::max({c.d2_max, std::fabs(e.S - (e.rho - t.shift)), std::fabs(e.S_rho - 1.0),
                                 std::fabs(e.S_u)});
        if (e.label != Region::D3 || e.edge) continue;
        ++c.interior_nodes;
        FluxJet j = t.flux->jet(e.rho, e.u);
        double res = j.psi_u * e.S_rr + (j.phi_u - j.psi_rho) * e.S_ru - j.phi_rho * e.S_uu;
        c.pde_residual = std::max(c.pde_residual, std::fabs(res));
        double Fr = j.psi_rho * e.S_rho + j.phi_rho * e.S_u;
        double Fu = j.psi_u * e.S_rho + j.phi_u * e.S_u;
        double scale = std::fabs(j.psi_rho * e.S_rho) + std::fabs(j.phi_rho * e.S_u) + std::fabs(j.psi_u * e.S_rho) +
                       std::fabs(j.phi_u * e.S_u);
        const auto& g = t.grad_F_fd[k];
        err_max = std::max(err_max, std::fabs(g[0] - Fr) + std::fabs(g[1] - Fu));
        scale_max = std::max(scale_max, scale);
    }
    // sup-norm relative error: the flux gradient vanishes at the D1 edge
    c.flux_rel_error = scale_max > 0 ? err_max / scale_max : 0.0;
    return c;
}

} // namespace lhdl
