#include "lhdl/pde/solver.hpp"

#include "lhdl/core/errors.hpp"
#include "lhdl/pde/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lhdl {

const char* scheme_name(Scheme s)
{
    return s == Scheme::MusclHancock ? "muscl" : "central4";
}

Scheme parse_scheme(const std::string& s)
{
    if (s == "muscl" || s == "muscl-hancock") return Scheme::MusclHancock;
    if (s == "central4" || s == "central" || s == "rk4") return Scheme::Central4;
    throw Error(ErrorKind::Config, "unknown scheme '" + s + "'");
}

Field initial_field(const std::function<double(double)>& f, int m, Scheme s, FieldKind kind)
{
    Field out;
    out.kind = kind;
    out.values.resize(m);
    if (s == Scheme::Central4) {
        for (int k = 0; k < m; ++k) out.values[k] = f(double(k) / m);
        return out;
    }
    out.offset = 0.5;
    // 3-point Gauss-Legendre per cell
    const double g = std::sqrt(0.6);
    const double dx = 1.0 / m;
    for (int k = 0; k < m; ++k) {
        double c = (k + 0.5) * dx;
        out.values[k] = (5 * f(c - 0.5 * g * dx) + 8 * f(c) + 5 * f(c + 0.5 * g * dx)) / 18.0;
    }
    return out;
}

namespace {

inline double minmod(double a, double b)
{
    if (a * b <= 0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

inline int wrap(int i, int m) { return i < 0 ? i + m : (i >= m ? i - m : i); }

struct Stepper {
    const FluxFunctions& f;
    const SolverOptions& o;
    int m;
    double dx;
    std::vector<double> speed;
    long clipped = 0;

    Stepper(const FluxFunctions& f_, const SolverOptions& o_, int m_)
        : f(f_), o(o_), m(m_), dx(1.0 / m_), speed(m_) {}

    double max_speed(const std::vector<double>& R, const std::vector<double>& U)
    {
        double s = 0;
#pragma omp parallel for reduction(max : s) if (o.parallel)
        for (int i = 0; i < m; ++i) {
            speed[i] = max_wave_speed(f, R[i], U[i]);
            s = std::max(s, speed[i]);
        }
        return s;
    }

    void enforce_domain(std::vector<double>& R, std::vector<double>& U)
    {
        const Domain& d = f.domain();
        long bad = 0, clip = 0;
#pragma omp parallel for reduction(+ : bad, clip) if (o.parallel)
        for (int i = 0; i < m; ++i) {
            double mg = d.margin(R[i], U[i]);
            if (!(mg >= 0)) {
                if (mg >= -1e-12) {
                    auto p = d.project(R[i], U[i]);
                    R[i] = p[0];
                    U[i] = p[1];
                    ++clip;
                } else {
                    ++bad;
                }
            }
        }
        clipped += clip;
        if (bad > 0) {
            std::ostringstream os;
            os << bad << " cells left the flux domain";
            throw Error(ErrorKind::DomainExit, os.str());
        }
    }

    bool inside(double r, double u) const
    {
        const Domain& d = f.domain();
        return f.closed_form() ? d.contains(r, u, 0.0) : d.interior(r, u, 1e-12);
    }

    void muscl(std::vector<double>& R, std::vector<double>& U, double dt, double /*smax*/)
    {
        std::vector<double> rl(m), rr(m), ul(m), ur(m);
        const double c = 0.5 * dt / dx;
#pragma omp parallel for if (o.parallel)
        for (int i = 0; i < m; ++i) {
            int im = wrap(i - 1, m), ip = wrap(i + 1, m);
            double sr = minmod(R[i] - R[im], R[ip] - R[i]);
            double su = minmod(U[i] - U[im], U[ip] - U[i]);
            double aL = R[i] - 0.5 * sr, aR = R[i] + 0.5 * sr;
            double bL = U[i] - 0.5 * su, bR = U[i] + 0.5 * su;
            if (!inside(aL, bL) || !inside(aR, bR)) {
                aL = aR = R[i];
                bL = bR = U[i];
            }
            double dpsi = f.psi(aR, bR) - f.psi(aL, bL);
            double dphi = f.phi(aR, bR) - f.phi(aL, bL);
            double nL = aL - c * dpsi, nR = aR - c * dpsi;
            double vL = bL - c * dphi, vR = bR - c * dphi;
            if (!inside(nL, vL) || !inside(nR, vR)) {
                nL = aL; nR = aR; vL = bL; vR = bR;
            }
            rl[i] = nL; rr[i] = nR; ul[i] = vL; ur[i] = vR;
        }
        // numerical flux at interface i+1/2
        std::vector<double> FR(m), FU(m);
#pragma omp parallel for if (o.parallel)
        for (int i = 0; i < m; ++i) {
            int ip = wrap(i + 1, m);
            double a = std::max(speed[i], speed[ip]);
            double r1 = rr[i], u1 = ur[i], r2 = rl[ip], u2 = ul[ip];
            FR[i] = 0.5 * (f.psi(r1, u1) + f.psi(r2, u2)) - 0.5 * a * (r2 - r1);
            FU[i] = 0.5 * (f.phi(r1, u1) + f.phi(r2, u2)) - 0.5 * a * (u2 - u1);
        }
        const double k = dt / dx;
#pragma omp parallel for if (o.parallel)
        for (int i = 0; i < m; ++i) {
            int im = wrap(i - 1, m);
            R[i] -= k * (FR[i] - FR[im]);
            U[i] -= k * (FU[i] - FU[im]);
        }
    }

    void central_rhs(const std::vector<double>& R, const std::vector<double>& U, double smax,
                     std::vector<double>& dR, std::vector<double>& dU)
    {
        std::vector<double> pr(m), ph(m), HR(m), HU(m);
#pragma omp parallel for if (o.parallel)
        for (int i = 0; i < m; ++i) {
            pr[i] = f.psi(R[i], U[i]);
            ph[i] = f.phi(R[i], U[i]);
        }
        const double eps = o.hyperviscosity * smax;
#pragma omp parallel for if (o.parallel)
        for (int i = 0; i < m; ++i) {
            int a = wrap(i - 2, m), b = wrap(i - 1, m), c = wrap(i + 1, m), d = wrap(i + 2, m),
                e = wrap(i + 3, m);
            double fr = (-pr[b] + 7 * pr[i] + 7 * pr[c] - pr[d]) / 12.0;
            double fu = (-ph[b] + 7 * ph[i] + 7 * ph[c] - ph[d]) / 12.0;
            double d5r = R[e] - 5 * R[d] + 10 * R[c] - 10 * R[i] + 5 * R[b] - R[a];
            double d5u = U[e] - 5 * U[d] + 10 * U[c] - 10 * U[i] + 5 * U[b] - U[a];
            HR[i] = fr - eps * d5r;
            HU[i] = fu - eps * d5u;
        }
#pragma omp parallel for if (o.parallel)
        for (int i = 0; i < m; ++i) {
            int b = wrap(i - 1, m);
            dR[i] = -(HR[i] - HR[b]) / dx;
            dU[i] = -(HU[i] - HU[b]) / dx;
        }
    }

    void rk4(std::vector<double>& R, std::vector<double>& U, double dt, double smax)
    {
        std::vector<double> k1r(m), k1u(m), k2r(m), k2u(m), k3r(m), k3u(m), k4r(m), k4u(m), tr(m), tu(m);
        auto axpy = [&](double a, const std::vector<double>& xr, const std::vector<double>& xu) {
            for (int i = 0; i < m; ++i) {
                tr[i] = R[i] + a * xr[i];
                tu[i] = U[i] + a * xu[i];
            }
        };
        central_rhs(R, U, smax, k1r, k1u);
        axpy(0.5 * dt, k1r, k1u);
        central_rhs(tr, tu, smax, k2r, k2u);
        axpy(0.5 * dt, k2r, k2u);
        central_rhs(tr, tu, smax, k3r, k3u);
        axpy(dt, k3r, k3u);
        central_rhs(tr, tu, smax, k4r, k4u);
        for (int i = 0; i < m; ++i) {
            R[i] += dt / 6 * (k1r[i] + 2 * k2r[i] + 2 * k3r[i] + k4r[i]);
            U[i] += dt / 6 * (k1u[i] + 2 * k2u[i] + 2 * k3u[i] + k4u[i]);
        }
    }
};

double gradient_monitor(const std::vector<double>& R, const std::vector<double>& U, double dx)
{
    int m = (int)R.size();
    double g = 0;
    for (int i = 0; i < m; ++i) {
        int ip = wrap(i + 1, m);
        g = std::max(g, std::max(std::abs(R[ip] - R[i]), std::abs(U[ip] - U[i])) / dx);
    }
    return g;
}

} // namespace

SolverRun solve(const FluxFunctions& f, const Field& rho0, const Field& u0, double t_end,
                const SolverOptions& opts)
{
    if (rho0.m() != u0.m() || rho0.m() < 8) throw Error(ErrorKind::Config, "initial fields need m >= 8 matching points");
    if (!(t_end >= 0)) throw Error(ErrorKind::Config, "t_end must be nonnegative");
    const int m = rho0.m();
    SolverRun run;
    run.m = m;
    run.scheme = opts.scheme;
    run.order = opts.scheme == Scheme::MusclHancock ? 2 : 4;
    run.hyperviscosity = opts.scheme == Scheme::Central4 ? opts.hyperviscosity : 0.0;
    run.t_end = t_end;
    const double offset = opts.scheme == Scheme::MusclHancock ? 0.5 : 0.0;

    std::vector<double> R = rho0.values, U = u0.values;
    Stepper st(f, opts, m);
    for (int i = 0; i < m; ++i)
        if (!(R[i] > 0)) throw Error(ErrorKind::OutOfDomain, "initial density must be positive");
    st.enforce_domain(R, U);

    auto snap = [&](double t) {
        Field fr{R, t, FieldKind::Rho, offset}, fu{U, t, FieldKind::U, offset};
        run.rho.push_back(std::move(fr));
        run.u.push_back(std::move(fu));
    };
    std::vector<double> stops = opts.snapshot_times;
    std::sort(stops.begin(), stops.end());
    stops.erase(std::remove_if(stops.begin(), stops.end(), [&](double t) { return t <= 0 || t > t_end; }),
                stops.end());
    snap(0.0);

    const double g0 = gradient_monitor(R, U, st.dx);
    double t = 0;
    size_t next = 0;
    while (t < t_end) {
        double smax = st.max_speed(R, U);
        double target = next < stops.size() ? stops[next] : t_end;
        double dt = smax > 0 ? opts.cfl * st.dx / smax : target - t;
        bool hit = false;
        if (t + dt >= target * (1 - 1e-14)) {
            dt = target - t;
            hit = true;
        }
        run.max_cfl = std::max(run.max_cfl, dt * smax / st.dx);
        if (opts.scheme == Scheme::MusclHancock)
            st.muscl(R, U, dt, smax);
        else
            st.rk4(R, U, dt, smax);
        st.enforce_domain(R, U);
        for (int i = 0; i < m; ++i)
            if (!std::isfinite(R[i]) || !std::isfinite(U[i]))
                throw Error(ErrorKind::DomainExit, "non-finite state");
        t = hit ? target : t + dt;
        run.dt_last = dt;
        ++run.steps;
        if (g0 > 0 && gradient_monitor(R, U, st.dx) > opts.blowup_factor * g0) {
            run.blowup_time = t;
            snap(t);
            run.t_reached = t;
            run.clipped = st.clipped;
            if (opts.throw_on_blowup) {
                std::ostringstream os;
                os << "gradient monitor fired at t=" << t << " before t_end=" << t_end;
                throw Error(ErrorKind::BlowupBeforeT, os.str());
            }
            return run;
        }
        if (hit) {
            if (next < stops.size() && target == stops[next]) ++next;
            if (target != t_end || run.rho.back().time != t) snap(t);
        }
    }
    if (run.rho.back().time != t) snap(t);
    run.t_reached = t;
    run.clipped = st.clipped;
    return run;
}

OracleResult smooth_solution_oracle(const FluxFunctions& f, const std::function<double(double)>& rho0,
                                    const std::function<double(double)>& u0, double t, int m, bool parallel)
{
    SolverOptions o;
    o.scheme = Scheme::Central4;
    o.parallel = parallel;
    o.throw_on_blowup = true;
    auto run_at = [&](int mm) {
        return solve(f, initial_field(rho0, mm, Scheme::Central4, FieldKind::Rho),
                     initial_field(u0, mm, Scheme::Central4, FieldKind::U), t, o);
    };
    SolverRun a = run_at(m), b = run_at(2 * m);
    OracleResult out;
    out.rho.kind = FieldKind::Rho;
    out.u.kind = FieldKind::U;
    out.rho.time = out.u.time = t;
    out.rho.values.resize(m);
    out.u.values.resize(m);
    for (int k = 0; k < m; ++k) {
        out.rho.values[k] = (16 * b.final_rho().values[2 * k] - a.final_rho().values[k]) / 15.0;
        out.u.values[k] = (16 * b.final_u().values[2 * k] - a.final_u().values[k]) / 15.0;
    }
    if (t == 0) {
        out.rho = a.final_rho();
        out.u = a.final_u();
    }
    out.blowup_free_until = t;
    return out;
}

} // namespace lhdl
