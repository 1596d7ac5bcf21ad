#include <doctest.h>

#include "lhdl/core/errors.hpp"
#include "lhdl/model/flux.hpp"
#include "lhdl/model/spin_model.hpp"
#include "lhdl/pde/eigen.hpp"
#include "lhdl/pde/riemann.hpp"
#include "lhdl/pde/solver.hpp"

#include <cmath>
#include <random>

using namespace lhdl;

TEST_CASE("closed-form eigenstructure satisfies the eigen relations")
{
    for (double g : {1.0, 2.0, 3.5})
        for (double r : {0.1, 1.0})
            for (double u : {-0.5, 0.0, 0.7}) {
                LimitFlux f(g);
                auto D = flux_jacobian(f.jet(r, u));
                auto e = eigen_closed_form(g, r, u);
                CHECK(eigen_residual(D, e) < 1e-10);
                CHECK(e.lambda > e.mu);
                CHECK(e.lambda == doctest::Approx(eigen_lambda(g, r, u)));
            }
}

TEST_CASE("finite-difference eigenstructure of the model fluxes")
{
    FluxPair f(build_model("two-lane", 2.0));
    auto e = eigenstructure(f, 0.4, 0.2);
    CHECK(eigen_residual(flux_jacobian(f.jet(0.4, 0.2)), e) < 1e-8);
}

TEST_CASE("Riemann invariant gradients are left eigenvectors")
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 30; ++k) {
        double g = 1 + 2 * U(gen), r = 0.05 + U(gen), u = U(gen) - 0.5;
        auto gr = riemann_gradients(g, r, u);
        LimitFlux f(g);
        auto D = flux_jacobian(f.jet(r, u));
        double lam = eigen_lambda(g, r, u), mu = eigen_mu(g, r, u);
        Eigen::RowVector2d gw(gr[0], gr[1]), gz(gr[2], gr[3]);
        CHECK((gw * D - lam * gw).norm() < 1e-6 * (1 + gw.norm()));
        CHECK((gz * D - mu * gz).norm() < 1e-6 * (1 + gz.norm()));
    }
}

TEST_CASE("invariant normalization and the degenerate gamma")
{
    auto a = riemann_invariants(2.0, 0.0, 0.3);
    CHECK(a.w == doctest::Approx(0.3));
    CHECK(a.z == doctest::Approx(0.0));
    auto b = riemann_invariants(2.0, 0.0, -0.3);
    CHECK(b.z == doctest::Approx(0.3));
    CHECK_THROWS_AS(riemann_invariants(0.75, 0.5, 0.1), Error);
}

TEST_CASE("convex entropy solves the entropy equation")
{
    for (double g : {1.0, 2.0})
        for (double r : {0.2, 1.5})
            for (double u : {-0.3, 0.4}) CHECK(std::fabs(convex_entropy_residual(g, r, u)) < 1e-8);
}

TEST_CASE("the limit system is genuinely nonlinear away from the locus")
{
    for (double r : {0.2, 1.0, 3.0})
        for (double u : {-0.4, 0.1, 0.6}) {
            auto v = genuine_nonlinearity(2.0, r, u);
            CHECK(std::fabs(v.gn_lambda) > 1e-6);
            CHECK(std::fabs(v.gn_mu) > 1e-6);
        }
    CHECK(gnl_locus(2.0, 0.0) == 0.0);
    CHECK(gnl_locus(2.0, 0.5) < 0.0);
}

namespace {

SolverRun run_smooth(Scheme s, int m, double t)
{
    LimitFlux f(2.0);
    SolverOptions o;
    o.scheme = s;
    o.parallel = false;
    auto r0 = [](double x) { return 1.0 + 0.2 * std::sin(2 * M_PI * x); };
    auto u0 = [](double x) { return 0.1 * std::cos(2 * M_PI * x); };
    return solve(f, initial_field(r0, m, s, FieldKind::Rho), initial_field(u0, m, s, FieldKind::U), t, o);
}

double coarse_diff(const Field& a, const Field& b, bool cell_avg)
{
    // compare on the coarse grid of a (b twice as fine)
    double s = 0;
    for (int k = 0; k < a.m(); ++k) {
        double fine = cell_avg ? 0.5 * (b.values[2 * k] + b.values[2 * k + 1]) : b.values[2 * k];
        s += std::fabs(a.values[k] - fine);
    }
    return s / a.m();
}

} // namespace

TEST_CASE("constant states are preserved and means are conserved")
{
    LimitFlux f(2.0);
    SolverOptions o;
    auto r = solve(f, initial_field([](double) { return 0.7; }, 64, o.scheme, FieldKind::Rho),
                   initial_field([](double) { return -0.2; }, 64, o.scheme, FieldKind::U), 0.1, o);
    for (double v : r.final_rho().values) CHECK(std::fabs(v - 0.7) < 1e-12);
    for (double v : r.final_u().values) CHECK(std::fabs(v + 0.2) < 1e-12);

    for (Scheme s : {Scheme::MusclHancock, Scheme::Central4}) {
        auto run = run_smooth(s, 128, 0.05);
        CHECK(std::fabs(run.final_rho().mean() - run.rho.front().mean()) < 1e-10);
        CHECK(std::fabs(run.final_u().mean() - run.u.front().mean()) < 1e-10);
    }
}

TEST_CASE("grid refinement order matches the design order")
{
    for (Scheme s : {Scheme::MusclHancock, Scheme::Central4}) {
        auto a = run_smooth(s, 64, 0.05), b = run_smooth(s, 128, 0.05), c = run_smooth(s, 256, 0.05);
        bool fv = s == Scheme::MusclHancock;
        double e1 = coarse_diff(a.final_rho(), b.final_rho(), fv), e2 = coarse_diff(b.final_rho(), c.final_rho(), fv);
        double order = std::log2(e1 / e2);
        INFO(scheme_name(s) << " order " << order);
        CHECK(std::fabs(order - a.order) < 0.3);
    }
}

TEST_CASE("blow-up is detected for steep data")
{
    LimitFlux f(2.0);
    SolverOptions o;
    o.throw_on_blowup = true;
    o.blowup_factor = 10;
    auto r0 = [](double x) { return 1.0 + 0.5 * std::sin(2 * M_PI * x); };
    auto u0 = [](double x) { return 0.5 * std::sin(2 * M_PI * x); };
    CHECK_THROWS_AS(solve(f, initial_field(r0, 512, o.scheme, FieldKind::Rho),
                          initial_field(u0, 512, o.scheme, FieldKind::U), 2.0, o),
                    Error);
}

TEST_CASE("scheme names parse")
{
    CHECK(parse_scheme("muscl") == Scheme::MusclHancock);
    CHECK(parse_scheme("central4") == Scheme::Central4);
    CHECK_THROWS_AS(parse_scheme("upwind9"), Error);
}
