#include <doctest.h>

#include "lhdl/core/errors.hpp"
#include "lhdl/entropy/goursat.hpp"
#include "lhdl/pde/riemann.hpp"

#include <cmath>
#include <random>

using namespace lhdl;

TEST_CASE("zero coefficients give the unit Riemann function")
{
    auto R = riemann_function(zero_coeffs(), 2.0, 1.0, 40);
    CHECK((R.phi.array() - 1).abs().maxCoeff() == 0.0);
}

TEST_CASE("Cauchy quadrature reproduces trivial data")
{
    CauchyData d;
    d.s_tilde = [](double) { return 3.0; };
    d.t_tilde = [](double) { return 0.0; };
    CHECK(solve_cauchy(zero_coeffs(), d, 1.4, 0.2, 60) == doctest::Approx(3.0).epsilon(1e-12));
    d.s_tilde = [](double) { return 0.0; };
    d.t_tilde = [](double) { return 1.0; };
    CHECK(solve_cauchy(zero_coeffs(), d, 1.4, 0.2, 60) == doctest::Approx(0.6).epsilon(1e-12));
}

namespace {

struct Manufactured {
    CharCoeffs c;
    std::function<double(double, double)> f, fw, fz;
    CoeffFn g;
};

double cauchy_error(const Manufactured& m, int n)
{
    CauchyData d;
    d.s_tilde = [&](double v) { return m.f(v, v); };
    d.t_tilde = [&](double v) { return m.fw(v, v) - m.fz(v, v); };
    d.rhs = m.g;
    return std::fabs(solve_cauchy(m.c, d, 1.5, 0.5, n) - m.f(1.5, 0.5));
}

} // namespace

TEST_CASE("manufactured Cauchy problems converge at second order")
{
    const double a = 0.7, b = 0.4, c = 0.5, k = 1.3;
    std::vector<Manufactured> cases;
    cases.push_back({constant_coeffs(a, 0, 0), [=](double w, double z) { return std::exp(-a * z) * std::sin(w) + z * z; },
                     [=](double w, double z) { return std::exp(-a * z) * std::cos(w); },
                     [=](double w, double z) { return -a * std::exp(-a * z) * std::sin(w) + 2 * z; }, nullptr});
    cases.push_back({constant_coeffs(0, b, 0), [=](double w, double z) { return std::exp(-b * w) * std::cos(z) + w * w * w; },
                     [=](double w, double z) { return -b * std::exp(-b * w) * std::cos(z) + 3 * w * w; },
                     [=](double w, double z) { return -std::exp(-b * w) * std::sin(z); }, nullptr});
    cases.push_back({constant_coeffs(0, 0, c), [=](double w, double z) { return std::exp(k * w - c / k * z); },
                     [=](double w, double z) { return k * std::exp(k * w - c / k * z); },
                     [=](double w, double z) { return -c / k * std::exp(k * w - c / k * z); }, nullptr});
    cases.push_back({zero_coeffs(), [](double w, double z) { return w * w * z * z; },
                     [](double w, double z) { return 2 * w * z * z; }, [](double w, double z) { return 2 * w * w * z; },
                     [](double w, double z) { return 4 * w * z; }});
    for (size_t q = 0; q < cases.size(); ++q) {
        double e1 = cauchy_error(cases[q], 50), e2 = cauchy_error(cases[q], 100);
        INFO("case " << q << " errors " << e1 << " " << e2);
        CHECK(e2 < 1e-3);
        if (e1 > 1e-11) CHECK(e1 / e2 > 3.0);
    }
}

TEST_CASE("Goursat solutions stay below five times the data on random admissible fields")
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 25; ++trial) {
        double p[9];
        for (double& x : p) x = U(gen);
        GoursatProblem P;
        P.x1 = 0;
        P.x2 = 1;
        P.y1 = 0;
        P.y2 = 1;
        double f0 = U(gen), f1 = U(gen), g1 = U(gen);
        P.f = [=](double w) { return f0 + f1 * std::sin(3 * w); };
        P.g = [=](double z) { return f0 + f1 * std::sin(3 * P.x1) + g1 * (1 - z); };
        double scale = 1.0;
        P.ABC = [&scale, p](double w, double z) {
            return std::array<double, 3>{scale * (p[0] + p[1] * std::cos(2 * w + p[2] * z)),
                                         scale * (p[3] + p[4] * std::sin(w - 3 * p[5] * z)),
                                         scale * (p[6] + p[7] * w * z + p[8] * z)};
        };
        double bound = coefficient_integral_bound(P, 60);
        if (bound >= 1.0 / 6) scale = 0.99 / (6 * bound);
        CHECK(coefficient_integral_bound(P, 60) < 1.0 / 6);
        auto r = solve_goursat(P, 60);
        CHECK(r.blocks == 1);
        CHECK(r.sup <= 5 * r.M);
        // boundary data is kept
        CHECK(r.U(0, 0) == doctest::Approx(P.f(P.x1)));
        CHECK(r.U(60, 0) == doctest::Approx(P.f(P.x2)));
    }
}

TEST_CASE("large coefficients split the rectangle or fail cleanly")
{
    GoursatProblem P;
    P.f = [](double) { return 1.0; };
    P.g = [](double) { return 1.0; };
    P.ABC = [](double, double) { return std::array<double, 3>{2.0, 0.0, 0.0}; };
    auto r = solve_goursat(P, 64);
    CHECK(r.blocks > 1);
    P.ABC = [](double, double) { return std::array<double, 3>{1e4, 0.0, 0.0}; };
    CHECK_THROWS_AS(solve_goursat(P, 16), Error);
}

TEST_CASE("limit points invert the invariants")
{
    for (double g : {1.0, 2.0})
        for (auto [r, u] : std::vector<std::pair<double, double>>{{0.7, 0.3}, {0.05, -0.1}, {2.0, 0.0}}) {
            auto ri = riemann_invariants(g, r, u);
            auto lp = limit_point(g, ri.w, ri.z);
            CHECK(lp.rho == doctest::Approx(r).epsilon(1e-9));
            CHECK(lp.u == doctest::Approx(u).scale(1).epsilon(1e-9));
            auto gr = riemann_gradients(g, r, u);
            double det = gr[0] * gr[3] - gr[1] * gr[2];
            CHECK(lp.rho_w == doctest::Approx(gr[3] / det).epsilon(1e-5));
            CHECK(lp.u_z == doctest::Approx(gr[0] / det).epsilon(1e-5));
        }
}

TEST_CASE("limit coefficients blow up like (kappa-1)/3w at the axis")
{
    for (double kap : {1.0, 3.0}) {
        auto c = limit_char_coeffs(2, kap);
        double w = 1e-3;
        CHECK(c.beta_c(w, 1e-9) * w == doctest::Approx((kap - 1) / 3).scale(1).epsilon(1e-2));
    }
}

TEST_CASE("Riemann function envelope has finite constants")
{
    std::vector<std::array<double, 2>> pts{{0.5, 0.1}, {1.0, 0.3}, {1.5, 0.9}};
    for (double kap : {1.0, 3.0, 2.0, 4.0}) {
        auto e = fit_riemann_envelope(2.0, kap, pts, 40);
        CHECK(e.finite());
        CHECK(e.c >= 1.0 - 1e-12);   // phi(w0, z0) = 1
        CHECK(e.c < 10);
    }
    CHECK_THROWS_AS(fit_riemann_envelope(2.0, 1.0, {{0.2, 0.5}}), Error);
}
