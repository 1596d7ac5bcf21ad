#include <doctest.h>

#include "lhdl/core/config.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/model/conditions.hpp"
#include "lhdl/model/flux.hpp"
#include "lhdl/model/spin_model.hpp"
#include "lhdl/model/thermo.hpp"

#include <cmath>
#include <random>

using namespace lhdl;

TEST_CASE("built-in models have the expected state spaces")
{
    auto pm1 = build_model("pm1");
    CHECK(pm1.K() == 3);
    auto alias = build_model("pm1-model");
    CHECK(alias.K() == 3);
    auto tl = build_model("two-lane", 2.0);
    CHECK(tl.K() == 4);
    CHECK(tl.gamma_param == doctest::Approx(2.0));
    CHECK_THROWS_AS(build_model("no-such-model"), Error);
}

TEST_CASE("invalid tables are rejected")
{
    RawModelTables t;
    t.labels = {"a", "b"};
    t.eta = {0, 1};
    t.zeta_raw = {-1, 1};
    t.pi = {0.7, 0.7};   // not a probability
    t.R = {1, 0};
    t.r.assign(16, 0.0);
    t.s.assign(16, 0.0);
    try {
        build_model(t);
        FAIL("expected InvalidModel");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidModel);
    }
    t.pi = {0.5, 0.5};
    t.R = {0, 0};   // not an involution
    CHECK_THROWS_AS(build_model(t), Error);
}

TEST_CASE("canonical parameters invert the mean map")
{
    for (auto name : {"pm1", "two-lane"}) {
        auto m = build_model(name, 2.0);
        for (auto [r, u] : std::vector<std::pair<double, double>>{{0.3, 0.1}, {0.5, -0.2}, {0.7, 0.05}}) {
            if (!m.domain.interior(r, u, 1e-6)) continue;
            auto p = product_marginal(m, r, u);
            auto mom = site_moments(m, p);
            CHECK(mom.mean_eta == doctest::Approx(r).epsilon(1e-10));
            CHECK(mom.mean_zeta == doctest::Approx(u).epsilon(1e-10));
            auto cp = invert_parameters(m, r, u);
            Eigen::Matrix2d H = hessian_G(m, cp.tau, cp.theta);
            CHECK((H - mom.covariance()).norm() < 1e-10);
        }
    }
    auto m = build_model("pm1");
    CHECK_THROWS_AS(invert_parameters(m, 2.0, 0.0), Error);
}

TEST_CASE("thermodynamic entropy is convex on random interior points")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> U(0, 1);
    for (auto name : {"pm1", "two-lane"}) {
        auto m = build_model(name, 2.0);
        int tested = 0;
        while (tested < 20) {
            double r = U(gen), u = 2 * U(gen) - 1;
            if (!m.domain.interior(r, u, 0.05)) continue;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hessian_S(m, r, u));
            CHECK(es.eigenvalues().minCoeff() > 0);
            ++tested;
        }
    }
}

TEST_CASE("both built-in models satisfy the structural conditions")
{
    for (auto name : {"pm1", "two-lane"}) {
        auto m = build_model(name, 2.0);
        auto rep = validate_conditions(m, 4);
        INFO(rep.render());
        CHECK(rep.all_pass());
    }
}

TEST_CASE("a perturbed asymmetric rate breaks stationarity")
{
    auto m = build_model("pm1");
    bool done = false;
    for (size_t k = 0; k < m.r.size() && !done; ++k)
        if (m.r[k] > 0) {
            m.r[k] *= 1.5;
            done = true;
        }
    REQUIRE(done);
    auto rep = validate_conditions(m, 4);
    CHECK_FALSE(rep.asym_stationarity.pass);
}

TEST_CASE("pm1 fluxes have the closed form rho u, rho + u^2")
{
    FluxPair f(build_model("pm1"));
    CHECK(f.gamma() == doctest::Approx(1.0).epsilon(1e-4));
    for (double r : {0.2, 0.5, 0.8})
        for (double u : {-0.1, 0.0, 0.15}) {
            if (!f.domain().interior(r, u, 1e-3)) continue;
            CHECK(f.psi(r, u) == doctest::Approx(r * u).epsilon(1e-10));
            CHECK(f.phi(r, u) == doctest::Approx(r + u * u).epsilon(1e-10));
        }
}

TEST_CASE("two-lane fluxes agree with the analytic pair")
{
    const double g = 2.0;
    FluxPair f(build_model("two-lane", g));
    TwoLaneFlux t(g);
    CHECK(f.gamma() == doctest::Approx(g).epsilon(1e-4));
    for (double r : {0.1, 0.4, 0.9})
        for (double u : {-0.6, 0.0, 0.3}) {
            CHECK(std::fabs(f.psi(r, u) - t.psi(r, u)) < 1e-10);
            CHECK(std::fabs(f.phi(r, u) - t.phi(r, u)) < 1e-10);
            auto a = f.jet(r, u), b = t.jet(r, u);
            CHECK(std::fabs(a.phi_u - b.phi_u) < 1e-6);
            CHECK(std::fabs(a.psi_rho - b.psi_rho) < 1e-6);
        }
}

TEST_CASE("Onsager relation holds")
{
    for (auto name : {"pm1", "two-lane"}) {
        FluxPair f(build_model(name, 2.0));
        for (double r : {0.3, 0.6})
            for (double u : {-0.2, 0.1})
                if (f.domain().interior(r, u, 1e-3)) CHECK(onsager_residual(f, r, u) < 1e-8);
    }
}

TEST_CASE("scaled fluxes approach the limit pair")
{
    auto base = std::make_shared<TwoLaneFlux>(2.0);
    LimitFlux lim(2.0);
    double prev = 1e9;
    for (double n : {1e2, 1e4, 1e6}) {
        ScaledFlux s(base, n, 0.25);
        double err = std::fabs(s.psi(1.0, 0.5) - lim.psi(1.0, 0.5)) + std::fabs(s.phi(1.0, 0.5) - lim.phi(1.0, 0.5));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("config parsing, rendering and unknown keys")
{
    auto c = Config::parse("# comment\n[model]\nname = \"pm1\"\ngamma = 2.5\n[entropy]\nn_list = [100, 1000]\nflag = true\n");
    CHECK(c.string("model", "name", "") == "pm1");
    CHECK(c.number("model", "gamma", 0) == 2.5);
    CHECK(c.numbers("entropy", "n_list", {}).size() == 2);
    CHECK(c.boolean("entropy", "flag", false));
    auto again = Config::parse(c.render());
    CHECK(again.render() == c.render());
    CHECK_NOTHROW(c.reject_unknown({{"model", {"name", "gamma"}}, {"entropy", {"n_list", "flag"}}}));
    CHECK_THROWS_AS(c.reject_unknown({{"model", {"name"}}, {"entropy", {"n_list", "flag"}}}), Error);
    CHECK_THROWS_AS(Config::parse("[model\nname = 1\n"), Error);
}

TEST_CASE("domain projection lands inside")
{
    auto m = build_model("two-lane", 2.0);
    auto p = m.domain.project(1.3, -2.0);
    CHECK(m.domain.contains(p[0], p[1], 1e-12));
    CHECK(m.domain.margin(0.5, 0.0) > 0);
}
