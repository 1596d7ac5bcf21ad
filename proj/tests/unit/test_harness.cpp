#include <doctest.h>

#include "lhdl/core/config.hpp"
#include "lhdl/core/errors.hpp"
#include "lhdl/harness/convergence.hpp"
#include "lhdl/harness/microcanonical.hpp"
#include "lhdl/harness/report.hpp"
#include "lhdl/harness/tails.hpp"
#include "lhdl/model/spin_model.hpp"

#include <cmath>

using namespace lhdl;

TEST_CASE("moments are exactly one at gamma zero")
{
    auto m = build_model("pm1");
    for (const char* obs : {"psi", "phi", "eta"}) {
        auto sets = level_set_moments(m, 4, {0.0, 0.5}, 0, obs);
        double total = 0;
        for (auto& s : sets) {
            CHECK(s.moment[0] == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(s.moment[1] > 0);
            total += s.prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("reflection symmetric observables have even moments on u = 0 level sets")
{
    auto m = build_model("pm1");
    MomentConfig c;
    c.ls = {4, 5};
    c.gammas = {0.5, 1.0};
    for (const char* obs : {"phi", "eta"}) {
        c.observable = obs;
        auto rep = microcanonical_moment_check(m, c);
        for (auto& r : rep.rows) CHECK(r.parity_error < 1e-12);
    }
}

TEST_CASE("enumeration guards")
{
    auto m = build_model("two-lane", 2.0);
    CHECK_THROWS_AS(level_set_moments(m, 8, {1.0}, 0, "psi", 1e4), Error);
    CHECK_THROWS_AS(level_set_moments(m, 3, {1.0}, 1, "phi"), Error);
}

TEST_CASE("tail bounds are monotone probabilities")
{
    const double L = 40, C = 1.2;
    double prev_p = 2, prev_g = 2;
    for (double z = 0.5; z < 4; z += 0.25) {
        double p = poisson_tail_bound(L, z, C), g = gaussian_tail_bound(L, z, C);
        CHECK(p >= 0);
        CHECK(p <= 1);
        CHECK(p <= prev_p);
        CHECK(g <= prev_g);
        prev_p = p;
        prev_g = g;
    }
    CHECK(gaussian_tail_bound(L, 0.5 * C, C) == 1.0);
    CHECK(gaussian_tail_bound(L, C, C) == doctest::Approx(1.0));
}

TEST_CASE("small tail run is reproducible")
{
    TailConfig c;
    c.n = 2000;
    c.samples = 20000;
    c.train = 20000;
    c.quantiles = 4;
    auto a = tail_checks(c), b = tail_checks(c);
    CHECK(a.bins.size() == b.bins.size());
    for (size_t k = 0; k < a.bins.size(); ++k) CHECK(a.bins[k].count == b.bins[k].count);
    CHECK(a.C > 0);
    CHECK(a.C == std::max(a.C_rho, a.C_u));
}

TEST_CASE("tiny Eulerian run conserves mass and replays")
{
    ExperimentConfig c;
    c.n_list = {64, 128};
    c.replicas = 3;
    c.checkpoints = {0.0, 0.05};
    c.m_out = 32;
    auto a = run_eulerian(c), b = run_eulerian(c);
    CHECK(a.mass_constant);
    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].l1() == b.rows[k].l1());
    CHECK(a.final_l1().size() == 2);
    CHECK_FALSE(a.weak.empty());
}

TEST_CASE("experiment config round trip")
{
    ExperimentConfig c;
    c.beta = 0.1;
    c.mode = ScalingMode::Intermediate;
    c.n_list = {100, 200};
    Config cfg;
    c.to_config(cfg);
    auto d = ExperimentConfig::from_config(Config::parse(cfg.render()));
    CHECK(d.beta == 0.1);
    CHECK(d.mode == ScalingMode::Intermediate);
    CHECK(d.n_list == c.n_list);
    CHECK_THROWS_AS(run_intermediate(ExperimentConfig{}), Error);
}

TEST_CASE("manifest carries the run section")
{
    Config cfg = Config::parse("[model]\nname = \"pm1\"\n");
    auto text = render_manifest(cfg, "simulate", 17);
    auto back = Config::parse(text);
    CHECK(back.string("run", "command", "") == "simulate");
    CHECK(back.integer("run", "seed", 0) == 17);
    CHECK(back.string("model", "name", "") == "pm1");
    auto s = render_summary("t", {{"a", true, "x"}, {"b", false, "y"}});
    CHECK(s.find("FAIL") != std::string::npos);
}
