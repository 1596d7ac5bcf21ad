#include <doctest.h>

#include "lhdl/core/errors.hpp"
#include "lhdl/model/spin_model.hpp"
#include "lhdl/model/thermo.hpp"
#include "lhdl/sim/blocks.hpp"
#include "lhdl/sim/generator.hpp"
#include "lhdl/sim/lattice.hpp"
#include "lhdl/sim/rng.hpp"
#include "lhdl/sim/state_io.hpp"

#include <cmath>
#include <cstdio>

using namespace lhdl;

TEST_CASE("Philox4x32-10 known answers")
{
    auto a = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(a == Philox4x32::Ctr{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    auto b = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(b == Philox4x32::Ctr{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    auto c = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(c == Philox4x32::Ctr{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter RNG is addressable and stream separated")
{
    CounterRng r(5, 1);
    auto x0 = r.next();
    auto x1 = r.next();
    CHECK(r.at(0) == x0);
    CHECK(r.at(1) == x1);
    CHECK(CounterRng(5, 2).at(0) != x0);
    double u = CounterRng::u53(0, 0);
    CHECK(u > 0);
    CHECK(CounterRng::u53(0xffffffffu, 0xffffffffu) < 1);
}

TEST_CASE("product canonical measures are stationary on small tori")
{
    for (auto name : {"pm1", "two-lane"}) {
        auto m = build_model(name, 2.0);
        auto p = product_marginal(m, 0.4, 0.1);
        for (int n : {3, 4}) {
            auto c = check_stationarity(m, n, p);
            CHECK(c.piL < 1e-12);
            CHECK(c.piK < 1e-12);
            CHECK(c.detailed_balance < 1e-12);
            CHECK(c.row_sum < 1e-12);
        }
    }
    auto m = build_model("two-lane", 2.0);
    CHECK_THROWS_AS(generator_matrix(m, 7, GeneratorPart::L), Error);
}

TEST_CASE("simulation conserves totals and replays from the seed")
{
    auto m = build_model("pm1");
    auto plan = ScalingPlan::eulerian(128);
    auto rho = [](double x) { return 0.5 + 0.1 * std::sin(2 * M_PI * x); };
    auto u = [](double x) { return 0.1 * std::cos(2 * M_PI * x); };
    auto a = sample_local_equilibrium(m, rho, u, plan, 42);
    auto b = sample_local_equilibrium(m, rho, u, plan, 42);
    auto c = sample_local_equilibrium(m, rho, u, plan, 43);
    const long long N0 = a.N, Z0 = a.Z2;
    simulate(a, m, plan, 0.05);
    simulate(b, m, plan, 0.05);
    simulate(c, m, plan, 0.05);
    CHECK(a.N == N0);
    CHECK(a.Z2 == Z0);
    CHECK(a.totals_consistent(m));
    CHECK(a.events > 0);
    CHECK(a.trace == b.trace);
    CHECK(a.spins == b.spins);
    CHECK(a.trace != c.trace);
}

TEST_CASE("split runs keep the clock and totals")
{
    auto m = build_model("two-lane", 2.0);
    auto plan = ScalingPlan::eulerian(64);
    auto st = sample_local_equilibrium(m, [](double) { return 0.5; }, [](double) { return 0.0; }, plan, 3);
    const long long N0 = st.N, Z0 = st.Z2;
    simulate(st, m, plan, 0.02);
    CHECK(st.time == 0.02);
    simulate(st, m, plan, 0.04);
    CHECK(st.time == 0.04);
    CHECK(st.N == N0);
    CHECK(st.Z2 == Z0);
    CHECK_THROWS_AS(simulate(st, m, plan, 0.01), Error);
}

TEST_CASE("local equilibrium matches the profile on average")
{
    auto m = build_model("pm1");
    const long n = 20000;
    auto plan = ScalingPlan::eulerian(n);
    auto st = sample_local_equilibrium(m, [](double) { return 0.6; }, [](double) { return -0.2; }, plan, 9);
    auto eta = site_values(st, m, SiteObservable::Eta);
    auto zeta = site_values(st, m, SiteObservable::Zeta);
    double se = 0, sz = 0;
    for (long j = 0; j < n; ++j) {
        se += eta[j];
        sz += zeta[j];
    }
    // 5 sigma with site variances below 1
    CHECK(std::fabs(se / n - 0.6) < 5.0 / std::sqrt(double(n)));
    CHECK(std::fabs(sz / n + 0.2) < 5.0 / std::sqrt(double(n)));
}

TEST_CASE("block averages of constant data")
{
    std::vector<double> xi(400, 2.0);
    const long l = 20;
    double norm = 0;
    for (long k = -l; k <= l; ++k) norm += weight_a(double(k) / l);
    CHECK(block_average(xi, l, 0.3) == doctest::Approx(2.0 * norm / l).epsilon(1e-12));
    CHECK(norm / l == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("mirror symmetry of a state")
{
    auto m = build_model("pm1");
    auto plan = ScalingPlan::eulerian(50);
    auto st = sample_local_equilibrium(m, [](double) { return 0.5; }, [](double) { return 0.2; }, plan, 1);
    auto mir = mirror_state(st, m);
    mir.refresh_totals(m);
    CHECK(mir.N == st.N);
    CHECK(mir.Z2 == -st.Z2);
}

TEST_CASE("state dump round trip")
{
    auto m = build_model("two-lane", 2.0);
    auto plan = ScalingPlan::eulerian(100);
    auto st = sample_local_equilibrium(m, [](double) { return 0.5; }, [](double) { return 0.1; }, plan, 11);
    simulate(st, m, plan, 0.01);
    std::string path = "lattice_sim_state.bin";
    dump_state(st, m.K(), path);
    auto back = load_state(m, path);
    CHECK(back.spins == st.spins);
    CHECK(back.time == st.time);
    CHECK(back.rng.counter() == st.rng.counter());
    // continuing either copy gives the same trajectory
    simulate(st, m, plan, 0.02);
    simulate(back, m, plan, 0.02);
    CHECK(back.spins == st.spins);
    std::remove(path.c_str());
}

TEST_CASE("scaling plan validation")
{
    auto p = ScalingPlan::eulerian(100, 0.0, 60);
    CHECK_THROWS_AS(p.validate(), Error);
    auto q = ScalingPlan::intermediate(1000, 0.1, 0.0, 0, true);
    CHECK_THROWS_AS(q.validate(), Error);
    auto r = ScalingPlan::intermediate(1000, 0.1, 0.0, 0, false);
    CHECK_FALSE(r.validate().empty());
    CHECK(r.rho_scale() == doctest::Approx(std::pow(1000.0, 0.2)));
}
