#include <doctest.h>

#include "lhdl/core/errors.hpp"
#include "lhdl/entropy/bounds.hpp"
#include "lhdl/entropy/char_curve.hpp"
#include "lhdl/entropy/char_lattice.hpp"
#include "lhdl/entropy/cutoff.hpp"
#include "lhdl/entropy/entropy_table.hpp"
#include "lhdl/pde/riemann.hpp"

#include <cmath>

using namespace lhdl;

TEST_CASE("cutoff profile knots")
{
    const double lo = 1, hi = std::exp(1.0);
    auto a = cutoff_profile(lo, hi, lo);
    CHECK(a.s == doctest::Approx(0).epsilon(1e-14));
    CHECK(a.ds == doctest::Approx(0).epsilon(1e-14));
    auto b = cutoff_profile(lo, hi, hi);
    CHECK(b.s == doctest::Approx(hi - (hi - 1)).epsilon(1e-12));
    CHECK(b.ds == doctest::Approx(1).epsilon(1e-12));
    CHECK(cutoff_profile(lo, hi, 0.5).s == 0);
    CHECK(cutoff_profile(lo, hi, 5.0).s == doctest::Approx(5 - cutoff_shift(lo, hi)));
    // continuity of s and s' from both sides
    for (double r : {lo, hi}) {
        auto m = cutoff_profile(lo, hi, r * (1 - 1e-9)), p = cutoff_profile(lo, hi, r * (1 + 1e-9));
        CHECK(std::fabs(m.s - p.s) < 1e-8);
        CHECK(std::fabs(m.ds - p.ds) < 1e-8);
    }
}

TEST_CASE("kink grid puts both kinks at half steps")
{
    auto v = kink_grid(1e-3, 0.1, 1.0, 3.0, 8);
    int below_lo = 0, between = 0;
    for (size_t k = 0; k < v.size(); ++k) {
        CHECK(std::fabs(v[k] - 0.1) > 1e-9);
        CHECK(std::fabs(v[k] - 1.0) > 1e-9);
        if (k) CHECK(v[k] > v[k - 1]);
        if (v[k] < 0.1) ++below_lo;
        if (v[k] > 0.1 && v[k] < 1.0) ++between;
    }
    CHECK(between == 8);
    CHECK(below_lo > 0);
    CHECK_THROWS_AS(kink_grid(1.0, 0.1, 1.0, 3.0, 8), Error);
}

TEST_CASE("five-point stencils differentiate quartics exactly")
{
    std::vector<double> x;
    for (int k = 0; k < 20; ++k) x.push_back(std::exp(0.1 * k) + 0.01 * k * k);
    std::vector<double> f(x.size());
    for (size_t k = 0; k < x.size(); ++k) f[k] = 1 + x[k] - 2 * x[k] * x[k] + 0.5 * std::pow(x[k], 4);
    for (std::vector<int> breaks : {std::vector<int>{}, std::vector<int>{9}}) {
        Diff1 d(x, breaks);
        for (int k = 0; k < d.size(); ++k) {
            double exact = 1 - 4 * x[k] + 2 * std::pow(x[k], 3);
            CHECK(d.apply(f.data(), 1, k) == doctest::Approx(exact).epsilon(1e-8));
        }
    }
}

TEST_CASE("characteristic curves are level lines of z")
{
    LimitFlux f(2.0);
    for (double r : {0.01, 0.1, 0.5}) {
        CharCurve c = characteristic_curve(f, r, 0.5);
        const double z0 = riemann_invariants(2, r, 0).z;
        double dz = 0;
        for (int k = 0; k <= 100; ++k) {
            double u = 0.5 * k / 100;
            dz = std::max(dz, std::fabs(riemann_invariants(2, c(u), u).z - z0));
        }
        CHECK(dz < 1e-6);
        CHECK(c(0) == doctest::Approx(r));
        CHECK(c.u_hit < 0);
    }
    CHECK_THROWS_AS(characteristic_curve(f, 0.0, 0.5), Error);
}

TEST_CASE("level lines of the invariants are concave for gamma > 1")
{
    std::vector<double> us;
    for (int k = 0; k <= 200; ++k) us.push_back(-1 + 0.01 * k);
    for (double g : {1.5, 2.0, 3.0})
        for (double c : {0.2, 0.7}) {
            auto r = invariant_level_line(g, false, c, us);
            for (size_t k = 1; k + 1 < us.size(); ++k) {
                if (std::isnan(r[k - 1]) || std::isnan(r[k + 1])) continue;
                CHECK(r[k + 1] - 2 * r[k] + r[k - 1] <= 1e-12);
            }
        }
}

TEST_CASE("mirror image of the lower curve bounds the upper half")
{
    LimitFlux f(2.0);
    CharCurve c = characteristic_curve(f, 0.3, 0.4);
    CHECK(classify(c, 0.0, 0.1) == Region::D1);
    CHECK(classify(c, 0.3, 0.0) == Region::D3);
    CHECK(classify(c, 0.5, 0.0) == Region::D2);
    CHECK(classify(c, 0.1, 0.2) == classify(c, 0.1, -0.2));
}

TEST_CASE("sandwich constants are ordered")
{
    LimitFlux f(2.0);
    auto fit = fit_lemma1(f, 1.0);
    CHECK(fit.ordered());
}

TEST_CASE("entropy table is exact off the transition region and solves the entropy equation")
{
    EntropyOptions o;
    o.grid = 48;
    auto t = build_entropy(make_flux("limit", 2.0), 0.02, 0.02 * std::exp(4.0), 1, 0, o);
    auto k = check_entropy(t);
    CHECK(k.d1_max == 0.0);
    CHECK(k.d2_max < 1e-12);
    CHECK(k.partition_error < 1e-12);
    CHECK(k.pde_residual < 1e-3);
    CHECK(k.flux_rel_error < 1e-2);
    CHECK(k.interior_nodes > 1000);
    // S is even in u
    for (const auto& r : t.rows)
        if (r.label == Region::D1) CHECK(r.S == 0.0);

    auto b = verify_bounds(t);
    CHECK(b.all_finite());
    CHECK(b.all_indicator());
    CHECK(b.get("s_rho").C > 0);
    CHECK_THROWS(b.get("nonsense"));
}
