#pragma once
#include "lhdl/core/field.hpp"
#include "lhdl/model/spin_model.hpp"
#include "lhdl/sim/lattice.hpp"

#include <vector>

namespace lhdl {

// a(x) = 15/16 (1-x^2)^2 on (-1,1)
inline double weight_a(double x)
{
    if (x <= -1.0 || x >= 1.0) return 0.0;
    double t = 1.0 - x * x;
    return 0.9375 * t * t;
}
inline double weight_a_prime(double x)
{
    if (x <= -1.0 || x >= 1.0) return 0.0;
    return -3.75 * x * (1.0 - x * x);
}

// (1/l) sum_j a((n x - j)/l) xi_j on the torus of size xi.size()
double block_average(const std::vector<double>& xi, long l, double x);

enum class SiteObservable { Eta, Zeta };
std::vector<double> site_values(const LatticeState& st, const SpinModel& m, SiteObservable obs);
double block_average(const LatticeState& st, const SpinModel& m, SiteObservable obs, long l, double x);

struct FieldPair {
    Field rho, u;
};

// rho_hat = n^{2b} <eta>_l, u_hat = n^b <zeta>_l at x = k/m
FieldPair empirical_fields(const LatticeState& st, const SpinModel& m, const ScalingPlan& plan, int m_out);

} // namespace lhdl
