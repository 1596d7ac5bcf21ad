#include "lhdl/sim/blocks.hpp"

#include <cmath>

namespace lhdl {

double block_average(const std::vector<double>& xi, long l, double x)
{
    const long n = (long)xi.size();
    double c = n * x;
    long lo = (long)std::ceil(c - l), hi = (long)std::floor(c + l);
    double s = 0;
    for (long j = lo; j <= hi; ++j) {
        double w = weight_a((c - j) / l);
        if (w == 0) continue;
        long jj = ((j % n) + n) % n;
        s += w * xi[jj];
    }
    return s / l;
}

std::vector<double> site_values(const LatticeState& st, const SpinModel& m, SiteObservable obs)
{
    std::vector<double> v(st.spins.size());
    const auto& tab = obs == SiteObservable::Eta ? m.eta : m.zeta;
    for (size_t j = 0; j < v.size(); ++j) v[j] = tab[st.spins[j]];
    return v;
}

double block_average(const LatticeState& st, const SpinModel& m, SiteObservable obs, long l, double x)
{
    return block_average(site_values(st, m, obs), l, x);
}

FieldPair empirical_fields(const LatticeState& st, const SpinModel& m, const ScalingPlan& plan, int m_out)
{
    FieldPair f;
    f.rho.kind = FieldKind::Rho;
    f.u.kind = FieldKind::U;
    f.rho.time = f.u.time = st.time;
    f.rho.values.resize(m_out);
    f.u.values.resize(m_out);
    auto eta = site_values(st, m, SiteObservable::Eta);
    auto zeta = site_values(st, m, SiteObservable::Zeta);
    double sr = plan.rho_scale(), su = plan.u_scale();
    for (int k = 0; k < m_out; ++k) {
        double x = double(k) / m_out;
        f.rho.values[k] = sr * block_average(eta, plan.l, x);
        f.u.values[k] = su * block_average(zeta, plan.l, x);
    }
    return f;
}

} // namespace lhdl
