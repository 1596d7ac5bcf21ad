#include "lhdl/sim/lattice.hpp"

#include "lhdl/core/errors.hpp"
#include "lhdl/model/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lhdl {

long default_block_size(long n)
{
    return (long)std::ceil(std::pow(double(n), 0.6));
}

ScalingPlan ScalingPlan::eulerian(long n, double delta, long l)
{
    ScalingPlan p;
    p.mode = ScalingMode::Eulerian;
    p.n = n;
    p.delta = delta;
    p.l = l > 0 ? l : default_block_size(n);
    return p;
}

ScalingPlan ScalingPlan::intermediate(long n, double beta, double delta, long l, bool strict)
{
    ScalingPlan p;
    p.mode = ScalingMode::Intermediate;
    p.n = n;
    p.beta = beta;
    p.delta = delta;
    p.strict = strict;
    p.l = l > 0 ? l : default_block_size(n);
    return p;
}

std::vector<std::string> ScalingPlan::validate() const
{
    std::vector<std::string> warn;
    if (n < 3) throw Error(ErrorKind::Config, "torus size must be at least 3");
    if (beta < 0) throw Error(ErrorKind::Config, "beta must be nonnegative");
    if (mode == ScalingMode::Eulerian && beta != 0)
        throw Error(ErrorKind::Config, "Eulerian plan requires beta = 0");
    if (l < 1 || 2 * l >= n) throw Error(ErrorKind::Config, "block size must satisfy 1 <= l < n/2");
    if (mode == ScalingMode::Intermediate) {
        bool ok = 2 * delta - 8 * beta > 1 && delta + 3 * beta < 1;
        if (!ok) {
            std::ostringstream os;
            os << "(beta,delta)=(" << beta << "," << delta
               << ") outside 2d-8b>1, d+3b<1";
            if (strict) throw Error(ErrorKind::Config, os.str());
            warn.push_back(os.str() + " (non-strict run)");
        }
        double lo = std::pow(double(n), (1 + delta + 5 * beta) / 3);
        double hi = std::pow(double(n), delta - beta);
        if (!(lo < l && l < hi)) {
            std::ostringstream os;
            os << "block size l=" << l << " outside n^{(1+d+5b)/3}=" << lo << " .. n^{d-b}=" << hi;
            warn.push_back(os.str());
        }
    }
    return warn;
}

void LatticeState::recount(const SpinModel& m, long long& N_out, long long& Z2_out) const
{
    N_out = 0;
    Z2_out = 0;
    for (uint8_t s : spins) {
        N_out += std::llround(m.eta[s]);
        Z2_out += std::llround(2.0 * m.zeta[s] / m.v0);
    }
}

bool LatticeState::totals_consistent(const SpinModel& m) const
{
    long long a, b;
    recount(m, a, b);
    return a == N && b == Z2;
}

LocalEquilibrium::LocalEquilibrium(const SpinModel& m, const std::function<double(double)>& rho_profile,
                                   const std::function<double(double)>& u_profile, const ScalingPlan& plan)
    : model_(&m), n_(plan.n), k_(m.K())
{
    double sr = 1.0 / plan.rho_scale(), su = 1.0 / plan.u_scale();
    cdf_.resize(size_t(n_) * k_);
    for (long j = 0; j < n_; ++j) {
        double x = double(j) / n_;
        double rho = rho_profile(x) * sr, u = u_profile(x) * su;
        if (!m.domain.interior(rho, u)) {
            std::ostringstream os;
            os << "profile point x=" << x << " maps to (" << rho << "," << u << ")";
            throw Error(ErrorKind::OutOfDomain, os.str());
        }
        auto p = product_marginal(m, rho, u);
        double c = 0;
        for (int a = 0; a < k_; ++a) {
            c += p[a];
            cdf_[size_t(j) * k_ + a] = c;
        }
        cdf_[size_t(j) * k_ + k_ - 1] = 1.0;
    }
}

LatticeState LocalEquilibrium::sample(uint64_t seed, uint64_t stream) const
{
    LatticeState st;
    st.spins.resize(n_);
    // site draws use the upper half of the stream space so that they never
    // share counters with the dynamics
    CounterRng init(seed, stream ^ 0x8000000000000000ull);
    for (long j = 0; j < n_; j += 4) {
        auto w = init.at(uint64_t(j) / 4);
        for (int q = 0; q < 4 && j + q < n_; ++q) {
            double x = CounterRng::u32(w[q]);
            const double* c = &cdf_[size_t(j + q) * k_];
            int a = 0;
            while (a < k_ - 1 && x > c[a]) ++a;
            st.spins[j + q] = uint8_t(a);
        }
    }
    st.rng = CounterRng(seed, stream);
    st.refresh_totals(*model_);
    return st;
}

LatticeState sample_local_equilibrium(const SpinModel& m, const std::function<double(double)>& rho_profile,
                                      const std::function<double(double)>& u_profile,
                                      const ScalingPlan& plan, uint64_t seed, uint64_t stream)
{
    return LocalEquilibrium(m, rho_profile, u_profile, plan).sample(seed, stream);
}

JumpTable JumpTable::build(const SpinModel& m, double lambda, double kappa)
{
    JumpTable t;
    int K = m.K();
    t.K = K;
    t.begin.assign(K * K + 1, 0);
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) {
            t.begin[a * K + b] = (int)t.channels.size();
            double cum = 0;
            for (int c = 0; c < K; ++c)
                for (int d = 0; d < K; ++d) {
                    if (c == a && d == b) continue;
                    double rate = lambda * m.rate_r(a, b, c, d) + kappa * m.rate_s(a, b, c, d);
                    if (rate <= 0) continue;
                    cum += rate;
                    t.channels.push_back({cum, uint8_t(c), uint8_t(d)});
                }
            t.max_total = std::max(t.max_total, cum);
        }
    t.begin[K * K] = (int)t.channels.size();
    return t;
}

void simulate(LatticeState& st, const SpinModel& m, const ScalingPlan& plan, double t_end,
              const ObserverSchedule* obs)
{
    simulate(st, m, JumpTable::build(m, plan.lambda_speed(), plan.kappa_speed()), t_end, obs);
}

void simulate(LatticeState& st, const SpinModel& m, const JumpTable& jt, double t_end,
              const ObserverSchedule* obs)
{
    if (t_end < st.time) throw Error(ErrorKind::Config, "t_end precedes the current time");
    const long n = st.n();
    const int K = jt.K;
    size_t next_obs = 0;
    std::vector<double> times;
    if (obs) {
        times = obs->times;
        std::sort(times.begin(), times.end());
        while (next_obs < times.size() && times[next_obs] < st.time) ++next_obs;
    }
    auto fire_until = [&](double t) {
        while (obs && next_obs < times.size() && times[next_obs] <= t) {
            double keep = st.time;
            st.time = times[next_obs];
            if (!st.totals_consistent(m)) throw Error(ErrorKind::InvalidModel, "conservation violated");
            obs->callback(st, times[next_obs]);
            st.time = keep;
            ++next_obs;
        }
    };

    if (jt.max_total <= 0 || n < 2) {
        fire_until(t_end);
        st.time = t_end;
        return;
    }
    const double total_rate = jt.max_total * double(n);
    uint8_t* sp = st.spins.data();
    double time = st.time;
    uint64_t ctr = st.rng.counter();
    uint64_t trace = st.trace;
    uint64_t events = st.events;
    for (;;) {
        auto w = st.rng.at(ctr++);
        double t_next = time - std::log(CounterRng::u53(w[0], w[1])) / total_rate;
        if (obs && next_obs < times.size() && times[next_obs] < t_next && times[next_obs] <= t_end) {
            st.time = time;
            st.trace = trace;
            st.events = events;
            st.rng.set_counter(ctr);
            fire_until(std::min(t_next, t_end));
        }
        if (t_next > t_end) break;
        time = t_next;
        long j = (long)CounterRng::below(w[2], uint32_t(n));
        long j1 = j + 1 == n ? 0 : j + 1;
        int pair = sp[j] * K + sp[j1];
        double x = CounterRng::u32(w[3]) * jt.max_total;
        for (int c = jt.begin[pair]; c < jt.begin[pair + 1]; ++c) {
            if (x < jt.channels[c].cum) {
                sp[j] = jt.channels[c].c;
                sp[j1] = jt.channels[c].d;
                trace = (trace ^ (uint64_t(j) * 1315423911ull + uint64_t(c))) * 1099511628211ull;
                ++events;
                break;
            }
        }
    }
    st.time = t_end;
    st.trace = trace;
    st.events = events;
    st.rng.set_counter(ctr);
    if (!st.totals_consistent(m)) throw Error(ErrorKind::InvalidModel, "conservation violated");
}

LatticeState mirror_state(const LatticeState& st, const SpinModel& m)
{
    LatticeState out = st;
    long n = st.n();
    // site j -> -j keeps bond orientation reversed, as in the reflection
    for (long j = 0; j < n; ++j) out.spins[(n - j) % n] = uint8_t(m.R[st.spins[j]]);
    out.refresh_totals(m);
    return out;
}

} // namespace lhdl
