#pragma once
#include "lhdl/model/spin_model.hpp"
#include "lhdl/sim/rng.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lhdl {

enum class ScalingMode { Eulerian, Intermediate };

struct ScalingPlan {
    ScalingMode mode = ScalingMode::Eulerian;
    double beta = 0.0;
    double delta = 0.0;
    long n = 0;
    long l = 0;
    bool strict = true;

    double lambda_speed() const { return std::pow(double(n), 1.0 + beta); }
    double kappa_speed() const { return std::pow(double(n), 1.0 + beta + delta); }
    double rho_scale() const { return std::pow(double(n), 2.0 * beta); }   // n^{2 beta}
    double u_scale() const { return std::pow(double(n), beta); }           // n^{beta}

    static ScalingPlan eulerian(long n, double delta = 0.0, long l = 0);
    static ScalingPlan intermediate(long n, double beta, double delta, long l = 0, bool strict = true);

    // Throws Config on hard violations (beta<0, l out of range, strict
    // regime conditions).  Returns soft warnings about block size bounds.
    std::vector<std::string> validate() const;
};

long default_block_size(long n);

// Spin configuration on the discrete torus plus clock and RNG position.
struct LatticeState {
    std::vector<uint8_t> spins;
    double time = 0.0;
    CounterRng rng;
    long long N = 0;        // sum of eta
    long long Z2 = 0;       // sum of 2*zeta/v0 (integer)
    uint64_t events = 0;    // accepted jumps
    uint64_t trace = 1469598103934665603ull;   // FNV hash of the accepted event sequence

    long n() const { return (long)spins.size(); }
    void recount(const SpinModel& m, long long& N_out, long long& Z2_out) const;
    void refresh_totals(const SpinModel& m) { recount(m, N, Z2); }
    bool totals_consistent(const SpinModel& m) const;
};

// Per-site marginals of a local equilibrium, computed once and reused
// across replicas.
class LocalEquilibrium {
public:
    LocalEquilibrium(const SpinModel& m, const std::function<double(double)>& rho_profile,
                     const std::function<double(double)>& u_profile, const ScalingPlan& plan);
    LatticeState sample(uint64_t seed, uint64_t stream) const;
    long n() const { return n_; }

private:
    const SpinModel* model_;
    long n_;
    int k_;
    std::vector<double> cdf_;   // n x K cumulative
};

LatticeState sample_local_equilibrium(const SpinModel& m, const std::function<double(double)>& rho_profile,
                                      const std::function<double(double)>& u_profile,
                                      const ScalingPlan& plan, uint64_t seed, uint64_t stream = 0);

// Jump channels of an ordered bond with combined rates lambda*r + kappa*s.
struct JumpTable {
    int K = 0;
    double max_total = 0.0;
    std::vector<int> begin;          // K*K + 1 offsets into channels
    struct Channel { double cum; uint8_t c, d; };
    std::vector<Channel> channels;

    static JumpTable build(const SpinModel& m, double lambda, double kappa);
};

using Observer = std::function<void(const LatticeState&, double t)>;

struct ObserverSchedule {
    std::vector<double> times;
    Observer callback;
};

// Exact-in-law CTMC by uniformization at the maximal bond rate.  Observers
// are invoked at each scheduled time in (state.time, t_end].
void simulate(LatticeState& st, const SpinModel& m, const ScalingPlan& plan, double t_end,
              const ObserverSchedule* obs = nullptr);
void simulate(LatticeState& st, const SpinModel& m, const JumpTable& jt, double t_end,
              const ObserverSchedule* obs = nullptr);

// spins reversed in space with R applied sitewise
LatticeState mirror_state(const LatticeState& st, const SpinModel& m);

} // namespace lhdl
