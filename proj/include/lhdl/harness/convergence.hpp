#pragma once
// Particle system against PDE: replica-mean block fields compared to a
// smooth PDE oracle, plus weak (test-function) statistics.
#include "lhdl/core/config.hpp"
#include "lhdl/sim/lattice.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace lhdl {

struct ExperimentConfig {
    std::string model = "pm1";
    double model_gamma = 2.0;              // two-lane parameter
    ScalingMode mode = ScalingMode::Eulerian;
    double beta = 0.0, delta = 0.0;
    bool strict = false;                   // enforce the (beta, delta) regime
    std::vector<long> n_list{256, 512, 1024, 2048};
    int replicas = 20;
    std::vector<double> checkpoints{0.0, 0.1, 0.2};
    int trig_basis = 1;                    // g in {1, sin 2 pi k x, cos 2 pi k x : k <= trig_basis}
    // initial profiles rho0 = rho_mean + rho_amp sin(2 pi x), u0 = u_mean + u_amp cos(2 pi x)
    double rho_mean = 0.5, rho_amp = 0.1, u_mean = 0.0, u_amp = 0.1;
    int m_out = 128;                       // field sample points, also the oracle grid
    long block = 0;                        // 0 -> default_block_size(n)
    double band_sigmas = 3.0;
    std::string out_dir;
    uint64_t seed = 1;

    static ExperimentConfig from_config(const Config& c);
    void to_config(Config& c) const;
    static const std::set<std::string>& keys();
};

struct ConvergenceRow {
    long n = 0, l = 0;
    double t = 0;
    double l1_rho = 0, l1_u = 0, linf_rho = 0, linf_u = 0;
    double se_rho = 0, se_u = 0;   // mean standard error of the replica-mean fields
    double l1() const { return l1_rho + l1_u; }
};

struct WeakStat {
    long n = 0;
    double t = 0;
    std::string field, g;
    double mean = 0, sd = 0, pde = 0;
    bool within = false;
};

struct ConvergenceReport {
    ExperimentConfig cfg;
    std::string flux_name;
    std::vector<ConvergenceRow> rows;
    std::vector<WeakStat> weak;
    bool mass_constant = true;       // g = 1 statistic for rho identical at every checkpoint, per replica
    std::vector<std::string> warnings;
    double seconds = 0;

    // final-checkpoint L1 (rho + u) per n, in n_list order
    std::vector<double> final_l1() const;
    bool l1_strictly_decreasing() const;
    bool weak_all_within() const;
    void write_csv(const std::string& dir) const;
    std::string summary() const;
};

// Eulerian: lambda = kappa = n (delta = 0 by default), oracle = Euler system
// with the model's own fluxes.
ConvergenceReport run_eulerian(const ExperimentConfig& cfg);
// Intermediate: lambda = n^{1+beta}, kappa = n^{1+beta+delta}, oracle = limit
// system with the model's gamma.
ConvergenceReport run_intermediate(const ExperimentConfig& cfg);

} // namespace lhdl
