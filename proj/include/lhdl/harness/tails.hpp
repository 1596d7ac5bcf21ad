#pragma once
// Out-of-sample check of the Poisson / Gaussian dominations of weighted
// block averages under a constant-profile local equilibrium.
#include "lhdl/core/config.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace lhdl {

struct TailConfig {
    std::string model = "pm1";
    double model_gamma = 2.0;
    long n = 10000;
    double beta = 0.1;
    long block = 0;            // 0 -> chosen so that L = n^{-2 beta} l ~ target_L
    double target_L = 50.0;
    double rho = 1.0, u = 0.5; // macroscopic profile values
    long samples = 1000000;    // test blocks
    long train = 1000000;      // training blocks (disjoint RNG streams)
    int quantiles = 10;        // z grid per tail from training quantiles
    double ci = 0.95;
    uint64_t seed = 1;

    static TailConfig from_config(const Config& c);
    void to_config(Config& c) const;
    static const std::set<std::string>& keys();
};

struct TailBin {
    std::string kind;          // "rho" or "u"
    double z = 0;
    long count = 0, total = 0;
    double p_hat = 0, lo = 0, hi = 0, bound = 0;
    bool violation = false;
};

struct TailReport {
    TailConfig cfg;
    long l = 0;
    double L = 0;
    double C = 0, C_rho = 0, C_u = 0;
    std::vector<TailBin> bins;
    int violations = 0;

    double violation_rate() const { return bins.empty() ? 0.0 : double(violations) / bins.size(); }
    bool pass() const { return violation_rate() <= 1.0 - cfg.ci + 1e-12; }
    void write_csv(const std::string& dir) const;
    std::string summary() const;
};

// P(POI(L) > (z/C) L)
double poisson_tail_bound(double L, double z, double C);
// P(|GAU| > ((z/C) - 1) sqrt(L)), 1 when the threshold is negative
double gaussian_tail_bound(double L, double z, double C);

TailReport tail_checks(const TailConfig& cfg);

} // namespace lhdl
