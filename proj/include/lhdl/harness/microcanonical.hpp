#pragma once
// Exact enumeration of conditional exponential moments of weighted block
// averages of a bond observable, given the plain block averages.
#include "lhdl/model/spin_model.hpp"

#include <string>
#include <vector>

namespace lhdl {

struct MomentConfig {
    std::vector<int> ls{4, 5, 6, 7, 8};
    std::vector<double> gammas;     // empty -> 0.05, 0.10, ..., 3.00
    int variant = 0;                // 0: b = a'(2s-1), M(b)=0;  1: b = 2a(2s-1), M(b)=1, centred by Xi
    std::string observable = "psi"; // psi | phi (bond currents) | eta (site)
    double max_states = 1e7;
    double stability = 0.30;        // allowed relative spread of C across l
};

struct LevelSetMoment {
    double x_rho = 0, x_u = 0;      // plain block averages
    double prob = 0;                // reference weight of the level set
    std::vector<double> moment;     // per gamma
};

struct MomentRow {
    int l = 0;
    double C = 0;                   // max over gamma, x of log E / (gamma^2 + gamma / sqrt l)
    double gamma_at = 0, x_rho_at = 0, x_u_at = 0;
    int level_sets = 0;
    double gamma0_error = 0;        // max |E - 1| at gamma = 0
    // max relative |E(g) - E(-g)| on u = 0 level sets; only meaningful when xi
    // is reflection symmetric (phi, eta), psi is reflection antisymmetric
    double parity_error = 0;
};

struct MomentReport {
    MomentConfig cfg;
    std::string model;
    std::vector<MomentRow> rows;

    double spread() const;          // max C / min C - 1
    bool stable() const { return spread() <= cfg.stability; }
    void write_csv(const std::string& dir) const;
    std::string summary() const;
};

// Moments of exp{g sqrt(l) <b, xi>_l} (variant 1: minus Xi(<b, zeta>_l)) for
// every level set of (eta, zeta) over sites 1..l.  Sites 0..l+1 are enumerated,
// xi_j = psi(w_j, w_{j+1}) for j = 0..l, weights from the reference measure.
// Variant 1 supports psi and eta.
std::vector<LevelSetMoment> level_set_moments(const SpinModel& m, int l, const std::vector<double>& gammas,
                                              int variant, const std::string& observable = "psi",
                                              double max_states = 1e7);

MomentReport microcanonical_moment_check(const SpinModel& m, const MomentConfig& cfg);

} // namespace lhdl
