#pragma once
// Fitted constants for the global derivative bounds of the cutoff entropy.
#include "lhdl/entropy/entropy_table.hpp"

#include <string>
#include <vector>

namespace lhdl {

struct BoundFit {
    std::string name;
    double C = 0;                 // smallest constant making the bound hold on the grid
    double rho = 0, u = 0;        // arg-max point
    double outside = 0;           // max of the left side off D3 (should be ~0)
    bool indicator_ok = true;     // outside <= 1e-8
    bool finite() const;
};

struct BoundReport {
    double n = 1, beta = 0, r_lo = 0, r_hi = 0;
    int grid = 0;
    std::vector<BoundFit> fits;   // s_rho, s_u, s_rr, s_ru, s_uu, flux, d3_support
    BoundFit d1_support;          // {rho <= r_lo - sqrt(r_lo)|u|/C} inside D1
    double box_M = 0;             // largest M with the box {rho v |u| <= M} inside D1(r_lo)
    double box_I_min = 1;         // min of I = 1 - S_rho over table nodes in that box

    bool all_finite() const;
    bool all_indicator() const;
    const BoundFit& get(const std::string& name) const;
    std::string render() const;
};

BoundReport verify_bounds(const EntropyTable& t);

// Largest M such that the box rho, |u| <= M lies in D1(r) for the given curve sigma(.; r).
double box_inside_d1(const CharCurve& lo);

struct UniformReport {
    std::vector<double> n_list;
    std::vector<BoundReport> per_n;
    std::vector<std::string> names;
    std::vector<double> max_C, min_C;

    double spread(std::size_t k) const { return min_C[k] > 0 ? max_C[k] / min_C[k] - 1.0 : 0.0; }
    std::string render() const;
};

UniformReport verify_bounds_across_n(FluxPtr base, double r_lo, double r_hi, double beta,
                                     const std::vector<double>& n_list, const EntropyOptions& opt = {});

} // namespace lhdl
