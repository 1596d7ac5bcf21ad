#pragma once
// Lattice in characteristic coordinates (w, z).  Node (i, j) is the crossing
// of the level lines w = v[i] and z = v[j]; for i >= j it lies in u >= 0 and
// the other half of the square is filled in by the mirror u -> -u.
#include "lhdl/entropy/char_curve.hpp"

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace lhdl {

// Log-uniform nodes in [v_min, v_max] with both kinks at half steps.
// per_interval nodes fall between the kinks.
std::vector<double> kink_grid(double v_min, double kink_lo, double kink_hi, double v_max, int per_interval);

// Value v of the characteristic coordinates on the diagonal point (r, 0),
// i.e. |u| where sigma(.; r) meets rho = 0.
double diagonal_coordinate(const FluxFunctions& f, double r);

// First-derivative stencils (width 3 or 5) on a nonuniform 1-d grid.
// Stencils never straddle a break (a break k separates nodes k and k+1).
class Diff1 {
public:
    Diff1() = default;
    Diff1(const std::vector<double>& x, const std::vector<int>& breaks = {}, int width = 5);
    double apply(const double* f, std::ptrdiff_t stride, int k) const;
    int size() const { return int(off_.size()); }

private:
    int width_ = 5;
    std::vector<int> off_;                 // first index of each stencil
    std::vector<std::array<double, 5>> c_;
};

struct CharLattice {
    int N = 0;
    std::vector<double> v;
    std::vector<double> r_diag;
    // full N x N arrays, row = w index, col = z index
    Eigen::MatrixXd rho, u, lam, mu;
    Eigen::MatrixXd alpha, beta;           // S_wz + alpha S_w + beta S_z = 0
    Diff1 diff;                            // smooth stencils along either axis
    bool complete = true;                  // false if some crossing was not found

    Eigen::MatrixXd d_w(const Eigen::MatrixXd& F, const Diff1* d = nullptr) const;
    Eigen::MatrixXd d_z(const Eigen::MatrixXd& F, const Diff1* d = nullptr) const;
};

CharLattice build_char_lattice(const FluxFunctions& f, const std::vector<double>& v, const CurveOptions& opt = {});

} // namespace lhdl
