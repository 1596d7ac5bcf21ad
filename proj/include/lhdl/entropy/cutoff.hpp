#pragma once

namespace lhdl {

struct CutoffValue {
    double s = 0, ds = 0, d2s = 0;   // d2s is one-sided at the knots (right limit)
};

// s(r) = 0 below r_lo, r - (r_hi - r_lo)/log(r_hi/r_lo) above r_hi,
// and (r log(r/r_lo) - r + r_lo)/log(r_hi/r_lo) in between.  C^1 at both knots.
CutoffValue cutoff_profile(double r_lo, double r_hi, double r);

// (r_hi - r_lo)/log(r_hi/r_lo)
double cutoff_shift(double r_lo, double r_hi);

} // namespace lhdl
