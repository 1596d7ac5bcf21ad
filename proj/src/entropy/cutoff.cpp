#include "lhdl/entropy/cutoff.hpp"
#include "lhdl/core/errors.hpp"

#include <cmath>

namespace lhdl {

double cutoff_shift(double r_lo, double r_hi) { return (r_hi - r_lo) / std::log(r_hi / r_lo); }

CutoffValue cutoff_profile(double r_lo, double r_hi, double r)
{
    if (!(r_lo > 0 && r_hi > r_lo)) throw Error(ErrorKind::Config, "cutoff needs 0 < r_lo < r_hi");
    const double L = std::log(r_hi / r_lo);
    CutoffValue v;
    if (r < r_lo) return v;
    if (r < r_hi) {
        v.s = (r * std::log(r / r_lo) - r + r_lo) / L;
        v.ds = std::log(r / r_lo) / L;
        v.d2s = 1.0 / (r * L);
        return v;
    }
    v.s = r - (r_hi - r_lo) / L;
    v.ds = 1.0;
    return v;
}

} // namespace lhdl
