#include "lhdl/core/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace lhdl {

double l1_distance(const Field& a, const Field& b)
{
    if (a.m() != b.m()) throw std::invalid_argument("l1_distance: grid mismatch");
    double s = 0;
    for (int k = 0; k < a.m(); ++k) s += std::abs(a.values[k] - b.values[k]);
    return s / a.m();
}

double linf_distance(const Field& a, const Field& b)
{
    if (a.m() != b.m()) throw std::invalid_argument("linf_distance: grid mismatch");
    double s = 0;
    for (int k = 0; k < a.m(); ++k) s = std::max(s, std::abs(a.values[k] - b.values[k]));
    return s;
}

} // namespace lhdl
