#pragma once
#include <cmath>
#include <string>
#include <vector>

namespace lhdl {

enum class FieldKind { Rho, U, Generic };

// Periodic grid function on the unit torus; values[k] lives at
// x = (k + offset) / m.
struct Field {
    std::vector<double> values;
    double time = 0.0;
    FieldKind kind = FieldKind::Generic;
    double offset = 0.0;

    int m() const { return (int)values.size(); }
    double x(int k) const { return (k + offset) / values.size(); }
    double operator[](int k) const
    {
        int mm = m();
        return values[((k % mm) + mm) % mm];
    }
    double mean() const
    {
        double s = 0;
        for (double v : values) s += v;
        return s / values.size();
    }
};

inline const char* field_kind_name(FieldKind k)
{
    switch (k) {
    case FieldKind::Rho: return "rho";
    case FieldKind::U: return "u";
    default: return "generic";
    }
}

// L1 and Linf distances of two fields on the same grid
double l1_distance(const Field& a, const Field& b);
double linf_distance(const Field& a, const Field& b);

} // namespace lhdl
