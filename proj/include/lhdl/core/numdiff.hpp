#pragma once
// Centered differences with one Richardson step (h and h/2).
#include <cmath>

namespace lhdl::numdiff {

template <class F>
double d1(F&& f, double x, double h)
{
    auto c = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * c(0.5 * h) - c(h)) / 3.0;
}

template <class F>
double d2(F&& f, double x, double h)
{
    double f0 = f(x);
    auto c = [&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); };
    return (4.0 * c(0.5 * h) - c(h)) / 3.0;
}

// mixed partial of f(x,y)
template <class F>
double d11(F&& f, double x, double y, double hx, double hy)
{
    auto c = [&](double sx, double sy) {
        return (f(x + sx, y + sy) - f(x + sx, y - sy) - f(x - sx, y + sy) + f(x - sx, y - sy)) /
               (4.0 * sx * sy);
    };
    return (4.0 * c(0.5 * hx, 0.5 * hy) - c(hx, hy)) / 3.0;
}

// Romberg combination of three samples taken at x, x/4, x/16 of an
// expansion g(x) = g0 + a x + b x^2.
inline double romberg3(double g1, double g2, double g3)
{
    double r1 = (4.0 * g2 - g1) / 3.0;
    double r2 = (4.0 * g3 - g2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

} // namespace lhdl::numdiff
