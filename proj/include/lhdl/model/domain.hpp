#pragma once
#include <array>
#include <limits>
#include <string>
#include <vector>

namespace lhdl {

// Convex region in the (rho,u) plane written as a list of half-planes
// a*rho + b*u <= c with (a,b) a unit normal.
struct Domain {
    struct HalfPlane { double a, b, c; };
    std::vector<HalfPlane> planes;
    std::vector<std::array<double, 2>> vertices;   // empty for unbounded regions

    double margin(double rho, double u) const;      // signed distance, >0 inside
    bool interior(double rho, double u, double tol = 0.0) const { return margin(rho, u) > tol; }
    bool contains(double rho, double u, double tol = 1e-12) const { return margin(rho, u) >= -tol; }
    // largest t with (rho,u) +- t*(er,eu) inside
    double reach(double rho, double u, double er, double eu) const;
    // nearest point inside (used for rounding-level clipping)
    std::array<double, 2> project(double rho, double u) const;
    Domain scaled(double s_rho, double s_u) const;
    std::string describe() const;

    static Domain hull(std::vector<std::array<double, 2>> pts);
    static Domain rho_nonnegative();
};

} // namespace lhdl
