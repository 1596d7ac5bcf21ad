#pragma once
// Characteristic curves u -> sigma(u; r) of the Lax-entropy equation and the
// D1/D2/D3 partition they induce.
#include "lhdl/model/flux.hpp"

#include <vector>

namespace lhdl {

struct CurveOptions {
    double tol = 1e-12;        // local error per step, relative to the curve scale
    double h_rel_max = 0.05;   // step cap relative to sqrt(rho) + |u|
    int max_steps = 200000;
};

// Sampled curve with Hermite interpolation; u is increasing.
struct CharCurve {
    double r = 0;                   // value at u = 0 (NaN if the curve does not cross u = 0)
    std::vector<double> u, rho, slope;
    double u_hit = 0;               // u < 0 where rho reaches 0 (NaN if not reached)
    bool truncated = false;         // forward branch left the domain before u_max

    double u_min() const { return u.front(); }
    double u_max() const { return u.back(); }
    bool covers(double x) const { return x >= u.front() && x <= u.back(); }
    double operator()(double x) const;   // OutOfDomain outside [u_min, u_max]
};

// d rho / d u along the family, from the flux jet
double sigma_slope(const FluxFunctions& f, double rho, double u);

// sigma(.; r) on [max(-u_max, u_hit), u_max].  SingularStart for r = 0.
CharCurve characteristic_curve(const FluxFunctions& f, double r, double u_max, const CurveOptions& opt = {});

// Curve of the same family through the boundary point (0, -v), v > 0,
// integrated up to u_end.  These are the level lines z = v.
CharCurve boundary_curve(const FluxFunctions& f, double v, double u_end, const CurveOptions& opt = {});

struct Lemma1Fit {
    double C1 = 0, C2 = 0;   // r + C1 sqrt(r) u <= sigma <= r + C2 sqrt(r) u for u <= 0
    double r0 = 0;
    int samples = 0;
    bool ordered() const { return C2 > 0 && C2 < C1; }
};

// Smallest C1 / largest C2 consistent with the sandwich bounds at sampled (r, u).
Lemma1Fit fit_lemma1(const FluxFunctions& f, double r0, int n_r = 12, int n_u = 40);

enum class Region { D1, D2, D3 };
const char* region_name(Region r);

// Partition relative to a single curve: D1 iff rho < sigma(-|u|), D2 iff rho > sigma(|u|).
Region classify(const CharCurve& c, double rho, double u);

struct CharGeometry {
    FluxPtr flux;
    double r_lo = 0, r_hi = 0, r0 = 0;
    bool r0_adaptive = false;   // true when r0 came from the domain search (non-canonical)
    Lemma1Fit lemma1;
    CharCurve lo, hi;           // sigma(.; r_lo), sigma(.; r_hi)
    double sigma(double u, double r) const;
};

// r0 <= 0 selects the largest r <= r0_cap * r_hi whose curve reaches rho = 0
// without leaving the domain.
CharGeometry build_geometry(FluxPtr f, double r_lo, double r_hi, double r0 = 0, double r0_cap = 2.0);

// D1(r_lo), D2(r_hi), D3(r_lo, r_hi) otherwise
Region classify(const CharGeometry& g, double rho, double u);

} // namespace lhdl
