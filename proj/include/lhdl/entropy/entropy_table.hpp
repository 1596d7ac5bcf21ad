#pragma once
// Cutoff Lax entropy / flux pair (S, F) on the characteristic lattice.
#include "lhdl/entropy/char_curve.hpp"
#include "lhdl/entropy/char_lattice.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lhdl {

struct EntropyOptions {
    int grid = 64;             // lattice nodes between the two kinks
    double v_min = 1e-4;       // smallest characteristic coordinate kept
    double r0 = 0;             // <= 0: adaptive
    double r0_cap = 2.0;       // adaptive r0 is at most r0_cap * r_hi
    double w_max_factor = 1.5; // lattice extends to w_max_factor * w(r0)
    double overlap_tol = 1e-3; // relative to r_hi
    CurveOptions curve;
};

struct EntropyRow {
    double rho, u, S, F, S_rho, S_u, S_rr, S_ru, S_uu;
    Region label;
    int i, j;                   // lattice indices (w, z) of the u >= 0 image
    bool edge;                  // on the lattice boundary

    double J() const { return S_rho; }
    double I() const { return 1.0 - S_rho; }
};

struct EntropyTable {
    std::string flux_name;
    double gamma = 0, r_lo = 0, r_hi = 0, r0 = 0, n = 1, beta = 0;
    bool r0_adaptive = false;
    double shift = 0;            // (r_hi - r_lo)/log(r_hi/r_lo)
    int grid = 0;
    int i_lo = 0, j_hi = 0, i0 = 0;   // first w index above w_lo, first z index above z_hi, r0 column
    double overlap = 0;          // max |S_cauchy - S_closed| on the overlap
    double goursat_nodes = 0;
    std::vector<EntropyRow> rows;
    std::shared_ptr<const CharLattice> lattice;
    FluxPtr flux;

    // (F_rho, F_u) per row from lattice differences of F; stencils do not
    // cross the kink lines
    std::vector<std::array<double, 2>> grad_F_fd;
    void write_csv(const std::string& path) const;
};

// S on D1(r_lo) is 0, on D2(r_hi) it is rho - shift; the Cauchy problem with
// S(r,0) = s(r), S_u(r,0) = 0 fills the rest for w <= w(r0) and a Goursat
// problem the part beyond.  n > 1 builds (S^n, F^n) from the scaled flux.
EntropyTable build_entropy(FluxPtr flux, double r_lo, double r_hi, double n = 1, double beta = 0,
                           const EntropyOptions& opt = {});

struct EntropyChecks {
    double pde_residual = 0;     // max |Psi_u S_rr + (Phi_u - Psi_rho) S_ru - Phi_rho S_uu| over D3 interior
    double flux_rel_error = 0;   // sup-norm relative error of (F_rho, F_u) against the flux identities
    double d1_max = 0;           // max |S|, |S_rho| on D1
    double d2_max = 0;           // max |S - (rho - shift)|, |S_rho - 1| on D2
    double partition_error = 0;  // max |I + J - 1|
    int interior_nodes = 0;
};

EntropyChecks check_entropy(const EntropyTable& t);

} // namespace lhdl
