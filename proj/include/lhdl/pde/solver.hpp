#pragma once
#include "lhdl/core/field.hpp"
#include "lhdl/model/flux.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lhdl {

enum class Scheme { MusclHancock, Central4 };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& s);

struct SolverOptions {
    Scheme scheme = Scheme::MusclHancock;
    double cfl = 0.4;
    double hyperviscosity = 0.01;   // central scheme only
    double blowup_factor = 50.0;
    std::vector<double> snapshot_times;
    bool parallel = true;
    bool throw_on_blowup = false;
};

struct SolverRun {
    int m = 0;
    Scheme scheme = Scheme::MusclHancock;
    int order = 2;
    double hyperviscosity = 0;
    double dt_last = 0;
    double t_end = 0, t_reached = 0;
    long steps = 0;
    double max_cfl = 0;
    std::vector<Field> rho, u;          // snapshots, last entry at t_reached
    std::optional<double> blowup_time;
    long clipped = 0;                   // rounding-level projections

    const Field& final_rho() const { return rho.back(); }
    const Field& final_u() const { return u.back(); }
};

// Cell averages (finite volume) or point values (central) of a profile.
Field initial_field(const std::function<double(double)>& f, int m, Scheme s, FieldKind kind);

// Method of lines on the periodic unit interval.  Throws DomainExit when a
// state leaves the flux domain by more than rounding; BlowupBeforeT when
// opts.throw_on_blowup and the gradient monitor fires (otherwise the run
// stops and records blowup_time).
SolverRun solve(const FluxFunctions& f, const Field& rho0, const Field& u0, double t_end,
                const SolverOptions& opts);

// Richardson-extrapolated central solution on m points, from grids m and 2m.
struct OracleResult {
    Field rho, u;
    double blowup_free_until = 0;
};
OracleResult smooth_solution_oracle(const FluxFunctions& f, const std::function<double(double)>& rho0,
                                    const std::function<double(double)>& u0, double t, int m,
                                    bool parallel = true);

} // namespace lhdl
