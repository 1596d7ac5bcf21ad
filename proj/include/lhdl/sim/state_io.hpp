#pragma once
#include "lhdl/sim/blocks.hpp"
#include "lhdl/sim/lattice.hpp"

#include <string>

namespace lhdl {

// header: n (u64), |Omega| (u32), seed (u64), time (f64), rng counter (u64),
// stream (u64); body: one byte per site
void dump_state(const LatticeState& st, int omega_size, const std::string& path);
LatticeState load_state(const SpinModel& m, const std::string& path);

class SnapshotWriter {
public:
    explicit SnapshotWriter(const std::string& path);   // t,x,rho_hat,u_hat
    void write(double t, const FieldPair& f);

private:
    std::string path_;
};

} // namespace lhdl
