#include "lhdl/sim/state_io.hpp"

#include "lhdl/core/csv.hpp"
#include "lhdl/core/errors.hpp"

#include <cstdint>
#include <fstream>

namespace lhdl {

namespace {
template <class T>
void put(std::ofstream& o, T v) { o.write(reinterpret_cast<const char*>(&v), sizeof v); }
template <class T>
T get(std::ifstream& i)
{
    T v{};
    i.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!i) throw Error(ErrorKind::Io, "truncated state file");
    return v;
}
} // namespace

void dump_state(const LatticeState& st, int omega_size, const std::string& path)
{
    std::ofstream o(path, std::ios::binary);
    if (!o) throw Error(ErrorKind::Io, "cannot write " + path);
    put<uint64_t>(o, st.spins.size());
    put<uint32_t>(o, uint32_t(omega_size));
    put<uint64_t>(o, st.rng.seed());
    put<double>(o, st.time);
    put<uint64_t>(o, st.rng.counter());
    put<uint64_t>(o, st.rng.stream());
    o.write(reinterpret_cast<const char*>(st.spins.data()), st.spins.size());
}

LatticeState load_state(const SpinModel& m, const std::string& path)
{
    std::ifstream i(path, std::ios::binary);
    if (!i) throw Error(ErrorKind::Io, "cannot read " + path);
    LatticeState st;
    auto n = get<uint64_t>(i);
    auto k = get<uint32_t>(i);
    if ((int)k != m.K()) throw Error(ErrorKind::Io, "state file was written for a different model");
    auto seed = get<uint64_t>(i);
    st.time = get<double>(i);
    auto ctr = get<uint64_t>(i);
    auto stream = get<uint64_t>(i);
    st.spins.resize(n);
    i.read(reinterpret_cast<char*>(st.spins.data()), n);
    if (!i) throw Error(ErrorKind::Io, "truncated state file");
    for (auto s : st.spins)
        if (s >= k) throw Error(ErrorKind::Io, "spin index out of range");
    st.rng = CounterRng(seed, stream);
    st.rng.set_counter(ctr);
    st.refresh_totals(m);
    return st;
}

SnapshotWriter::SnapshotWriter(const std::string& path) : path_(path)
{
    CsvWriter w(path, {"t", "x", "rho_hat", "u_hat"});
    if (!w.ok()) throw Error(ErrorKind::Io, "cannot write " + path);
}

void SnapshotWriter::write(double t, const FieldPair& f)
{
    std::ofstream o(path_, std::ios::app);
    for (int k = 0; k < f.rho.m(); ++k)
        o << format_double(t) << ',' << format_double(f.rho.x(k)) << ',' << format_double(f.rho.values[k])
          << ',' << format_double(f.u.values[k]) << '\n';
}

} // namespace lhdl
