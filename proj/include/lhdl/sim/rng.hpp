#pragma once
// Philox4x32-10 counter-based generator.  A draw is a pure function of
// (key, counter), so trajectories can be replayed from any event index.
#include <array>
#include <cmath>
#include <cstdint>

namespace lhdl {

struct Philox4x32 {
    using Ctr = std::array<uint32_t, 4>;
    using Key = std::array<uint32_t, 2>;

    static Ctr block(Ctr c, Key k)
    {
        constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = uint64_t(M0) * c[0];
            uint64_t p1 = uint64_t(M1) * c[2];
            c = {uint32_t(p1 >> 32) ^ c[1] ^ k[0], uint32_t(p1),
                 uint32_t(p0 >> 32) ^ c[3] ^ k[1], uint32_t(p0)};
            k[0] += W0;
            k[1] += W1;
        }
        return c;
    }
};

// Stream of 4-word blocks addressed by (seed, stream, index).
class CounterRng {
public:
    CounterRng(uint64_t seed = 0, uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    Philox4x32::Ctr at(uint64_t index) const
    {
        return Philox4x32::block({uint32_t(index), uint32_t(index >> 32), uint32_t(stream_),
                                  uint32_t(stream_ >> 32)},
                                 {uint32_t(seed_), uint32_t(seed_ >> 32)});
    }
    Philox4x32::Ctr next() { return at(counter_++); }

    // open interval (0,1) on a 2^-52 lattice; 53 bits would let the
    // midpoint offset round up to 1
    static double u53(uint32_t hi, uint32_t lo)
    {
        uint64_t x = (uint64_t(hi) << 20) | (lo >> 12);
        return (double(x) + 0.5) * 0x1.0p-52;
    }
    static double u32(uint32_t x) { return (double(x) + 0.5) * 0x1.0p-32; }
    // uniform integer in [0, n) for n < 2^32
    static uint32_t below(uint32_t x, uint32_t n) { return uint32_t((uint64_t(x) * n) >> 32); }

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }
    uint64_t counter() const { return counter_; }
    void set_counter(uint64_t c) { counter_ = c; }

private:
    uint64_t seed_, stream_;
    uint64_t counter_ = 0;
};

} // namespace lhdl
