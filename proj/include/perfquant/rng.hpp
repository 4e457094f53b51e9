#pragma once

#include <array>
#include <cstdint>

namespace perfquant {

// Philox4x32-10 counter-based block function (Salmon, Moraes, Dror, Shaw;
// SC'11). This generator is pinned for every random draw in the library so
// results are a pure function of (seed, stream id, position), independent of
// platform and evaluation order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Source of random draws consumed by resampling and simulation. Virtual so
// tests can substitute scripted draw sequences.
class RandomStream {
public:
    virtual ~RandomStream() = default;

    virtual std::uint64_t next_u64() = 0;

    // Uniform index in [0, bound): fixed-point multiply (x * bound) >> 64 of
    // the next 64-bit word.
    virtual std::size_t next_index(std::size_t bound);

    // 53-bit uniform in [0, 1).
    double next_unit();

    // Box-Muller transform over two uniform draws; the paired variate is
    // cached, so each call consumes either zero or two uniforms.
    double next_normal(double mean, double stddev);

private:
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

// Deterministic stream of Philox output blocks: block b of substream
// `stream` under `seed` is philox4x32({b_lo, b_hi, stream_lo, stream_hi},
// {seed_lo, seed_hi}); each block yields two 64-bit words, consumed in
// order.
class PhiloxStream final : public RandomStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() override;

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int available_ = 0;
};

// Substream label for a (cell, iteration, lane) triple, packed as
// cell:24 | iteration:32 | lane:8. Lane conventions used by the library:
// 0 = single system or old system, 1 = new system, 2 = nested bootstrap
// seed derivation, 7 = per-cell seed derivation in the CLI grid runner.
std::uint64_t substream_id(std::uint64_t cell, std::uint64_t iteration, unsigned lane);

}  // namespace perfquant
