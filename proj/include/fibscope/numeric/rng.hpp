#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace fibscope {

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the substream addressed by `path` below `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Random stream with platform-independent transforms (the standard
/// distributions are implementation-defined, which would break bit-identical
/// reproduction across toolchains).
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}
    Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) : engine_(substream_seed(seed, path)) {}

    std::uint64_t bits() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal by Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    bool cached_ = false;
    double cache_ = 0.0;
};

/// Worker count: FIBSCOPE_THREADS when set (1..256), else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index must write only its own
/// output slot; results are then independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fibscope
