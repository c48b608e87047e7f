#include "fibscope/numeric/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fibscope {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(seed);
    for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    return s;
}

double Stream::normal() {
    if (cached_) {
        cached_ = false;
        return cache_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    cache_ = r * std::sin(t);
    cached_ = true;
    return r * std::cos(t);
}

unsigned worker_count() {
    unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FIBSCOPE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        // an explicit setting wins, also above the core count
        if (cap >= 1) hw = static_cast<unsigned>(std::min(cap, 256L));
    }
    return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace fibscope
