#ifndef GG1_RANDOM_HPP
#define GG1_RANDOM_HPP

#include <cstdint>
#include <random>

namespace gg1 {

/// Identifies an independent sub-stream derived from a master seed.
enum class StreamId : std::uint64_t {
    arrivals = 1,
    services = 2,
    discipline = 3,
    inspection = 4,
    control = 5,
};

/// Seeded pseudo-random source owned by exactly one replication.
///
/// Sub-streams are derived from a master seed with a splitmix64 mix of the
/// stream id, so arrivals and services never share draws and changing the
/// service discipline leaves the arrival sequence untouched.
class RandomStream {
public:
    using engine_type = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    static RandomStream substream(std::uint64_t master_seed, StreamId id);
    static RandomStream substream(std::uint64_t master_seed, std::uint64_t id);

    std::uint64_t seed() const { return seed_; }
    engine_type& engine() { return engine_; }

    /// Uniform draw on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform index on {0, ..., n - 1}; n must be positive.
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }

private:
    std::uint64_t seed_;
    engine_type engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gg1

#endif  // GG1_RANDOM_HPP
