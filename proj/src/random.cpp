#include "gg1/random.hpp"

namespace gg1 {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::substream(std::uint64_t master_seed, std::uint64_t id) {
    return RandomStream(splitmix64(splitmix64(master_seed) ^ splitmix64(id * 0x632be59bd9b4e019ULL)));
}

RandomStream RandomStream::substream(std::uint64_t master_seed, StreamId id) {
    return substream(master_seed, static_cast<std::uint64_t>(id));
}

}  // namespace gg1
