#ifndef LORENTZ_RANDOM_HPP
#define LORENTZ_RANDOM_HPP

#include <cstdint>
#include <random>

namespace lorentz {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Engine for stream `stream` under master seed `seed`.
///
/// Every randomized routine derives one engine per independent unit of work
/// (a Monte Carlo shard, an optimizer start, a trial block) from the pair
/// (seed, stream). Streams never share state, so results do not depend on the
/// order or the thread in which the units run.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream)
{
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& eng) noexcept
{
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_symmetric(std::mt19937_64& eng) noexcept
{
    return 2.0 * uniform01(eng) - 1.0;
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound)
{
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(eng);
}

} // namespace lorentz

#endif
