#pragma once

#include <cstdint>

namespace rydgate {

// Counter-based generator: draw i of stream `seed` is a pure function of
// (seed, i), so parallel consumers can address draws directly and the
// output does not depend on the order or partition of the work.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform double in [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t index)
{
    return static_cast<double>(counter_draw(seed, index) >> 11) * 0x1.0p-53;
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t start = 0)
        : m_seed(seed), m_counter(start) {}

    std::uint64_t next() { return counter_draw(m_seed, m_counter++); }
    double uniform() { return counter_uniform(m_seed, m_counter++); }
    std::uint64_t counter() const { return m_counter; }

private:
    std::uint64_t m_seed;
    std::uint64_t m_counter;
};

} // namespace rydgate
