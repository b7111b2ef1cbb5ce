/*
* Copyright (C) 2026 The poolpart authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef POOLPART_RANDOM_H
#define POOLPART_RANDOM_H

#include <cstdint>
#include <limits>

namespace poolpart
{

using Seed = std::uint64_t;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the substream identified by index under master. Pure function of its arguments.
constexpr Seed substream_seed(Seed master, std::uint64_t index)
{
    return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

template <class... Indices>
constexpr Seed substream_seed(Seed master, std::uint64_t index, std::uint64_t next, Indices... rest)
{
    return substream_seed(substream_seed(master, index), next, rest...);
}

/**
 * Counter-based SplitMix64 generator. The state is a plain counter, so constructing one per
 * trial costs nothing and streams derived with substream_seed do not depend on scheduling.
 */
class Engine
{
public:
    using result_type = std::uint64_t;

    explicit constexpr Engine(Seed seed)
        : m_state(seed)
    {
    }

    static constexpr result_type min()
    {
        return 0;
    }

    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()()
    {
        m_state += 0x9e3779b97f4a7c15ULL;
        return mix64(m_state);
    }

private:
    std::uint64_t m_state;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

} // namespace poolpart

#endif // POOLPART_RANDOM_H
