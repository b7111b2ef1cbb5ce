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
#ifndef POOLPART_OPTIMIZE_H
#define POOLPART_OPTIMIZE_H

#include "poolpart/cost.h"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace poolpart
{

/**
 * @brief Integer partition stored as part size -> multiplicity.
 *
 * Zero multiplicities are dropped so that equal partitions compare equal.
 */
class MultiplicityFunction
{
public:
    MultiplicityFunction() = default;
    explicit MultiplicityFunction(std::map<std::size_t, std::size_t> counts);

    /// Multiplicity function of the group sizes of a family.
    static MultiplicityFunction of(const GroupFamily& family);

    /// The integer being partitioned, sum of size * multiplicity.
    std::size_t target() const
    {
        return m_target;
    }

    const std::map<std::size_t, std::size_t>& counts() const
    {
        return m_counts;
    }

    std::size_t count(std::size_t part) const;

    /// Number of parts.
    std::size_t parts() const;

    std::size_t largest_part() const;

    /// Add one part of the given size.
    void add(std::size_t part, std::size_t multiplicity = 1);

    /// e.g. "8x10" or "10x7+3x1"
    std::string to_string() const;

    bool operator==(const MultiplicityFunction&) const = default;

private:
    std::map<std::size_t, std::size_t> m_counts;
    std::size_t m_target = 0;
};

/// sum_i c(i) mu(i), accumulated from the smallest part up.
double partition_cost(const CostVector& costs, const MultiplicityFunction& mu);

/// values[k] is the optimal cost of partitioning k, choices[k] the first part used for it.
struct ValueTable {
    std::vector<double> values;
    std::vector<std::size_t> choices;
};

struct DpSolution {
    MultiplicityFunction multiplicity;
    ValueTable table;
};

/// Relative tolerance under which two candidate costs count as tied.
inline constexpr double tie_tolerance = 1e-12;

/**
 * @brief Minimize sum_i c(i) mu(i) over partitions mu of target.
 *
 * Uses M*(k) = min_i { M*(k - i) + c(i) } with parts limited to costs.max_size(). Among tied parts
 * the largest one wins. O(target * max_size).
 *
 * Throws InfeasibleError if every partition has infinite cost.
 */
DpSolution dp_solve(const CostVector& costs, std::size_t target);

/// Exhaustive search over all partitions of target; target <= 30.
MultiplicityFunction brute_force_solve(const CostVector& costs, std::size_t target);

/**
 * Assign population members to groups in order, larger parts first. Throws ValidationError if the
 * parts do not sum to the population size.
 */
GroupFamily pooling_from_multiplicity(const MultiplicityFunction& mu, std::span<const std::size_t> population);

/// Pooling of {0, ..., target - 1}.
GroupFamily pooling_from_multiplicity(const MultiplicityFunction& mu);

/**
 * Classical infinite-population Dorfman pool size: the s in 2..s_max minimizing the per-specimen
 * cost 1/s + 1 - (1-p)^s, or 1 when no such s beats individual testing.
 */
std::size_t dorfman_infinite_size(double prevalence, std::size_t s_max);

/// floor(population / size) pools of the given size plus one remainder pool if needed.
MultiplicityFunction fixed_size_multiplicity(std::size_t size, std::size_t population);

} // namespace poolpart

#endif // POOLPART_OPTIMIZE_H
