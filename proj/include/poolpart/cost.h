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
#ifndef POOLPART_COST_H
#define POOLPART_COST_H

#include "poolpart/model.h"

#include <cstddef>
#include <optional>
#include <vector>

namespace poolpart
{

/**
 * @brief Expected tests for one group, by group size.
 *
 * Sizes run from 1 to max_size(). An entry may be +infinity to forbid a size.
 */
class CostVector
{
public:
    /// costs[0] is the cost of a group of size 1.
    explicit CostVector(std::vector<double> costs);

    std::size_t max_size() const
    {
        return m_costs.size();
    }

    /// Cost of a group of the given size; throws ValidationError outside 1..max_size().
    double operator()(std::size_t size) const;

    const std::vector<double>& values() const
    {
        return m_costs;
    }

private:
    std::vector<double> m_costs;
};

/// Nonempty, pairwise disjoint, nonempty groups of specimen indices.
class GroupFamily
{
public:
    explicit GroupFamily(std::vector<std::vector<std::size_t>> groups);

    const std::vector<std::vector<std::size_t>>& groups() const
    {
        return m_groups;
    }

    std::size_t size() const
    {
        return m_groups.size();
    }

    /// Total number of specimens across all groups.
    std::size_t specimen_count() const;

    /// Largest index in any group plus one.
    std::size_t index_bound() const;

    /// True if the groups partition {0, ..., n-1}.
    bool is_pooling_of(std::size_t n) const;

private:
    std::vector<std::vector<std::size_t>> m_groups;
};

/// Dorfman expected tests for a group of size h: 1 if h = 1, else 1 + h (1 - q[h]).
double expected_tests_group(const QCurve& curve, std::size_t h);

/// Dorfman cost vector for sizes 1..max_size (default n).
CostVector cost_vector(const QCurve& curve, std::optional<std::size_t> max_size = std::nullopt);

/// Sum of c[|H|] over the groups.
double expected_tests_partition(const CostVector& costs, const GroupFamily& family);

/// Specimens per expected test, n / expected_tests.
double efficiency(std::size_t n, double expected_tests);

} // namespace poolpart

#endif // POOLPART_COST_H
