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
#include "poolpart/cost.h"
#include "poolpart/error.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace poolpart
{

CostVector::CostVector(std::vector<double> costs)
    : m_costs(std::move(costs))
{
    if (m_costs.empty()) {
        throw ValidationError("a cost vector needs at least the size-1 cost");
    }
    for (std::size_t i = 0; i < m_costs.size(); ++i) {
        if (std::isnan(m_costs[i]) || m_costs[i] == -INFINITY) {
            throw ValidationError(fmt::format("cost of size {} is {}", i + 1, m_costs[i]));
        }
    }
}

double CostVector::operator()(std::size_t size) const
{
    if (size == 0 || size > m_costs.size()) {
        throw ValidationError(fmt::format("group size {} outside cost range 1..{}", size, m_costs.size()));
    }
    return m_costs[size - 1];
}

GroupFamily::GroupFamily(std::vector<std::vector<std::size_t>> groups)
    : m_groups(std::move(groups))
{
    if (m_groups.empty()) {
        throw ValidationError("a group family needs at least one group");
    }
    std::unordered_set<std::size_t> seen;
    for (std::size_t g = 0; g < m_groups.size(); ++g) {
        if (m_groups[g].empty()) {
            throw ValidationError(fmt::format("group {} is empty", g));
        }
        for (std::size_t i : m_groups[g]) {
            if (!seen.insert(i).second) {
                throw ValidationError(fmt::format("specimen {} appears in more than one group", i));
            }
        }
    }
}

std::size_t GroupFamily::specimen_count() const
{
    std::size_t total = 0;
    for (const auto& g : m_groups) {
        total += g.size();
    }
    return total;
}

std::size_t GroupFamily::index_bound() const
{
    std::size_t bound = 0;
    for (const auto& g : m_groups) {
        bound = std::max(bound, *std::max_element(g.begin(), g.end()) + 1);
    }
    return bound;
}

bool GroupFamily::is_pooling_of(std::size_t n) const
{
    return specimen_count() == n && index_bound() == n;
}

double expected_tests_group(const QCurve& curve, std::size_t h)
{
    if (h == 0 || h > curve.n()) {
        throw ValidationError(fmt::format("group size {} outside 1..{}", h, curve.n()));
    }
    if (h == 1) {
        return 1.0;
    }
    return 1.0 + static_cast<double>(h) * (1.0 - curve[h]);
}

CostVector cost_vector(const QCurve& curve, std::optional<std::size_t> max_size)
{
    const std::size_t limit = max_size.value_or(curve.n());
    if (limit == 0 || limit > curve.n()) {
        throw ValidationError(fmt::format("maximum pool size {} outside 1..{}", limit, curve.n()));
    }
    std::vector<double> costs(limit);
    for (std::size_t h = 1; h <= limit; ++h) {
        costs[h - 1] = expected_tests_group(curve, h);
    }
    return CostVector(std::move(costs));
}

double expected_tests_partition(const CostVector& costs, const GroupFamily& family)
{
    double total = 0.0;
    for (const auto& group : family.groups()) {
        total += costs(group.size());
    }
    return total;
}

double efficiency(std::size_t n, double expected_tests)
{
    if (!(expected_tests > 0.0)) {
        throw ValidationError(fmt::format("efficiency needs a positive test count, got {}", expected_tests));
    }
    return static_cast<double>(n) / expected_tests;
}

} // namespace poolpart
