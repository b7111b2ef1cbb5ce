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
#include "poolpart/optimize.h"
#include "poolpart/error.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace poolpart
{

MultiplicityFunction::MultiplicityFunction(std::map<std::size_t, std::size_t> counts)
{
    for (auto [part, multiplicity] : counts) {
        add(part, multiplicity);
    }
}

MultiplicityFunction MultiplicityFunction::of(const GroupFamily& family)
{
    MultiplicityFunction mu;
    for (const auto& group : family.groups()) {
        mu.add(group.size());
    }
    return mu;
}

std::size_t MultiplicityFunction::count(std::size_t part) const
{
    auto it = m_counts.find(part);
    return it == m_counts.end() ? 0 : it->second;
}

std::size_t MultiplicityFunction::parts() const
{
    std::size_t total = 0;
    for (auto [part, multiplicity] : m_counts) {
        total += multiplicity;
    }
    return total;
}

std::size_t MultiplicityFunction::largest_part() const
{
    return m_counts.empty() ? 0 : m_counts.rbegin()->first;
}

void MultiplicityFunction::add(std::size_t part, std::size_t multiplicity)
{
    if (part == 0) {
        throw ValidationError("part sizes must be at least 1");
    }
    if (multiplicity == 0) {
        return;
    }
    m_counts[part] += multiplicity;
    m_target += part * multiplicity;
}

std::string MultiplicityFunction::to_string() const
{
    std::string out;
    for (auto it = m_counts.rbegin(); it != m_counts.rend(); ++it) {
        if (!out.empty()) {
            out += '+';
        }
        out += fmt::format("{}x{}", it->first, it->second);
    }
    return out.empty() ? "empty" : out;
}

double partition_cost(const CostVector& costs, const MultiplicityFunction& mu)
{
    double total = 0.0;
    for (auto [part, multiplicity] : mu.counts()) {
        total += costs(part) * static_cast<double>(multiplicity);
    }
    return total;
}

DpSolution dp_solve(const CostVector& costs, std::size_t target)
{
    if (target == 0) {
        throw ValidationError("cannot partition zero specimens");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    ValueTable table{std::vector<double>(target + 1, inf), std::vector<std::size_t>(target + 1, 0)};
    table.values[0] = 0.0;

    std::vector<double> candidates;
    for (std::size_t k = 1; k <= target; ++k) {
        const std::size_t limit = std::min(k, costs.max_size());
        candidates.assign(limit + 1, inf);
        double best = inf;
        for (std::size_t i = 1; i <= limit; ++i) {
            candidates[i] = table.values[k - i] + costs(i);
            best = std::min(best, candidates[i]);
        }
        if (best == inf) {
            continue;
        }
        for (std::size_t i = limit; i >= 1; --i) {
            double slack = tie_tolerance * std::max(std::fabs(best), std::fabs(candidates[i]));
            if (candidates[i] - best <= slack) {
                table.values[k] = candidates[i];
                table.choices[k] = i;
                break;
            }
        }
    }

    if (table.values[target] == inf) {
        throw InfeasibleError(fmt::format("no partition of {} has finite cost", target));
    }
    MultiplicityFunction mu;
    for (std::size_t k = target; k > 0; k -= table.choices[k]) {
        mu.add(table.choices[k]);
    }
    return {std::move(mu), std::move(table)};
}

MultiplicityFunction brute_force_solve(const CostVector& costs, std::size_t target)
{
    if (target == 0) {
        throw ValidationError("cannot partition zero specimens");
    }
    if (target > 30) {
        throw ValidationError(fmt::format("exhaustive search is limited to targets <= 30, got {}", target));
    }
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best;
    std::vector<std::size_t> parts;

    // parts are generated in nonincreasing order, each partition exactly once
    std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t remaining, std::size_t max_part) {
        if (remaining == 0) {
            double cost = 0.0;
            for (std::size_t part : parts) {
                cost += costs(part);
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = parts;
            }
            return;
        }
        for (std::size_t part = std::min(remaining, max_part); part >= 1; --part) {
            parts.push_back(part);
            visit(remaining - part, part);
            parts.pop_back();
        }
    };
    visit(target, std::min(target, costs.max_size()));

    if (best.empty()) {
        throw InfeasibleError(fmt::format("no partition of {} has finite cost", target));
    }
    MultiplicityFunction mu;
    for (std::size_t part : best) {
        mu.add(part);
    }
    return mu;
}

GroupFamily pooling_from_multiplicity(const MultiplicityFunction& mu, std::span<const std::size_t> population)
{
    if (mu.target() != population.size()) {
        throw ValidationError(fmt::format("multiplicity {} covers {} specimens but the population has {}",
                                          mu.to_string(), mu.target(), population.size()));
    }
    std::vector<std::vector<std::size_t>> groups;
    groups.reserve(mu.parts());
    auto next = population.begin();
    for (auto it = mu.counts().rbegin(); it != mu.counts().rend(); ++it) {
        for (std::size_t j = 0; j < it->second; ++j) {
            groups.emplace_back(next, next + static_cast<std::ptrdiff_t>(it->first));
            next += static_cast<std::ptrdiff_t>(it->first);
        }
    }
    return GroupFamily(std::move(groups));
}

GroupFamily pooling_from_multiplicity(const MultiplicityFunction& mu)
{
    std::vector<std::size_t> population(mu.target());
    std::iota(population.begin(), population.end(), std::size_t{0});
    return pooling_from_multiplicity(mu, population);
}

std::size_t dorfman_infinite_size(double prevalence, std::size_t s_max)
{
    if (!(prevalence > 0.0 && prevalence < 1.0)) {
        throw ValidationError(fmt::format("Dorfman's pool size needs a prevalence in (0, 1), got {}", prevalence));
    }
    std::size_t best = 1;
    double best_cost = 1.0;
    for (std::size_t s = 2; s <= s_max; ++s) {
        double per_specimen =
            1.0 / static_cast<double>(s) + 1.0 - std::pow(1.0 - prevalence, static_cast<double>(s));
        if (per_specimen < best_cost) {
            best_cost = per_specimen;
            best = s;
        }
    }
    return best;
}

MultiplicityFunction fixed_size_multiplicity(std::size_t size, std::size_t population)
{
    if (size == 0 || population == 0) {
        throw ValidationError("pool size and population must be positive");
    }
    size = std::min(size, population);
    MultiplicityFunction mu;
    mu.add(size, population / size);
    if (population % size != 0) {
        mu.add(population % size);
    }
    return mu;
}

} // namespace poolpart
