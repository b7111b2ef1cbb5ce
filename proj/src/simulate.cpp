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
#include "poolpart/simulate.h"
#include "poolpart/error.h"
#include "parallel.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace poolpart
{

namespace
{

void check_range(const GroupFamily& family, const OutcomeVector& x)
{
    if (family.index_bound() > x.size()) {
        throw ValidationError(fmt::format("group member {} outside an outcome of {} specimens",
                                          family.index_bound() - 1, x.size()));
    }
}

std::size_t group_tests(std::size_t size, bool positive)
{
    return size >= 2 && positive ? 1 + size : 1;
}

/// Pooling of one batch, flattened for the randomized fast path.
struct BatchLayout {
    std::vector<std::size_t> group_of; ///< position -> group
    std::vector<std::size_t> group_size;
};

BatchLayout layout(const GroupFamily& pooling)
{
    BatchLayout out;
    out.group_of.resize(pooling.specimen_count());
    for (std::size_t g = 0; g < pooling.size(); ++g) {
        for (std::size_t i : pooling.groups()[g]) {
            out.group_of[i] = g;
        }
        out.group_size.push_back(pooling.groups()[g].size());
    }
    return out;
}

/**
 * Tests used when a batch with `positives` positives is uniformly permuted before pooling. Only the
 * positions the positives land on matter, and under a uniform permutation those form a uniform
 * random subset, drawn here with Floyd's algorithm.
 */
std::size_t randomized_tests(const BatchLayout& layout, std::size_t positives, Engine& engine,
                             std::vector<std::size_t>& chosen, std::vector<std::uint8_t>& hit)
{
    const std::size_t n = layout.group_of.size();
    const std::size_t groups = layout.group_size.size();
    if (positives == 0) {
        return groups;
    }
    chosen.clear();
    for (std::size_t j = n - positives; j < n; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j);
        std::size_t t = pick(engine);
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) {
            t = j;
        }
        chosen.push_back(t);
    }
    std::size_t tests = groups;
    for (std::size_t position : chosen) {
        std::size_t g = layout.group_of[position];
        if (!hit[g]) {
            hit[g] = 1;
            if (layout.group_size[g] >= 2) {
                tests += layout.group_size[g];
            }
        }
    }
    for (std::size_t position : chosen) {
        hit[layout.group_of[position]] = 0;
    }
    return tests;
}

} // namespace

TestTally run_dorfman(const GroupFamily& family, const OutcomeVector& x)
{
    check_range(family, x);
    TestTally tally;
    tally.per_group.reserve(family.size());
    for (const auto& group : family.groups()) {
        bool positive = std::any_of(group.begin(), group.end(), [&](std::size_t i) {
            return x[i] == 1;
        });
        std::size_t tests = group_tests(group.size(), positive);
        tally.per_group.push_back({group.size(), positive, tests});
        tally.total_tests += tests;
    }
    return tally;
}

std::size_t count_tests(const GroupFamily& family, const OutcomeVector& x)
{
    check_range(family, x);
    std::size_t total = 0;
    for (const auto& group : family.groups()) {
        bool positive = std::any_of(group.begin(), group.end(), [&](std::size_t i) {
            return x[i] == 1;
        });
        total += group_tests(group.size(), positive);
    }
    return total;
}

TrialSummary summarize(std::span<const TrialOutcome> trials)
{
    if (trials.empty()) {
        throw ValidationError("cannot summarize zero trials");
    }
    const double count = static_cast<double>(trials.size());
    TrialSummary summary;
    summary.trials = trials.size();
    for (const auto& t : trials) {
        summary.mean_tests += t.tests;
        summary.mean_efficiency += t.efficiency;
    }
    summary.mean_tests /= count;
    summary.mean_efficiency /= count;
    if (trials.size() > 1) {
        double ss_tests = 0.0;
        double ss_eff = 0.0;
        for (const auto& t : trials) {
            ss_tests += (t.tests - summary.mean_tests) * (t.tests - summary.mean_tests);
            ss_eff += (t.efficiency - summary.mean_efficiency) * (t.efficiency - summary.mean_efficiency);
        }
        summary.std_error = std::sqrt(ss_tests / (count - 1.0)) / std::sqrt(count);
        summary.efficiency_std_error = std::sqrt(ss_eff / (count - 1.0)) / std::sqrt(count);
    }
    return summary;
}

std::vector<TrialOutcome> monte_carlo_trials(const SymmetricModel& model, const GroupFamily& family,
                                             std::size_t trials, Seed seed)
{
    if (trials == 0) {
        throw ValidationError("Monte Carlo needs at least one trial");
    }
    if (family.index_bound() > model.n()) {
        throw ValidationError(fmt::format("pooling reaches specimen {} but the model has {} specimens",
                                          family.index_bound() - 1, model.n()));
    }
    const auto specimens = static_cast<double>(family.specimen_count());
    std::vector<TrialOutcome> out(trials);
    detail::parallel_for(trials, [&](std::size_t t) {
        Engine engine(substream_seed(seed, t));
        auto x = sample_outcome(model, engine);
        auto tests = static_cast<double>(count_tests(family, x));
        out[t] = {tests, specimens / tests};
    });
    return out;
}

TrialSummary monte_carlo(const SymmetricModel& model, const GroupFamily& family, std::size_t trials, Seed seed)
{
    return summarize(monte_carlo_trials(model, family, trials, seed));
}

std::vector<TrialOutcome> empirical_trials(std::span<const Batch> batches, const MultiplicityFunction& mu,
                                           const EmpiricalOptions& options)
{
    if (batches.empty()) {
        throw ValidationError("no batches to evaluate");
    }
    for (std::size_t b = 0; b < batches.size(); ++b) {
        if (batches[b].size() != mu.target()) {
            throw ValidationError(fmt::format("batch {} has {} specimens but the pooling {} covers {}", batches[b].index,
                                              batches[b].size(), mu.to_string(), mu.target()));
        }
    }
    if (options.randomize && options.trials == 0) {
        throw ValidationError("randomized evaluation needs at least one trial");
    }

    const GroupFamily pooling = pooling_from_multiplicity(mu);
    const BatchLayout flat = layout(pooling);
    const auto batch_size = static_cast<double>(mu.target());
    const auto batch_count = static_cast<double>(batches.size());

    std::vector<std::size_t> positives(batches.size());
    for (std::size_t b = 0; b < batches.size(); ++b) {
        positives[b] = batches[b].statuses.nnz();
    }

    auto aggregate = [&](std::size_t total_tests, double efficiency_sum) {
        double mean_tests = static_cast<double>(total_tests) / batch_count;
        double eff = options.aggregation == Aggregation::pooled ? batch_size / mean_tests
                                                                : efficiency_sum / batch_count;
        return TrialOutcome{mean_tests, eff};
    };

    if (!options.randomize) {
        std::size_t total = 0;
        double efficiency_sum = 0.0;
        for (const auto& batch : batches) {
            std::size_t tests = count_tests(pooling, batch.statuses);
            total += tests;
            efficiency_sum += batch_size / static_cast<double>(tests);
        }
        return {aggregate(total, efficiency_sum)};
    }

    std::vector<TrialOutcome> out(options.trials);
    detail::parallel_for(options.trials, [&](std::size_t t) {
        std::vector<std::size_t> chosen;
        std::vector<std::uint8_t> hit(flat.group_size.size(), 0);
        std::size_t total = 0;
        double efficiency_sum = 0.0;
        for (std::size_t b = 0; b < batches.size(); ++b) {
            Engine engine(substream_seed(options.seed, b, t));
            std::size_t tests = randomized_tests(flat, positives[b], engine, chosen, hit);
            total += tests;
            efficiency_sum += batch_size / static_cast<double>(tests);
        }
        out[t] = aggregate(total, efficiency_sum);
    });
    return out;
}

TrialSummary empirical_evaluate(std::span<const Batch> batches, const MultiplicityFunction& mu,
                                const EmpiricalOptions& options)
{
    return summarize(empirical_trials(batches, mu, options));
}

} // namespace poolpart
