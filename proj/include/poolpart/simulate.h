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
#ifndef POOLPART_SIMULATE_H
#define POOLPART_SIMULATE_H

#include "poolpart/cost.h"
#include "poolpart/ingest.h"
#include "poolpart/model.h"
#include "poolpart/optimize.h"

#include <cstddef>
#include <span>
#include <vector>

namespace poolpart
{

struct GroupTally {
    std::size_t size = 0;
    bool positive = false;
    std::size_t tests = 0;
};

struct TestTally {
    std::size_t total_tests = 0;
    std::vector<GroupTally> per_group;
};

/**
 * Run Dorfman's two-stage procedure: one test per group, plus an individual retest of every member
 * of a positive group of size two or more. Throws ValidationError if a group member is outside x.
 */
TestTally run_dorfman(const GroupFamily& family, const OutcomeVector& x);

/// Total of run_dorfman without the per-group breakdown.
std::size_t count_tests(const GroupFamily& family, const OutcomeVector& x);

/// One Monte Carlo or evaluation trial.
struct TrialOutcome {
    double tests = 0.0; ///< tests per population (Monte Carlo) or mean tests per batch (empirical)
    double efficiency = 0.0;
};

struct TrialSummary {
    std::size_t trials = 0;
    double mean_tests = 0.0;
    double std_error = 0.0;
    double mean_efficiency = 0.0;
    double efficiency_std_error = 0.0;

    bool operator==(const TrialSummary&) const = default;
};

/// Sample means and standard errors (sample standard deviation / sqrt(trials)); zero SE for one trial.
TrialSummary summarize(std::span<const TrialOutcome> trials);

/**
 * Draw `trials` outcomes from the model and count the tests the family uses on each. Trial t uses
 * the substream substream_seed(seed, t), so results do not depend on scheduling.
 */
std::vector<TrialOutcome> monte_carlo_trials(const SymmetricModel& model, const GroupFamily& family,
                                             std::size_t trials, Seed seed);

TrialSummary monte_carlo(const SymmetricModel& model, const GroupFamily& family, std::size_t trials, Seed seed);

enum class Aggregation
{
    pooled, ///< total specimens over total tests across all batches
    per_batch, ///< mean over batches of batch size over batch tests
};

struct EmpiricalOptions {
    bool randomize = true;
    std::size_t trials = 10000; ///< ignored without randomization; the input order is one trial
    Seed seed = 0;
    Aggregation aggregation = Aggregation::pooled;
};

/**
 * @brief Evaluate a pooling against observed batches.
 *
 * Every batch is pooled with pooling_from_multiplicity(mu). With randomization each (batch, trial)
 * first permutes its specimens uniformly using substream_seed(seed, batch position, trial).
 * Throws ValidationError if a batch size differs from mu.target().
 */
std::vector<TrialOutcome> empirical_trials(std::span<const Batch> batches, const MultiplicityFunction& mu,
                                           const EmpiricalOptions& options);

TrialSummary empirical_evaluate(std::span<const Batch> batches, const MultiplicityFunction& mu,
                                const EmpiricalOptions& options);

} // namespace poolpart

#endif // POOLPART_SIMULATE_H
