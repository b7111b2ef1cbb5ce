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
#ifndef POOLPART_EXPERIMENT_H
#define POOLPART_EXPERIMENT_H

#include "poolpart/cost.h"
#include "poolpart/ingest.h"
#include "poolpart/model.h"
#include "poolpart/optimize.h"
#include "poolpart/serialize.h"
#include "poolpart/simulate.h"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poolpart
{

enum class Strategy
{
    team8, ///< ten size-8 pools per 80, the lab's fixed choice
    dorfman, ///< infinite-population Dorfman size, one smaller remainder pool if needed
    iid, ///< optimal partition under the fitted IID model
    symmetric, ///< optimal partition under the fitted exchangeable model
};

inline constexpr std::array<Strategy, 4> all_strategies = {Strategy::team8, Strategy::dorfman, Strategy::iid,
                                                           Strategy::symmetric};

std::string_view to_string(Strategy strategy);

/// Throws ValidationError for unknown names.
Strategy parse_strategy(std::string_view name);

/**
 * Pooling a strategy picks for a population of sym.n() specimens. `iid` supplies the prevalence for
 * the dorfman and iid strategies, `sym` the distribution for the symmetric one. Parts never exceed
 * max_pool for the optimizing strategies; the dorfman search also stops there.
 */
MultiplicityFunction select_multiplicity(Strategy strategy, const SymmetricModel& iid, const SymmetricModel& sym,
                                         std::optional<std::size_t> max_pool = std::nullopt);

struct TheoreticalCost {
    double expected_tests = 0.0;
    double efficiency = 0.0;
};

struct StrategyReport {
    Strategy strategy = Strategy::team8;
    MultiplicityFunction multiplicity;
    /// under the fitted symmetric model
    double theoretical_tests = 0.0;
    double theoretical_efficiency = 0.0;
    TheoreticalCost under_iid;
    std::optional<TrialSummary> randomized;
    std::optional<TrialSummary> deterministic;
};

struct ExperimentConfig {
    std::size_t trials = 10000;
    Seed seed = 0;
    std::optional<std::size_t> max_pool;
    Aggregation aggregation = Aggregation::pooled;
    double laplace = 0.0;
    bool empirical = true;
};

struct ExperimentResult {
    std::size_t batch_size = 0;
    std::size_t batch_count = 0;
    double prevalence = 0.0;
    std::size_t dorfman_size = 0;
    SymmetricModel iid_model;
    SymmetricModel symmetric_model;
    CostVector iid_costs;
    CostVector symmetric_costs;
    std::vector<StrategyReport> strategies;
    ExperimentConfig config;
};

/**
 * @brief Fit both models to the batches and compare the four strategies.
 *
 * Every strategy is costed under the fitted symmetric and IID models, and, if config.empirical is
 * set, replayed against the batches with and without random specimen-to-pool assignment. All
 * strategies share the same random streams. Errors carry the failing stage as a message prefix.
 */
ExperimentResult run_experiment(std::span<const Batch> batches, const ExperimentConfig& config);

/// Reads a batch CSV and checks every batch has batch_size specimens first.
ExperimentResult run_experiment(const std::filesystem::path& batches_csv, std::size_t batch_size,
                                const ExperimentConfig& config);

const StrategyReport& find_strategy(const ExperimentResult& result, Strategy strategy);

Json to_json(const ExperimentResult& result);

/// CSV plot series; each has a header row then one row per index.
struct ModelAnalysis {
    std::string alpha_csv; ///< k,iid,symmetric for k = 0..n
    std::string q_csv; ///< h,iid,symmetric for h = 0..n
    std::string u_csv; ///< h,iid,symmetric for h = 1..n
};

ModelAnalysis model_analysis(const SymmetricModel& iid, const SymmetricModel& sym);

/// Writes alpha.csv, q.csv and u.csv into directory, creating it if needed.
void emit_model_analysis(const SymmetricModel& iid, const SymmetricModel& sym,
                         const std::filesystem::path& directory);

/// trial,tests,efficiency rows.
std::string trials_csv(std::span<const TrialOutcome> trials);

} // namespace poolpart

#endif // POOLPART_EXPERIMENT_H
