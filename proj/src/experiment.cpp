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
#include "poolpart/experiment.h"
#include "poolpart/error.h"
#include "poolpart/estimate.h"

#include <fmt/core.h>

#include <algorithm>
#include <fstream>

namespace poolpart
{

namespace
{

/// Runs f, prefixing any library error with the pipeline stage while keeping its type.
template <class F>
auto staged(std::string_view stage, F&& f)
{
    try {
        return f();
    }
    catch (const IoError& e) {
        throw IoError(fmt::format("{}: {}", stage, e.what()));
    }
    catch (const InfeasibleError& e) {
        throw InfeasibleError(fmt::format("{}: {}", stage, e.what()));
    }
    catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}: {}", stage, e.what()));
    }
}

std::size_t dorfman_size_for(double prevalence, std::size_t s_max)
{
    // the infinite-population optimum grows without bound as prevalence falls to zero
    if (prevalence <= 0.0) {
        return s_max;
    }
    if (prevalence >= 1.0) {
        return 1;
    }
    return dorfman_infinite_size(prevalence, s_max);
}

Json to_json(const TheoreticalCost& cost)
{
    return Json{{"expected_tests", cost.expected_tests}, {"efficiency", cost.efficiency}};
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out || !(out << text)) {
        throw IoError(fmt::format("cannot write {}", path.string()));
    }
}

} // namespace

std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::team8:
        return "team8";
    case Strategy::dorfman:
        return "dorfman";
    case Strategy::iid:
        return "iid";
    case Strategy::symmetric:
        return "symmetric";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name)
{
    for (auto s : all_strategies) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ValidationError(fmt::format("unknown strategy '{}'; expected team8, dorfman, iid or symmetric", name));
}

MultiplicityFunction select_multiplicity(Strategy strategy, const SymmetricModel& iid, const SymmetricModel& sym,
                                         std::optional<std::size_t> max_pool)
{
    const std::size_t n = sym.n();
    if (iid.n() != n) {
        throw ValidationError(fmt::format("IID model has {} specimens, symmetric model {}", iid.n(), n));
    }
    if (max_pool && (*max_pool == 0 || *max_pool > n)) {
        throw ValidationError(fmt::format("maximum pool size {} outside 1..{}", *max_pool, n));
    }
    switch (strategy) {
    case Strategy::team8:
        return fixed_size_multiplicity(8, n);
    case Strategy::dorfman:
        return fixed_size_multiplicity(dorfman_size_for(iid.prevalence(), max_pool.value_or(n)), n);
    case Strategy::iid:
        return dp_solve(cost_vector(q_from_alpha(iid), max_pool), n).multiplicity;
    case Strategy::symmetric:
        return dp_solve(cost_vector(q_from_alpha(sym), max_pool), n).multiplicity;
    }
    throw ValidationError("unknown strategy");
}

ExperimentResult run_experiment(std::span<const Batch> batches, const ExperimentConfig& config)
{
    auto counts = staged("fit", [&] {
        return count_positives(batches);
    });
    auto iid = staged("fit", [&] {
        return fit_iid(counts);
    });
    auto sym = staged("fit", [&] {
        return fit_symmetric(counts, config.laplace);
    });
    const std::size_t n = counts.n;

    auto iid_costs = cost_vector(q_from_alpha(iid));
    auto sym_costs = cost_vector(q_from_alpha(sym));
    const std::size_t s_max = config.max_pool.value_or(n);
    std::size_t positives = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        positives += k * counts.histogram[k];
    }
    const double prevalence = static_cast<double>(positives) / static_cast<double>(n * counts.total_batches);

    ExperimentResult result{.batch_size      = n,
                            .batch_count     = counts.total_batches,
                            .prevalence      = prevalence,
                            .dorfman_size    = dorfman_size_for(iid.prevalence(), std::min(s_max, n)),
                            .iid_model       = iid,
                            .symmetric_model = sym,
                            .iid_costs       = iid_costs,
                            .symmetric_costs = sym_costs,
                            .strategies      = {},
                            .config          = config};

    for (auto strategy : all_strategies) {
        StrategyReport report;
        report.strategy = strategy;
        report.multiplicity = staged("optimize", [&] {
            return select_multiplicity(strategy, iid, sym, config.max_pool);
        });
        report.theoretical_tests = partition_cost(sym_costs, report.multiplicity);
        report.theoretical_efficiency = efficiency(n, report.theoretical_tests);
        report.under_iid.expected_tests = partition_cost(iid_costs, report.multiplicity);
        report.under_iid.efficiency = efficiency(n, report.under_iid.expected_tests);
        if (config.empirical) {
            staged("simulate", [&] {
                EmpiricalOptions options{true, config.trials, config.seed, config.aggregation};
                report.randomized = empirical_evaluate(batches, report.multiplicity, options);
                options.randomize = false;
                report.deterministic = empirical_evaluate(batches, report.multiplicity, options);
                return 0;
            });
        }
        result.strategies.push_back(std::move(report));
    }
    return result;
}

ExperimentResult run_experiment(const std::filesystem::path& batches_csv, std::size_t batch_size,
                                const ExperimentConfig& config)
{
    auto batches = staged("ingest", [&] {
        return read_batches(batches_csv);
    });
    for (const auto& batch : batches) {
        if (batch.size() != batch_size) {
            throw ValidationError(fmt::format("ingest: batch {} has {} specimens, expected {}", batch.index,
                                              batch.size(), batch_size));
        }
    }
    return run_experiment(batches, config);
}

const StrategyReport& find_strategy(const ExperimentResult& result, Strategy strategy)
{
    for (const auto& report : result.strategies) {
        if (report.strategy == strategy) {
            return report;
        }
    }
    throw ValidationError(fmt::format("strategy {} missing from result", to_string(strategy)));
}

Json to_json(const ExperimentResult& result)
{
    Json strategies = Json::array();
    for (const auto& report : result.strategies) {
        Json entry{{"strategy", to_string(report.strategy)},
                   {"multiplicity", to_json(report.multiplicity)},
                   {"theoretical_tests", report.theoretical_tests},
                   {"theoretical_efficiency", report.theoretical_efficiency},
                   {"theoretical_iid", to_json(report.under_iid)}};
        if (report.randomized) {
            entry["empirical"] = Json{{"randomized", to_json(*report.randomized)},
                                      {"deterministic", to_json(*report.deterministic)}};
        }
        strategies.push_back(std::move(entry));
    }
    return Json{{"batch_size", result.batch_size},
                {"batches", result.batch_count},
                {"prevalence", result.prevalence},
                {"dorfman_pool_size", result.dorfman_size},
                {"config",
                 {{"trials", result.config.trials},
                  {"seed", result.config.seed},
                  {"max_pool_size", result.config.max_pool ? Json(*result.config.max_pool) : Json(nullptr)},
                  {"aggregation", result.config.aggregation == Aggregation::pooled ? "pooled" : "per-batch"},
                  {"laplace", result.config.laplace}}},
                {"models", {{"iid", to_json(result.iid_model)}, {"symmetric", to_json(result.symmetric_model)}}},
                {"cost_vectors", {{"iid", to_json(result.iid_costs)}, {"symmetric", to_json(result.symmetric_costs)}}},
                {"strategies", std::move(strategies)}};
}

ModelAnalysis model_analysis(const SymmetricModel& iid, const SymmetricModel& sym)
{
    if (iid.n() != sym.n()) {
        throw ValidationError(fmt::format("models of size {} and {} cannot be compared", iid.n(), sym.n()));
    }
    const std::size_t n = sym.n();
    auto q_iid = q_from_alpha(iid);
    auto q_sym = q_from_alpha(sym);

    ModelAnalysis out;
    out.alpha_csv = "k,iid,symmetric\n";
    out.q_csv = "h,iid,symmetric\n";
    out.u_csv = "h,iid,symmetric\n";
    for (std::size_t k = 0; k <= n; ++k) {
        out.alpha_csv += fmt::format("{},{},{}\n", k, iid[k], sym[k]);
        out.q_csv += fmt::format("{},{},{}\n", k, q_iid[k], q_sym[k]);
        if (k >= 1) {
            out.u_csv += fmt::format("{},{},{}\n", k, expected_tests_group(q_iid, k), expected_tests_group(q_sym, k));
        }
    }
    return out;
}

void emit_model_analysis(const SymmetricModel& iid, const SymmetricModel& sym,
                         const std::filesystem::path& directory)
{
    auto analysis = model_analysis(iid, sym);
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create {}: {}", directory.string(), ec.message()));
    }
    write_text(directory / "alpha.csv", analysis.alpha_csv);
    write_text(directory / "q.csv", analysis.q_csv);
    write_text(directory / "u.csv", analysis.u_csv);
}

std::string trials_csv(std::span<const TrialOutcome> trials)
{
    std::string out = "trial,tests,efficiency\n";
    for (std::size_t t = 0; t < trials.size(); ++t) {
        out += fmt::format("{},{},{}\n", t, trials[t].tests, trials[t].efficiency);
    }
    return out;
}

} // namespace poolpart
