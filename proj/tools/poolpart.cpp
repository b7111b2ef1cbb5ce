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
#include "poolpart/error.h"
#include "poolpart/estimate.h"
#include "poolpart/experiment.h"
#include "poolpart/ingest.h"
#include "poolpart/serialize.h"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <fstream>
#include <iostream>
#include <map>
#include <set>

namespace
{

using namespace poolpart;

enum ExitCode
{
    exit_ok         = 0,
    exit_validation = 2,
    exit_io         = 3,
    exit_infeasible = 4,
};

void emit(const std::string& out_path, const Json& json)
{
    if (out_path.empty() || out_path == "-") {
        std::cout << json.dump(2) << '\n';
    }
    else {
        write_json(out_path, json);
    }
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out || !(out << text)) {
        throw IoError(fmt::format("cannot write {}", path));
    }
}

const std::map<std::string, Aggregation> aggregation_names = {{"pooled", Aggregation::pooled},
                                                              {"per-batch", Aggregation::per_batch}};

struct IngestArgs {
    std::string input;
    std::string out;
    std::size_t batch_size = 80;
    std::vector<std::size_t> excluded = {5};
};

void run_ingest(const IngestArgs& args)
{
    auto records = parse_pools(args.input);
    auto filtered = filter_pools(std::move(records), std::set<std::size_t>(args.excluded.begin(), args.excluded.end()));
    auto batching = impute_batches(std::move(filtered.records), args.batch_size);
    write_batches(std::filesystem::path(args.out), batching.batches);

    const auto& f = filtered.report;
    std::size_t specimens_out = batching.batches.size() * args.batch_size;
    Json summary{{"pools_in", f.pools_in},
                 {"specimens_in", f.specimens_in},
                 {"dropped",
                  {{"no_timestamp", f.no_timestamp},
                   {"excluded_size", f.excluded_size},
                   {"inconclusive", f.inconclusive},
                   {"missing_statuses", f.missing_statuses},
                   {"specimens", f.specimens_dropped}}},
                 {"pools_kept", batching.pools_in},
                 {"specimens_kept", batching.specimens_in},
                 {"batches", batching.batches.size()},
                 {"pools_batched", batching.pools_batched},
                 {"specimens_batched", specimens_out},
                 {"remainder_specimens", batching.remainder_specimens}};
    std::cout << summary.dump(2) << '\n';
}

struct FitArgs {
    std::string input;
    std::string out;
    std::string family = "symmetric";
    double laplace = 0.0;
};

void run_fit(const FitArgs& args)
{
    auto batches = read_batches(args.input);
    auto model = args.family == "iid" ? fit_iid(batches) : fit_symmetric(batches, args.laplace);
    emit(args.out, to_json(model));
}

struct OptimizeArgs {
    std::string model;
    std::string costs;
    std::optional<double> prevalence;
    std::optional<std::size_t> n;
    std::optional<std::size_t> max_pool;
    std::string strategy = "symmetric";
    std::string out;
};

Json pooling_json(const MultiplicityFunction& mu, double tests)
{
    Json pools = Json::array();
    auto pooling = pooling_from_multiplicity(mu);
    for (const auto& group : pooling.groups()) {
        pools.push_back(group);
    }
    return Json{{"multiplicity", to_json(mu)},
                {"expected_tests", tests},
                {"efficiency", efficiency(mu.target(), tests)},
                {"pools", std::move(pools)}};
}

void run_optimize(const OptimizeArgs& args)
{
    if (!args.costs.empty()) {
        auto costs = cost_vector_from_json(read_json(args.costs));
        if (!args.n) {
            throw ValidationError("--costs needs --n");
        }
        if (args.max_pool && *args.max_pool < costs.max_size()) {
            auto values = costs.values();
            values.resize(*args.max_pool);
            costs = CostVector(std::move(values));
        }
        auto solution = dp_solve(costs, *args.n);
        emit(args.out, pooling_json(solution.multiplicity, solution.table.values[*args.n]));
        return;
    }
    std::optional<SymmetricModel> sym;
    if (!args.model.empty()) {
        sym = model_from_json(read_json(args.model));
        if (args.n && *args.n != sym->n()) {
            throw ValidationError(fmt::format("--n {} disagrees with the model size {}", *args.n, sym->n()));
        }
    }
    else {
        if (!args.prevalence || !args.n) {
            throw ValidationError("give either --model or both --prevalence and --n");
        }
        sym = iid_model(*args.n, *args.prevalence);
    }
    auto iid = iid_model(sym->n(), sym->prevalence());
    auto strategy = parse_strategy(args.strategy);
    auto mu = select_multiplicity(strategy, iid, *sym, args.max_pool);
    emit(args.out, pooling_json(mu, partition_cost(cost_vector(q_from_alpha(*sym)), mu)));
}

struct SimulateArgs {
    std::string model;
    std::string batches;
    std::string multiplicity;
    std::size_t trials = 10000;
    Seed seed = 0;
    std::string randomize = "on";
    Aggregation aggregation = Aggregation::pooled;
    std::string out;
    std::string trials_csv_path;
};

void run_simulate(const SimulateArgs& args)
{
    auto mu = multiplicity_from_json(read_json(args.multiplicity));
    std::vector<TrialOutcome> trials;
    if (!args.model.empty()) {
        auto model = model_from_json(read_json(args.model));
        if (mu.target() != model.n()) {
            throw ValidationError(
                fmt::format("multiplicity covers {} specimens but the model has {}", mu.target(), model.n()));
        }
        trials = monte_carlo_trials(model, pooling_from_multiplicity(mu), args.trials, args.seed);
    }
    else {
        auto batches = read_batches(args.batches);
        EmpiricalOptions options{args.randomize == "on", args.trials, args.seed, args.aggregation};
        trials = empirical_trials(batches, mu, options);
    }
    emit(args.out, to_json(summarize(trials)));
    if (!args.trials_csv_path.empty()) {
        write_text(args.trials_csv_path, trials_csv(trials));
    }
}

struct ReportArgs {
    std::string batches;
    std::size_t batch_size = 80;
    ExperimentConfig config;
    bool no_empirical = false;
    std::string out;
    std::string plot_dir;
};

void run_report(ReportArgs args)
{
    args.config.empirical = !args.no_empirical;
    auto result = run_experiment(args.batches, args.batch_size, args.config);
    emit(args.out, to_json(result));
    if (!args.plot_dir.empty()) {
        emit_model_analysis(result.iid_model, result.symmetric_model, args.plot_dir);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optimal Dorfman pooling under exchangeable specimen statuses"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Filter pool records and impute fixed-size batches");
    ingest->add_option("--input", ingest_args.input, "Pool CSV")->required();
    ingest->add_option("--out", ingest_args.out, "Batch CSV to write")->required();
    ingest->add_option("--batch-size", ingest_args.batch_size, "Specimens per batch")
        ->envname("POOLPART_BATCH_SIZE")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ingest->add_option("--exclude-size", ingest_args.excluded, "Pool sizes to drop (repeatable)")
        ->capture_default_str();

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit an IID or symmetric model to batches");
    fit->add_option("--input", fit_args.input, "Batch CSV")->required();
    fit->add_option("--family", fit_args.family)->check(CLI::IsMember({"iid", "symmetric"}))->capture_default_str();
    fit->add_option("--laplace", fit_args.laplace, "Pseudo-count added to each count cell")
        ->envname("POOLPART_LAPLACE")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    fit->add_option("--out", fit_args.out, "Model JSON to write (default stdout)");

    OptimizeArgs opt_args;
    auto* optimize = app.add_subcommand("optimize", "Choose a pooling for one population");
    auto* model_opt = optimize->add_option("--model", opt_args.model, "Model JSON");
    auto* prev_opt = optimize->add_option("--prevalence", opt_args.prevalence, "IID prevalence instead of a model")
                         ->check(CLI::Range(0.0, 1.0));
    auto* costs_opt = optimize->add_option("--costs", opt_args.costs, "Cost vector JSON {\"c\": [...]} instead of a model");
    model_opt->excludes(prev_opt);
    costs_opt->excludes(model_opt);
    costs_opt->excludes(prev_opt);
    optimize->add_option("--n", opt_args.n, "Population size")->check(CLI::PositiveNumber);
    optimize->add_option("--max-pool-size", opt_args.max_pool)
        ->envname("POOLPART_MAX_POOL_SIZE")
        ->check(CLI::PositiveNumber);
    optimize->add_option("--strategy", opt_args.strategy)
        ->check(CLI::IsMember({"team8", "dorfman", "iid", "symmetric"}))
        ->capture_default_str();
    optimize->add_option("--out", opt_args.out, "Output JSON (default stdout)");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo or empirical evaluation of a pooling");
    auto* sim_model = simulate->add_option("--model", sim_args.model, "Model JSON");
    auto* sim_batches =
        simulate->add_option("--batches", sim_args.batches, "Batch CSV");
    sim_model->excludes(sim_batches);
    simulate->add_option("--multiplicity", sim_args.multiplicity, "Multiplicity JSON or optimize output")
        ->required()
        ;
    simulate->add_option("--trials", sim_args.trials)
        ->envname("POOLPART_TRIALS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--seed", sim_args.seed)->envname("POOLPART_SEED")->capture_default_str();
    simulate->add_option("--randomize", sim_args.randomize)
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    simulate->add_option("--aggregate", sim_args.aggregation)
        ->transform(CLI::CheckedTransformer(aggregation_names))
        ->envname("POOLPART_AGGREGATE");
    simulate->add_option("--out", sim_args.out, "Summary JSON (default stdout)");
    simulate->add_option("--trials-csv", sim_args.trials_csv_path, "Per-trial totals CSV");

    ReportArgs rep_args;
    auto* report = app.add_subcommand("report", "Fit, optimize and evaluate all four strategies");
    report->add_option("--batches", rep_args.batches, "Batch CSV")->required();
    report->add_option("--batch-size", rep_args.batch_size)
        ->envname("POOLPART_BATCH_SIZE")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    report->add_option("--trials", rep_args.config.trials)
        ->envname("POOLPART_TRIALS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    report->add_option("--seed", rep_args.config.seed)->envname("POOLPART_SEED")->capture_default_str();
    report->add_option("--max-pool-size", rep_args.config.max_pool)
        ->envname("POOLPART_MAX_POOL_SIZE")
        ->check(CLI::PositiveNumber);
    report->add_option("--laplace", rep_args.config.laplace)
        ->envname("POOLPART_LAPLACE")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    report->add_option("--aggregate", rep_args.config.aggregation)
        ->transform(CLI::CheckedTransformer(aggregation_names))
        ->envname("POOLPART_AGGREGATE");
    report->add_flag("--no-empirical", rep_args.no_empirical, "Skip replaying the batches");
    report->add_option("--out", rep_args.out, "Report JSON (default stdout)");
    report->add_option("--plot-dir", rep_args.plot_dir, "Directory for alpha/q/U CSV series");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (ingest->parsed()) {
            run_ingest(ingest_args);
        }
        else if (fit->parsed()) {
            run_fit(fit_args);
        }
        else if (optimize->parsed()) {
            run_optimize(opt_args);
        }
        else if (simulate->parsed()) {
            if (sim_args.model.empty() && sim_args.batches.empty()) {
                throw ValidationError("give either --model or --batches");
            }
            run_simulate(sim_args);
        }
        else if (report->parsed()) {
            run_report(rep_args);
        }
    }
    catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    }
    catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_infeasible;
    }
    return exit_ok;
}
