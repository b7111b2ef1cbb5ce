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
#include "poolpart/serialize.h"
#include "poolpart/error.h"

#include <fmt/core.h>

#include <fstream>
#include <limits>

namespace poolpart
{

Json to_json(const SymmetricModel& model)
{
    return Json{{"n", model.n()}, {"alpha", model.alpha()}};
}

SymmetricModel model_from_json(const Json& json)
{
    try {
        auto n = json.at("n").get<std::size_t>();
        auto alpha = json.at("alpha").get<std::vector<double>>();
        if (alpha.size() != n + 1) {
            throw ValidationError(fmt::format("model has n = {} but {} alpha entries", n, alpha.size()));
        }
        return SymmetricModel(std::move(alpha));
    }
    catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("malformed model document: {}", e.what()));
    }
}

Json to_json(const MultiplicityFunction& mu)
{
    Json out = Json::object();
    for (auto it = mu.counts().rbegin(); it != mu.counts().rend(); ++it) {
        out[std::to_string(it->first)] = it->second;
    }
    return out;
}

MultiplicityFunction multiplicity_from_json(const Json& json)
{
    const Json& counts = json.is_object() && json.contains("multiplicity") ? json.at("multiplicity") : json;
    if (!counts.is_object() || counts.empty()) {
        throw ValidationError("a multiplicity must be a nonempty object mapping part size to count");
    }
    MultiplicityFunction mu;
    for (const auto& [key, value] : counts.items()) {
        std::size_t part = 0;
        try {
            std::size_t used = 0;
            part = std::stoul(key, &used);
            if (used != key.size()) {
                throw std::invalid_argument(key);
            }
        }
        catch (const std::exception&) {
            throw ValidationError(fmt::format("part size '{}' is not an integer", key));
        }
        if (!value.is_number_unsigned()) {
            throw ValidationError(fmt::format("multiplicity of part {} must be a nonnegative integer", key));
        }
        mu.add(part, value.get<std::size_t>());
    }
    return mu;
}

Json to_json(const CostVector& costs)
{
    return Json{{"c", costs.values()}};
}

CostVector cost_vector_from_json(const Json& json)
{
    if (!json.is_object() || !json.contains("c") || !json["c"].is_array()) {
        throw ValidationError("cost document must be an object with a \"c\" array");
    }
    std::vector<double> costs;
    for (const auto& c : json["c"]) {
        if (c.is_null()) {
            costs.push_back(std::numeric_limits<double>::infinity());
        }
        else if (c.is_number()) {
            costs.push_back(c.get<double>());
        }
        else {
            throw ValidationError(fmt::format("cost entry {} is not a number", c.dump()));
        }
    }
    return CostVector(std::move(costs));
}

Json to_json(const TrialSummary& summary)
{
    return Json{{"trials", summary.trials},
                {"mean_tests", summary.mean_tests},
                {"std_error", summary.std_error},
                {"mean_efficiency", summary.mean_efficiency},
                {"efficiency_std_error", summary.efficiency_std_error}};
}

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open {}", path.string()));
    }
    try {
        return Json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
    }
}

void write_json(const std::filesystem::path& path, const Json& json)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot write {}", path.string()));
    }
    out << json.dump(2) << '\n';
    if (!out) {
        throw IoError(fmt::format("failed writing {}", path.string()));
    }
}

} // namespace poolpart
