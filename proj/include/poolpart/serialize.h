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
#ifndef POOLPART_SERIALIZE_H
#define POOLPART_SERIALIZE_H

#include "poolpart/cost.h"
#include "poolpart/model.h"
#include "poolpart/optimize.h"
#include "poolpart/simulate.h"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace poolpart
{

using Json = nlohmann::ordered_json;

/// {"n": int, "alpha": [float, ...]}
Json to_json(const SymmetricModel& model);
SymmetricModel model_from_json(const Json& json);

/// {"8": 10} maps part size to multiplicity.
Json to_json(const MultiplicityFunction& mu);

/// Accepts the bare map or any object with a "multiplicity" member, such as optimize output.
MultiplicityFunction multiplicity_from_json(const Json& json);

/// {"c": [float, ...]} with c[0] the cost of a singleton.
Json to_json(const CostVector& costs);

/// Inverse of to_json(CostVector); null entries stand for +inf, a size that may not be used.
CostVector cost_vector_from_json(const Json& json);

Json to_json(const TrialSummary& summary);

/// Reads a JSON document; IoError if unreadable, ValidationError if malformed.
Json read_json(const std::filesystem::path& path);

/// Writes json.dump(2) followed by a newline.
void write_json(const std::filesystem::path& path, const Json& json);

} // namespace poolpart

#endif // POOLPART_SERIALIZE_H
