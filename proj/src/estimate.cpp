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
#include "poolpart/estimate.h"
#include "poolpart/error.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace poolpart
{

EmpiricalCounts count_positives(std::span<const Batch> batches)
{
    if (batches.empty()) {
        throw ValidationError("cannot fit a model to zero batches");
    }
    EmpiricalCounts counts;
    counts.n = batches.front().size();
    if (counts.n == 0) {
        throw ValidationError("batches must contain at least one specimen");
    }
    counts.histogram.assign(counts.n + 1, 0);
    for (const auto& batch : batches) {
        if (batch.size() != counts.n) {
            throw ValidationError(fmt::format("batch {} has {} specimens; expected {} like the first batch",
                                              batch.index, batch.size(), counts.n));
        }
        ++counts.histogram[batch.statuses.nnz()];
    }
    counts.total_batches = batches.size();
    return counts;
}

SymmetricModel fit_symmetric(const EmpiricalCounts& counts, double laplace)
{
    if (!(laplace >= 0.0) || std::isinf(laplace)) {
        throw ValidationError(fmt::format("pseudo-count must be finite and nonnegative, got {}", laplace));
    }
    const double denominator =
        static_cast<double>(counts.total_batches) + laplace * static_cast<double>(counts.n + 1);
    std::vector<double> alpha(counts.n + 1);
    for (std::size_t k = 0; k <= counts.n; ++k) {
        alpha[k] = (static_cast<double>(counts.histogram[k]) + laplace) / denominator;
    }
    return SymmetricModel(std::move(alpha));
}

SymmetricModel fit_symmetric(std::span<const Batch> batches, double laplace)
{
    return fit_symmetric(count_positives(batches), laplace);
}

SymmetricModel fit_iid(const EmpiricalCounts& counts)
{
    double positives = 0.0;
    for (std::size_t k = 1; k <= counts.n; ++k) {
        positives += static_cast<double>(k) * static_cast<double>(counts.histogram[k]);
    }
    const double specimens = static_cast<double>(counts.n) * static_cast<double>(counts.total_batches);
    return iid_model(counts.n, positives / specimens);
}

SymmetricModel fit_iid(std::span<const Batch> batches)
{
    return fit_iid(count_positives(batches));
}

double log_likelihood(const SymmetricModel& model, const EmpiricalCounts& counts)
{
    if (model.n() != counts.n) {
        throw ValidationError(fmt::format("model of size {} cannot score batches of size {}", model.n(), counts.n));
    }
    double total = 0.0;
    for (std::size_t k = 0; k <= counts.n; ++k) {
        if (counts.histogram[k] == 0) {
            continue;
        }
        if (model[k] == 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        total += static_cast<double>(counts.histogram[k]) * (std::log(model[k]) - std::log(binomial(counts.n, k)));
    }
    return total;
}

double kl_counts(const SymmetricModel& r, const SymmetricModel& p)
{
    if (r.n() != p.n()) {
        throw ValidationError(fmt::format("models of size {} and {} are not comparable", r.n(), p.n()));
    }
    double total = 0.0;
    for (std::size_t k = 0; k <= r.n(); ++k) {
        if (r[k] == 0.0) {
            continue;
        }
        if (p[k] == 0.0) {
            throw ValidationError(
                fmt::format("divergence is infinite: the reference puts mass on {} positives, the model none", k));
        }
        total += r[k] * std::log(r[k] / p[k]);
    }
    // nonnegative in exact arithmetic; rounding can leave a tiny negative residue when r == p
    return std::max(total, 0.0);
}

} // namespace poolpart
