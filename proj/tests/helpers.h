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
#ifndef POOLPART_TESTS_HELPERS_H
#define POOLPART_TESTS_HELPERS_H

#include "poolpart/ingest.h"
#include "poolpart/model.h"
#include "poolpart/random.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace poolpart::fixtures
{

/// Dirichlet(1) draw over 0..n, with about a third of the entries zeroed out to exercise sparse supports.
inline SymmetricModel random_model(std::size_t n, Engine& engine)
{
    std::vector<double> alpha(n + 1);
    double total = 0.0;
    for (auto& a : alpha) {
        a = uniform01(engine) < 0.3 ? 0.0 : -std::log1p(-uniform01(engine));
        total += a;
    }
    if (total == 0.0) {
        alpha[0] = total = 1.0;
    }
    for (auto& a : alpha) {
        a /= total;
    }
    // push the rounding residue into the largest entry so the sum is within 1e-12
    double residue = 1.0 - std::accumulate(alpha.begin(), alpha.end(), 0.0);
    *std::max_element(alpha.begin(), alpha.end()) += residue;
    return SymmetricModel(std::move(alpha));
}

inline Batch make_batch(std::size_t index, std::vector<std::uint8_t> statuses)
{
    return Batch{index, OutcomeVector(std::move(statuses)), {}};
}

/// Batches sampled from a model, one substream per batch.
inline std::vector<Batch> sample_batches(const SymmetricModel& model, std::size_t count, Seed seed)
{
    std::vector<Batch> batches;
    batches.reserve(count);
    for (std::size_t b = 0; b < count; ++b) {
        batches.push_back(Batch{b, sample_outcome(model, substream_seed(seed, b)), {}});
    }
    return batches;
}

/// Exactly `positives` positive specimens placed uniformly at random over count batches of n specimens.
inline std::vector<Batch> batches_with_positives(std::size_t count, std::size_t n, std::size_t positives, Seed seed)
{
    std::vector<std::uint8_t> all(count * n, 0);
    std::fill(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(positives), std::uint8_t{1});
    Engine engine(seed);
    std::shuffle(all.begin(), all.end(), engine);
    std::vector<Batch> batches;
    for (std::size_t b = 0; b < count; ++b) {
        auto first = all.begin() + static_cast<std::ptrdiff_t>(b * n);
        batches.push_back(Batch{b, OutcomeVector(std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(n))), {}});
    }
    return batches;
}

} // namespace poolpart::fixtures

#endif // POOLPART_TESTS_HELPERS_H
