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
#ifndef POOLPART_ESTIMATE_H
#define POOLPART_ESTIMATE_H

#include "poolpart/ingest.h"
#include "poolpart/model.h"

#include <cstddef>
#include <span>
#include <vector>

namespace poolpart
{

/// histogram[k] counts the batches with exactly k positives.
struct EmpiricalCounts {
    std::size_t n = 0;
    std::vector<std::size_t> histogram;
    std::size_t total_batches = 0;
};

/// Throws ValidationError on empty input or batches of differing size.
EmpiricalCounts count_positives(std::span<const Batch> batches);

/**
 * Maximum-likelihood exchangeable model. The likelihood of a batch only depends on its number of
 * positives, so the estimate is the frequency of each count, optionally with `laplace` pseudo-counts
 * added to every cell.
 */
SymmetricModel fit_symmetric(std::span<const Batch> batches, double laplace = 0.0);
SymmetricModel fit_symmetric(const EmpiricalCounts& counts, double laplace = 0.0);

/// IID model at the pooled positive fraction.
SymmetricModel fit_iid(std::span<const Batch> batches);
SymmetricModel fit_iid(const EmpiricalCounts& counts);

/// sum over batches of log p(x), with p(x) = alpha[nnz(x)] / C(n, nnz(x)); -inf if some batch is impossible.
double log_likelihood(const SymmetricModel& model, const EmpiricalCounts& counts);

/**
 * KL divergence of p from r in nats, computed on the count distributions. Equal to the divergence
 * over all 2^n outcome vectors because both models spread each count uniformly over its outcomes.
 * Throws ValidationError if r puts mass where p has none, or if the sizes differ.
 */
double kl_counts(const SymmetricModel& r, const SymmetricModel& p);

} // namespace poolpart

#endif // POOLPART_ESTIMATE_H
