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
#ifndef POOLPART_MODEL_H
#define POOLPART_MODEL_H

#include "poolpart/random.h"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace poolpart
{

/**
 * @brief Exchangeable distribution of binary specimen statuses over a population of size n.
 *
 * Stored as alpha, where alpha[k] is the probability that exactly k of the n specimens are
 * positive. Given k, every placement of the positives is equally likely. This is the canonical
 * representation; QCurve and OutcomeWeights are derived views.
 */
class SymmetricModel
{
public:
    /// Validates: n >= 1, every entry in [0, 1], entries sum to 1 within 1e-12.
    explicit SymmetricModel(std::vector<double> alpha);

    std::size_t n() const
    {
        return m_alpha.size() - 1;
    }

    const std::vector<double>& alpha() const
    {
        return m_alpha;
    }

    double operator[](std::size_t k) const
    {
        return m_alpha[k];
    }

    /// Marginal probability that a single specimen is positive, E[k] / n.
    double prevalence() const;

    bool operator==(const SymmetricModel&) const = default;

private:
    std::vector<double> m_alpha;
};

/**
 * @brief q[h] is the probability that any group of h specimens tests negative.
 *
 * q[0] = 1 and q is nonincreasing. Whether q comes from a valid exchangeable distribution is
 * only decided by w_from_q.
 */
class QCurve
{
public:
    explicit QCurve(std::vector<double> q);

    std::size_t n() const
    {
        return m_q.size() - 1;
    }

    const std::vector<double>& values() const
    {
        return m_q;
    }

    double operator[](std::size_t h) const
    {
        return m_q[h];
    }

private:
    std::vector<double> m_q;
};

/// w[k] is the probability of any one particular outcome vector with exactly k positives.
class OutcomeWeights
{
public:
    /// Validates: every entry >= 0 and sum_k C(n,k) w[k] = 1 within 1e-12.
    explicit OutcomeWeights(std::vector<double> w);

    std::size_t n() const
    {
        return m_w.size() - 1;
    }

    const std::vector<double>& values() const
    {
        return m_w;
    }

    double operator[](std::size_t k) const
    {
        return m_w[k];
    }

private:
    std::vector<double> m_w;
};

/// Binary status vector, 0 = negative and 1 = positive.
class OutcomeVector
{
public:
    OutcomeVector() = default;
    explicit OutcomeVector(std::vector<std::uint8_t> statuses);

    std::size_t size() const
    {
        return m_statuses.size();
    }

    std::uint8_t operator[](std::size_t i) const
    {
        return m_statuses[i];
    }

    std::span<const std::uint8_t> statuses() const
    {
        return m_statuses;
    }

    /// Number of positive entries.
    std::size_t nnz() const;

    bool operator==(const OutcomeVector&) const = default;

private:
    std::vector<std::uint8_t> m_statuses;
};

/// Binomial coefficient as a double; exact for results below 2^53.
double binomial(std::size_t n, std::size_t k);

/// Statuses independent with a common prevalence, alpha[k] = C(n,k) p^k (1-p)^(n-k).
SymmetricModel iid_model(std::size_t n, double prevalence);

/// q[h] = sum_k alpha[k] C(n-h,k) / C(n,k), i.e. the chance that h draws without replacement miss
/// every positive.
QCurve q_from_alpha(const SymmetricModel& model);

enum class Arithmetic
{
    compensated, ///< long double with Neumaier summation
    exact, ///< rational arithmetic, n <= 100
};

/**
 * @brief Recover the outcome weights from a q curve.
 *
 * Runs w[0] = q[n], w[k] = q[n-k] - sum_{i<k} C(k,i) w[i]. The recursion is an inverse binomial
 * transform and amplifies the rounding in q roughly like 2^n, so for n beyond a few dozen it is
 * only meaningful on exact input.
 *
 * Entries in [-1e-9, 0) are clamped to zero. Throws ValidationError if an entry is below -1e-9 or
 * the clamped weights no longer normalize within 1e-9.
 */
OutcomeWeights w_from_q(const QCurve& curve, Arithmetic arithmetic = Arithmetic::compensated);

SymmetricModel alpha_from_w(const OutcomeWeights& weights);
OutcomeWeights w_from_alpha(const SymmetricModel& model);

/**
 * Probability that every specimen in group tests negative, summed over all 2^n outcome vectors.
 * Reference implementation for n <= 16; throws ValidationError beyond that.
 */
double marginal_zero_bruteforce(const SymmetricModel& model, std::span<const std::size_t> group);

/// Same, for the group {0, ..., h-1}.
double marginal_zero_bruteforce(const SymmetricModel& model, std::size_t h);

/// Draws k from alpha, then places the k positives uniformly at random.
OutcomeVector sample_outcome(const SymmetricModel& model, Seed seed);

/// Same, reusing a caller-owned engine.
OutcomeVector sample_outcome(const SymmetricModel& model, Engine& engine);

} // namespace poolpart

#endif // POOLPART_MODEL_H
