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
#include "poolpart/model.h"
#include "poolpart/error.h"
#include "poolpart/exact.h"

#include <fmt/core.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace poolpart
{

namespace
{

constexpr double sum_tolerance = 1e-12;
constexpr double clamp_tolerance = 1e-9;

/// Neumaier compensated accumulator.
class CompensatedSum
{
public:
    void add(long double x)
    {
        long double t = m_sum + x;
        if (std::fabs(m_sum) >= std::fabs(x)) {
            m_carry += (m_sum - t) + x;
        }
        else {
            m_carry += (x - t) + m_sum;
        }
        m_sum = t;
    }

    long double value() const
    {
        return m_sum + m_carry;
    }

private:
    long double m_sum   = 0.0L;
    long double m_carry = 0.0L;
};

double binomial_weighted_sum(std::span<const double> w)
{
    const std::size_t n = w.size() - 1;
    CompensatedSum total;
    for (std::size_t k = 0; k <= n; ++k) {
        total.add(static_cast<long double>(binomial(n, k)) * w[k]);
    }
    return static_cast<double>(total.value());
}

OutcomeWeights finish_weights(std::vector<double> w)
{
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(w[k] >= -clamp_tolerance)) {
            throw ValidationError(fmt::format(
                "q is not the marginal curve of an exchangeable distribution: w[{}] = {:.6g} < -{:g}", k, w[k],
                clamp_tolerance));
        }
        w[k] = std::max(w[k], 0.0);
    }
    double total = binomial_weighted_sum(w);
    if (std::fabs(total - 1.0) > clamp_tolerance) {
        throw ValidationError(
            fmt::format("outcome weights reconstructed from q sum to {:.12g} after clamping, not 1", total));
    }
    if (total != 1.0) {
        for (auto& x : w) {
            x /= total;
        }
    }
    return OutcomeWeights(std::move(w));
}

} // namespace

SymmetricModel::SymmetricModel(std::vector<double> alpha)
    : m_alpha(std::move(alpha))
{
    if (m_alpha.size() < 2) {
        throw ValidationError("a symmetric model needs a population of at least one specimen");
    }
    CompensatedSum total;
    for (std::size_t k = 0; k < m_alpha.size(); ++k) {
        if (!(m_alpha[k] >= 0.0 && m_alpha[k] <= 1.0)) {
            throw ValidationError(fmt::format("alpha[{}] = {} is not a probability", k, m_alpha[k]));
        }
        total.add(m_alpha[k]);
    }
    if (std::fabs(static_cast<double>(total.value()) - 1.0) > sum_tolerance) {
        throw ValidationError(
            fmt::format("alpha sums to {:.17g}, expected 1 within {:g}", static_cast<double>(total.value()),
                        sum_tolerance));
    }
}

double SymmetricModel::prevalence() const
{
    CompensatedSum mean;
    for (std::size_t k = 1; k < m_alpha.size(); ++k) {
        mean.add(static_cast<long double>(k) * m_alpha[k]);
    }
    return static_cast<double>(mean.value() / static_cast<long double>(n()));
}

QCurve::QCurve(std::vector<double> q)
    : m_q(std::move(q))
{
    if (m_q.size() < 2) {
        throw ValidationError("a q curve needs a population of at least one specimen");
    }
    if (m_q[0] != 1.0) {
        throw ValidationError(fmt::format("q[0] must be exactly 1, got {}", m_q[0]));
    }
    for (std::size_t h = 1; h < m_q.size(); ++h) {
        if (!(m_q[h] >= 0.0 && m_q[h] <= 1.0)) {
            throw ValidationError(fmt::format("q[{}] = {} is not a probability", h, m_q[h]));
        }
        if (m_q[h] > m_q[h - 1] + sum_tolerance) {
            throw ValidationError(fmt::format("q increases between h = {} and h = {}", h - 1, h));
        }
    }
}

OutcomeWeights::OutcomeWeights(std::vector<double> w)
    : m_w(std::move(w))
{
    if (m_w.size() < 2) {
        throw ValidationError("outcome weights need a population of at least one specimen");
    }
    for (std::size_t k = 0; k < m_w.size(); ++k) {
        if (!(m_w[k] >= 0.0 && m_w[k] <= 1.0)) {
            throw ValidationError(fmt::format("w[{}] = {} is not a probability", k, m_w[k]));
        }
    }
    double total = binomial_weighted_sum(m_w);
    if (std::fabs(total - 1.0) > sum_tolerance) {
        throw ValidationError(fmt::format("sum of C(n,k) w[k] is {:.17g}, expected 1", total));
    }
}

OutcomeVector::OutcomeVector(std::vector<std::uint8_t> statuses)
    : m_statuses(std::move(statuses))
{
    for (std::size_t i = 0; i < m_statuses.size(); ++i) {
        if (m_statuses[i] > 1) {
            throw ValidationError(fmt::format("status {} at position {} is not binary", int(m_statuses[i]), i));
        }
    }
}

std::size_t OutcomeVector::nnz() const
{
    return static_cast<std::size_t>(std::count(m_statuses.begin(), m_statuses.end(), std::uint8_t{1}));
}

double binomial(std::size_t n, std::size_t k)
{
    if (k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double result = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return result;
}

SymmetricModel iid_model(std::size_t n, double prevalence)
{
    if (n == 0) {
        throw ValidationError("population size must be at least 1");
    }
    if (!(prevalence >= 0.0 && prevalence <= 1.0)) {
        throw ValidationError(fmt::format("prevalence {} outside [0, 1]", prevalence));
    }
    std::vector<double> alpha(n + 1, 0.0);
    if (prevalence == 0.0) {
        alpha[0] = 1.0;
    }
    else if (prevalence == 1.0) {
        alpha[n] = 1.0;
    }
    else {
        // log space keeps C(n,k) p^k (1-p)^(n-k) finite for large n
        const double log_p = std::log(prevalence);
        const double log_not_p = std::log1p(-prevalence);
        const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
        for (std::size_t k = 0; k <= n; ++k) {
            double log_choose = log_n_fact - std::lgamma(static_cast<double>(k) + 1.0) -
                                std::lgamma(static_cast<double>(n - k) + 1.0);
            alpha[k] = std::exp(log_choose + static_cast<double>(k) * log_p +
                                static_cast<double>(n - k) * log_not_p);
        }
        CompensatedSum total;
        for (double a : alpha) {
            total.add(a);
        }
        const double scale = static_cast<double>(total.value());
        for (auto& a : alpha) {
            a /= scale;
        }
    }
    return SymmetricModel(std::move(alpha));
}

QCurve q_from_alpha(const SymmetricModel& model)
{
    const std::size_t n = model.n();
    const auto& alpha = model.alpha();
    std::vector<double> q(n + 1, 0.0);
    q[0] = 1.0;
    // ratio = C(n-h,k) / C(n,k) as a running product over k. Every factor shrinks as h grows and
    // plain left-to-right summation of nonnegative terms is monotone under rounding, so the computed
    // curve is nonincreasing without any cleanup.
    for (std::size_t h = 1; h <= n; ++h) {
        double ratio = 1.0;
        double sum = 0.0;
        for (std::size_t k = 0; k + h <= n; ++k) {
            if (k > 0) {
                ratio *= static_cast<double>(n - h - k + 1) / static_cast<double>(n - k + 1);
            }
            sum += alpha[k] * ratio;
        }
        q[h] = std::min(sum, 1.0);
    }
    return QCurve(std::move(q));
}

OutcomeWeights w_from_q(const QCurve& curve, Arithmetic arithmetic)
{
    const std::size_t n = curve.n();
    if (arithmetic == Arithmetic::exact) {
        if (n > exact::max_population) {
            throw ValidationError(
                fmt::format("exact arithmetic supports n <= {}, got {}", exact::max_population, n));
        }
        auto w = exact::w_from_q(exact::to_rational(curve.values()));
        return finish_weights(exact::to_double(w));
    }

    const auto& q = curve.values();
    std::vector<long double> w(n + 1, 0.0L);
    // row[i] = C(k, i), advanced one row per k
    std::vector<long double> row(n + 1, 0.0L);
    row[0] = 1.0L;
    w[0] = q[n];
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = k; i > 0; --i) {
            row[i] += row[i - 1];
        }
        CompensatedSum acc;
        acc.add(q[n - k]);
        for (std::size_t i = 0; i < k; ++i) {
            acc.add(-row[i] * w[i]);
        }
        w[k] = acc.value();
    }
    return finish_weights(std::vector<double>(w.begin(), w.end()));
}

SymmetricModel alpha_from_w(const OutcomeWeights& weights)
{
    const std::size_t n = weights.n();
    std::vector<double> alpha(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        alpha[k] = std::min(binomial(n, k) * weights[k], 1.0);
    }
    return SymmetricModel(std::move(alpha));
}

OutcomeWeights w_from_alpha(const SymmetricModel& model)
{
    const std::size_t n = model.n();
    std::vector<double> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        w[k] = model[k] / binomial(n, k);
    }
    return OutcomeWeights(std::move(w));
}

double marginal_zero_bruteforce(const SymmetricModel& model, std::span<const std::size_t> group)
{
    const std::size_t n = model.n();
    if (n > 16) {
        throw ValidationError(fmt::format("brute-force marginals enumerate 2^n outcomes; n = {} exceeds 16", n));
    }
    std::uint32_t group_mask = 0;
    for (std::size_t i : group) {
        if (i >= n) {
            throw ValidationError(fmt::format("group member {} outside population of {}", i, n));
        }
        group_mask |= std::uint32_t{1} << i;
    }
    CompensatedSum total;
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << n); ++x) {
        if ((x & group_mask) == 0) {
            auto k = static_cast<std::size_t>(std::popcount(x));
            total.add(model[k] / binomial(n, k));
        }
    }
    return static_cast<double>(total.value());
}

double marginal_zero_bruteforce(const SymmetricModel& model, std::size_t h)
{
    if (h > model.n()) {
        throw ValidationError(fmt::format("group size {} exceeds population {}", h, model.n()));
    }
    std::vector<std::size_t> group(h);
    std::iota(group.begin(), group.end(), std::size_t{0});
    return marginal_zero_bruteforce(model, group);
}

OutcomeVector sample_outcome(const SymmetricModel& model, Engine& engine)
{
    const std::size_t n = model.n();
    const auto& alpha = model.alpha();

    double u = uniform01(engine);
    std::size_t k = n + 1;
    double cumulative = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        cumulative += alpha[j];
        if (u < cumulative) {
            k = j;
            break;
        }
    }
    if (k > n) {
        // u fell into the rounding gap above the last partial sum
        k = n;
        while (alpha[k] == 0.0) {
            --k;
        }
    }

    std::vector<std::size_t> positions(n);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    std::vector<std::uint8_t> statuses(n, 0);
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(positions[i], positions[pick(engine)]);
        statuses[positions[i]] = 1;
    }
    return OutcomeVector(std::move(statuses));
}

OutcomeVector sample_outcome(const SymmetricModel& model, Seed seed)
{
    Engine engine(seed);
    return sample_outcome(model, engine);
}

} // namespace poolpart
