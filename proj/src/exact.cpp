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
#include "poolpart/exact.h"

namespace poolpart::exact
{

namespace
{

using boost::multiprecision::cpp_int;

cpp_int choose(std::size_t n, std::size_t k)
{
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    cpp_int result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

} // namespace

std::vector<Rational> to_rational(std::span<const double> values)
{
    return std::vector<Rational>(values.begin(), values.end());
}

std::vector<double> to_double(std::span<const Rational> values)
{
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) {
        out.push_back(v.convert_to<double>());
    }
    return out;
}

std::vector<Rational> q_from_alpha(std::span<const Rational> alpha)
{
    const std::size_t n = alpha.size() - 1;
    std::vector<Rational> q(n + 1);
    for (std::size_t h = 0; h <= n; ++h) {
        Rational sum = 0;
        for (std::size_t k = 0; k + h <= n; ++k) {
            if (alpha[k] != 0) {
                sum += alpha[k] * Rational(choose(n - h, k), choose(n, k));
            }
        }
        q[h] = sum;
    }
    return q;
}

std::vector<Rational> w_from_q(std::span<const Rational> q)
{
    const std::size_t n = q.size() - 1;
    std::vector<Rational> w(n + 1);
    std::vector<cpp_int> row(n + 1, 0);
    row[0] = 1;
    w[0] = q[n];
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = k; i > 0; --i) {
            row[i] += row[i - 1];
        }
        Rational value = q[n - k];
        for (std::size_t i = 0; i < k; ++i) {
            value -= row[i] * w[i];
        }
        w[k] = value;
    }
    return w;
}

std::vector<Rational> alpha_from_w(std::span<const Rational> w)
{
    const std::size_t n = w.size() - 1;
    std::vector<Rational> alpha(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        alpha[k] = w[k] * choose(n, k);
    }
    return alpha;
}

std::vector<Rational> w_from_alpha(std::span<const Rational> alpha)
{
    const std::size_t n = alpha.size() - 1;
    std::vector<Rational> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        w[k] = alpha[k] / Rational(choose(n, k));
    }
    return w;
}

} // namespace poolpart::exact
