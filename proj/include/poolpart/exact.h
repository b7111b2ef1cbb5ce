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
#ifndef POOLPART_EXACT_H
#define POOLPART_EXACT_H

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <vector>

/// Rational-arithmetic versions of the representation conversions, for n <= 100.
namespace poolpart::exact
{

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t max_population = 100;

std::vector<Rational> to_rational(std::span<const double> values);
std::vector<double> to_double(std::span<const Rational> values);

std::vector<Rational> q_from_alpha(std::span<const Rational> alpha);

/// Unvalidated recursion output; entries may be negative when q is not a valid representation.
std::vector<Rational> w_from_q(std::span<const Rational> q);

std::vector<Rational> alpha_from_w(std::span<const Rational> w);
std::vector<Rational> w_from_alpha(std::span<const Rational> alpha);

} // namespace poolpart::exact

#endif // POOLPART_EXACT_H
