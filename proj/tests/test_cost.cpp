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
#include "poolpart/cost.h"
#include "poolpart/error.h"
#include "poolpart/optimize.h"

#include "helpers.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace poolpart;

namespace
{

GroupFamily consecutive_groups(std::size_t groups, std::size_t size)
{
    std::vector<std::vector<std::size_t>> out(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        out[g].resize(size);
        std::iota(out[g].begin(), out[g].end(), g * size);
    }
    return GroupFamily(std::move(out));
}

/// Random family of disjoint groups over a shuffled subset of 0..n-1.
GroupFamily random_family(std::size_t n, Engine& engine)
{
    std::vector<std::size_t> members(n);
    std::iota(members.begin(), members.end(), std::size_t{0});
    std::shuffle(members.begin(), members.end(), engine);
    std::uniform_int_distribution<std::size_t> keep(1, n);
    members.resize(keep(engine));
    std::vector<std::vector<std::size_t>> groups;
    std::size_t i = 0;
    while (i < members.size()) {
        std::uniform_int_distribution<std::size_t> len(1, members.size() - i);
        std::size_t l = len(engine);
        groups.emplace_back(members.begin() + i, members.begin() + i + l);
        i += l;
    }
    return GroupFamily(std::move(groups));
}

} // namespace

TEST(TestExpectedTestsGroup, singletonAlwaysOneTest)
{
    auto q = q_from_alpha(iid_model(10, 0.3));
    EXPECT_EQ(expected_tests_group(q, 1), 1.0);
}

TEST(TestExpectedTestsGroup, groupThatCannotBePositive)
{
    auto q = q_from_alpha(iid_model(6, 0.0));
    EXPECT_EQ(expected_tests_group(q, 5), 1.0);
}

TEST(TestExpectedTestsGroup, sizeEightAtLabPrevalence)
{
    auto q = q_from_alpha(iid_model(80, 0.01624));
    // 1 + 8 (1 - 0.98376^8), evaluated at 30 digits
    EXPECT_NEAR(expected_tests_group(q, 8), 1.982163155548329, 1e-12);
    EXPECT_NEAR(8.0 / expected_tests_group(q, 8), 4.04, 0.005);
}

TEST(TestExpectedTestsGroup, rangeErrors)
{
    auto q = q_from_alpha(iid_model(4, 0.3));
    EXPECT_THROW(expected_tests_group(q, 0), ValidationError);
    EXPECT_THROW(expected_tests_group(q, 5), ValidationError);
}

TEST(TestCostVector, examples)
{
    EXPECT_EQ(cost_vector(QCurve({1, 1, 1, 1})).values(), (std::vector<double>{1, 1, 1}));
    EXPECT_EQ(cost_vector(QCurve({1, 0.5, 0})).values(), (std::vector<double>{1, 3}));

    auto cv = cost_vector(q_from_alpha(iid_model(80, 0.01624)));
    EXPECT_EQ(cv.max_size(), 80u);
    EXPECT_EQ(cv(1), 1.0);
    EXPECT_NEAR(cv(8), 1.982163155548329, 1e-12);
}

TEST(TestCostVector, truncation)
{
    auto q = q_from_alpha(iid_model(80, 0.01624));
    auto cv = cost_vector(q, 32);
    EXPECT_EQ(cv.max_size(), 32u);
    EXPECT_THROW(cv(33), ValidationError);
    EXPECT_THROW(cost_vector(q, 81), ValidationError);
    EXPECT_THROW(cost_vector(q, 0), ValidationError);
}

TEST(TestCostVector, rejectsNaN)
{
    EXPECT_THROW(CostVector({1.0, std::nan("")}), ValidationError);
    EXPECT_THROW(CostVector({}), ValidationError);
}

TEST(TestGroupFamily, validation)
{
    EXPECT_THROW(GroupFamily({}), ValidationError);
    EXPECT_THROW(GroupFamily({{0, 1}, {}}), ValidationError);
    EXPECT_THROW(GroupFamily({{0, 1}, {1, 2}}), ValidationError);
    GroupFamily f({{0, 1}, {2}});
    EXPECT_TRUE(f.is_pooling_of(3));
    EXPECT_FALSE(f.is_pooling_of(4));
    EXPECT_FALSE(GroupFamily({{0, 3}}).is_pooling_of(2));
}

TEST(TestExpectedTestsPartition, tenPoolsOfEight)
{
    std::vector<double> c(8, 1.0);
    c[7] = 1.98210;
    auto total = expected_tests_partition(CostVector(c), consecutive_groups(10, 8));
    EXPECT_NEAR(total, 19.8210, 1e-12);
    EXPECT_NEAR(efficiency(80, total), 4.04, 0.005);
}

TEST(TestExpectedTestsPartition, individualTesting)
{
    EXPECT_EQ(expected_tests_partition(CostVector({1.0}), consecutive_groups(5, 1)), 5.0);
}

TEST(TestExpectedTestsPartition, mixedSizes)
{
    EXPECT_EQ(expected_tests_partition(CostVector({1, 3}), GroupFamily({{0, 1}, {2}})), 4.0);
    EXPECT_THROW(expected_tests_partition(CostVector({1, 3}), GroupFamily({{0, 1, 2}})), ValidationError);
}

TEST(TestEfficiency, examples)
{
    EXPECT_EQ(efficiency(80, 80), 1.0);
    EXPECT_NEAR(efficiency(80, 19.8210), 4.04, 0.005);
    EXPECT_NEAR(efficiency(8, 2.0224), 3.96, 0.005);
    EXPECT_THROW(efficiency(8, 0.0), ValidationError);
}

TEST(TestCostProperties, invariantUnderRelabeling)
{
    Engine engine(31);
    auto cv = cost_vector(q_from_alpha(fixtures::random_model(40, engine)));
    for (int trial = 0; trial < 200; ++trial) {
        auto f = random_family(40, engine);
        std::vector<std::size_t> perm(40);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), engine);
        auto groups = f.groups();
        for (auto& g : groups) {
            for (auto& i : g) {
                i = perm[i];
            }
        }
        GroupFamily relabeled(std::move(groups));
        EXPECT_EQ(expected_tests_partition(cv, f), expected_tests_partition(cv, relabeled));
        EXPECT_NEAR(expected_tests_partition(cv, f), partition_cost(cv, MultiplicityFunction::of(f)), 1e-12);
    }
}

TEST(TestCostProperties, additiveOverDisjointFamilies)
{
    Engine engine(8);
    // dyadic costs keep every partial sum exact
    std::vector<double> dyadic(30);
    for (auto& c : dyadic) {
        c = static_cast<double>(engine() % 4096) / 1024.0;
    }
    CostVector exact_costs(dyadic);
    auto dorfman = cost_vector(q_from_alpha(fixtures::random_model(30, engine)));
    for (int trial = 0; trial < 200; ++trial) {
        auto whole = random_family(30, engine);
        std::vector<std::vector<std::size_t>> left, right;
        for (std::size_t g = 0; g < whole.size(); ++g) {
            (g % 2 ? left : right).push_back(whole.groups()[g]);
        }
        if (left.empty() || right.empty()) {
            continue;
        }
        GroupFamily a(left), b(right);
        EXPECT_EQ(expected_tests_partition(exact_costs, whole),
                  expected_tests_partition(exact_costs, a) + expected_tests_partition(exact_costs, b));
        EXPECT_NEAR(expected_tests_partition(dorfman, whole),
                    expected_tests_partition(dorfman, a) + expected_tests_partition(dorfman, b), 1e-12);
    }
}

TEST(TestCostProperties, dorfmanCostsBoundedByRetestingEveryone)
{
    Engine engine(1);
    for (int trial = 0; trial < 30; ++trial) {
        auto q = q_from_alpha(fixtures::random_model(1 + trial * 4, engine));
        auto cv = cost_vector(q);
        EXPECT_EQ(cv(1), 1.0);
        for (std::size_t i = 2; i <= cv.max_size(); ++i) {
            EXPECT_GE(cv(i), 1.0);
            EXPECT_LE(cv(i), 1.0 + static_cast<double>(i));
            EXPECT_EQ(cv(i), 1.0 + static_cast<double>(i) * (1.0 - q[i]));
        }
    }
}
