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
#include "poolpart/ingest.h"
#include "poolpart/serialize.h"

#include "helpers.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace poolpart;

namespace
{

struct CliResult {
    int code = -1;
    std::string out;
};

class TestCli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        m_dir = std::filesystem::temp_directory_path() /
                ("poolpart_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::remove_all(m_dir);
        std::filesystem::create_directories(m_dir);
    }

    void TearDown() override
    {
        std::filesystem::remove_all(m_dir);
    }

    CliResult run(const std::string& arguments, const std::string& environment = "") const
    {
        std::string command =
            environment + " " + std::string(POOLPART_CLI_PATH) + " " + arguments + " 2>" + path("stderr.txt");
        CliResult result;
        FILE* pipe = popen(command.c_str(), "r");
        char buffer[4096];
        std::size_t read;
        while ((read = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
            result.out.append(buffer, read);
        }
        int status = pclose(pipe);
        result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return result;
    }

    std::string path(const std::string& name) const
    {
        return (m_dir / name).string();
    }

    void write(const std::string& name, const std::string& text) const
    {
        std::ofstream(m_dir / name) << text;
    }

    std::string read(const std::string& name) const
    {
        std::ifstream in(m_dir / name);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    /// 40 pools of 8 with increasing timestamps, positives every seventh pool.
    void write_pools() const
    {
        std::string text = std::string(pool_csv_header) + "\n";
        for (int i = 0; i < 40; ++i) {
            text += "p" + std::to_string(i) + ",2020-05-01T10:" + (i < 10 ? "0" : "") + std::to_string(i) + ":00Z,8," +
                    (i % 7 == 0 ? "NNPNNNNN" : "NNNNNNNN") + "\n";
        }
        text += "x1,,8,NNNNNNNN\nx2,2020-05-01T11:00:00Z,5,NNNNN\nx3,2020-05-01T11:00:00Z,8,NNNNINNN\n";
        write("pools.csv", text);
    }

private:
    std::filesystem::path m_dir;
};

} // namespace

TEST_F(TestCli, helpAndUsage)
{
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("optimize --n -3").code, 2);
}

TEST_F(TestCli, ingestSummarizesConservation)
{
    write_pools();
    auto r = run("ingest --input " + path("pools.csv") + " --out " + path("batches.csv") + " --batch-size 80");
    ASSERT_EQ(r.code, 0) << read("stderr.txt");
    auto summary = Json::parse(r.out);
    EXPECT_EQ(summary["pools_in"], 43);
    EXPECT_EQ(summary["specimens_in"], 341);
    EXPECT_EQ(summary["dropped"]["no_timestamp"], 1);
    EXPECT_EQ(summary["dropped"]["excluded_size"], 1);
    EXPECT_EQ(summary["dropped"]["inconclusive"], 1);
    EXPECT_EQ(summary["batches"], 4);
    EXPECT_EQ(summary["remainder_specimens"], 0);
    auto batches = read_batches(std::filesystem::path(path("batches.csv")));
    ASSERT_EQ(batches.size(), 4u);
    EXPECT_EQ(batches[0].statuses.nnz(), 2u);
}

TEST_F(TestCli, ingestExitCodes)
{
    EXPECT_EQ(run("ingest --input " + path("missing.csv") + " --out " + path("b.csv")).code, 3);
    write("bad.csv", "pool,time\n");
    EXPECT_EQ(run("ingest --input " + path("bad.csv") + " --out " + path("b.csv")).code, 2);
    write_pools();
    EXPECT_EQ(run("ingest --input " + path("pools.csv") + " --out " + path("b.csv") + " --batch-size 0").code, 2);
}

TEST_F(TestCli, fitOptimizeSimulatePipeline)
{
    write_pools();
    ASSERT_EQ(run("ingest --input " + path("pools.csv") + " --out " + path("batches.csv") + " --batch-size 16").code,
              0);
    auto fit = run("fit --input " + path("batches.csv") + " --family symmetric --out " + path("model.json"));
    ASSERT_EQ(fit.code, 0) << read("stderr.txt");
    auto model = model_from_json(read_json(path("model.json")));
    EXPECT_EQ(model.n(), 16u);

    auto opt = run("optimize --model " + path("model.json") + " --out " + path("opt.json"));
    ASSERT_EQ(opt.code, 0) << read("stderr.txt");
    auto solution = read_json(path("opt.json"));
    auto mu = multiplicity_from_json(solution);
    EXPECT_EQ(mu.target(), 16u);
    EXPECT_EQ(solution["pools"].size(), mu.parts());
    EXPECT_NEAR(solution["efficiency"].get<double>(), 16.0 / solution["expected_tests"].get<double>(), 1e-12);

    auto sim = run("simulate --model " + path("model.json") + " --multiplicity " + path("opt.json") +
                   " --trials 200 --seed 4 --trials-csv " + path("trials.csv"));
    ASSERT_EQ(sim.code, 0) << read("stderr.txt");
    EXPECT_EQ(Json::parse(sim.out)["trials"], 200);
    EXPECT_EQ(read("trials.csv").substr(0, 22), "trial,tests,efficiency");

    auto replay = run("simulate --batches " + path("batches.csv") + " --multiplicity " + path("opt.json") +
                      " --randomize off --aggregate per-batch");
    ASSERT_EQ(replay.code, 0) << read("stderr.txt");
    EXPECT_EQ(Json::parse(replay.out)["trials"], 1);
}

TEST_F(TestCli, optimizeIidShortcut)
{
    auto r = run("optimize --prevalence 0.01624 --n 80 --strategy iid");
    ASSERT_EQ(r.code, 0) << read("stderr.txt");
    auto json = Json::parse(r.out);
    EXPECT_EQ(json["multiplicity"].dump(), R"({"8":10})");
    EXPECT_NEAR(json["efficiency"].get<double>(), 4.04, 0.005);
    EXPECT_EQ(run("optimize --prevalence 0.01624 --n 80 --strategy team8 --max-pool-size 81").code, 2);
    EXPECT_EQ(run("optimize --prevalence 0.01624").code, 2);
    EXPECT_EQ(run("optimize --prevalence 1.5 --n 8").code, 2);
}

TEST_F(TestCli, optimizeExitCodes)
{
    EXPECT_EQ(run("optimize --model " + path("missing.json")).code, 3);
    write("broken.json", "{");
    EXPECT_EQ(run("optimize --model " + path("broken.json")).code, 2);
    write("costs.json", R"({"c": [null, 1.0]})");
    EXPECT_EQ(run("optimize --costs " + path("costs.json") + " --n 3").code, 4);
    auto r = run("optimize --costs " + path("costs.json") + " --n 4");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["multiplicity"].dump(), R"({"2":2})");
}

TEST_F(TestCli, simulateValidation)
{
    write("mu.json", R"({"8": 10})");
    write("model.json", to_json(iid_model(40, 0.1)).dump());
    EXPECT_EQ(run("simulate --multiplicity " + path("mu.json")).code, 2);
    EXPECT_EQ(run("simulate --model " + path("model.json") + " --multiplicity " + path("mu.json")).code, 2);
    EXPECT_EQ(run("simulate --model " + path("model.json") + " --batches x --multiplicity " + path("mu.json")).code,
              2);
}

TEST_F(TestCli, reportIsReproducible)
{
    write_pools();
    ASSERT_EQ(run("ingest --input " + path("pools.csv") + " --out " + path("batches.csv") + " --batch-size 16").code,
              0);
    std::string args = "report --batches " + path("batches.csv") + " --batch-size 16 --trials 300 --seed 9";
    ASSERT_EQ(run(args + " --out " + path("a.json") + " --plot-dir " + path("plots")).code, 0) << read("stderr.txt");
    ASSERT_EQ(run(args + " --out " + path("b.json")).code, 0);
    EXPECT_EQ(read("a.json"), read("b.json"));
    EXPECT_TRUE(std::filesystem::exists(path("plots/q.csv")));
    auto json = read_json(path("a.json"));
    EXPECT_EQ(json["strategies"].size(), 4u);
    EXPECT_EQ(run("report --batches " + path("batches.csv") + " --batch-size 80").code, 2);
}

TEST_F(TestCli, environmentDefaults)
{
    write_pools();
    auto r = run("ingest --input " + path("pools.csv") + " --out " + path("batches.csv"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["batches"], 4);
    auto env = run("ingest --input " + path("pools.csv") + " --out " + path("batches16.csv"), "POOLPART_BATCH_SIZE=16");
    ASSERT_EQ(env.code, 0);
    EXPECT_EQ(Json::parse(env.out)["batches"], 20);
    auto flag = run("ingest --input " + path("pools.csv") + " --out " + path("batches8.csv") + " --batch-size 8",
                    "POOLPART_BATCH_SIZE=16");
    EXPECT_EQ(Json::parse(flag.out)["batches"], 40);
}
