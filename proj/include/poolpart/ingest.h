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
#ifndef POOLPART_INGEST_H
#define POOLPART_INGEST_H

#include "poolpart/model.h"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poolpart
{

enum class SpecimenStatus : std::uint8_t
{
    negative,
    positive,
    inconclusive,
};

/// ISO-8601 run timestamp; ordered by the instant it denotes.
struct Timestamp {
    std::string text;
    std::int64_t microseconds = 0; ///< since 1970-01-01T00:00:00Z

    bool operator==(const Timestamp& other) const
    {
        return microseconds == other.microseconds;
    }
    std::strong_ordering operator<=>(const Timestamp& other) const
    {
        return microseconds <=> other.microseconds;
    }
};

/**
 * Accepts YYYY-MM-DD, optionally followed by T or a space and HH:MM[:SS[.ffffff]], optionally
 * followed by Z or a +HH:MM / -HH:MM offset. Times without an offset are read as UTC.
 */
Timestamp parse_timestamp(std::string_view text);

struct PoolRecord {
    std::string pool_id;
    std::optional<Timestamp> run_timestamp;
    std::size_t pool_size = 0;
    std::vector<SpecimenStatus> statuses; ///< empty when the row carries no statuses

    bool operator==(const PoolRecord&) const = default;
};

/// A fixed-size cohort of specimens with fully observed binary statuses.
struct Batch {
    std::size_t index = 0;
    OutcomeVector statuses;
    std::vector<std::string> source_pools;

    std::size_t size() const
    {
        return statuses.size();
    }
};

inline constexpr std::string_view pool_csv_header  = "pool_id,run_timestamp,pool_size,statuses";
inline constexpr std::string_view batch_csv_header = "batch_index,statuses";

/**
 * @brief Read pool records from CSV.
 *
 * The header must be exactly pool_csv_header. Statuses are a token string over {N, P, I}. All
 * malformed rows are collected and reported together, with line numbers, in one ValidationError.
 * A missing file raises IoError.
 */
std::vector<PoolRecord> parse_pools(const std::filesystem::path& path);
std::vector<PoolRecord> parse_pools(std::istream& in);

struct FilterReport {
    std::size_t pools_in            = 0;
    std::size_t specimens_in        = 0;
    std::size_t no_timestamp        = 0;
    std::size_t excluded_size       = 0;
    std::size_t inconclusive        = 0;
    std::size_t missing_statuses    = 0;
    std::size_t specimens_dropped   = 0;
};

struct FilterResult {
    std::vector<PoolRecord> records;
    FilterReport report;
};

/**
 * Drop pools without a timestamp, pools whose size is excluded, and pools with any inconclusive
 * (or absent) status. Each dropped pool is counted under the first rule it violates, in that order.
 */
FilterResult filter_pools(std::vector<PoolRecord> records, const std::set<std::size_t>& excluded_sizes = {5});

struct BatchingResult {
    std::vector<Batch> batches;
    std::size_t specimens_in        = 0;
    std::size_t pools_in            = 0;
    std::size_t pools_batched       = 0; ///< pools with at least one specimen inside a complete batch
    std::size_t remainder_specimens = 0;
};

/**
 * Sort by run timestamp (stable), concatenate the specimens in pool order and cut consecutive
 * batches of batch_size. A trailing partial batch is discarded and counted. Records must already
 * be filtered; anything without a timestamp or with a non-binary status raises ValidationError.
 */
BatchingResult impute_batches(std::vector<PoolRecord> records, std::size_t batch_size);

void write_batches(std::ostream& out, std::span<const Batch> batches);
void write_batches(const std::filesystem::path& path, std::span<const Batch> batches);

/// Reads batch_csv_header files; only N and P tokens are accepted.
std::vector<Batch> read_batches(std::istream& in);
std::vector<Batch> read_batches(const std::filesystem::path& path);

/// Status string over {N, P, I}.
std::string status_string(std::span<const SpecimenStatus> statuses);
std::string status_string(const OutcomeVector& statuses);

} // namespace poolpart

#endif // POOLPART_INGEST_H
