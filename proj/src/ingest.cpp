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
#include "poolpart/error.h"

#include <fmt/core.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>

namespace poolpart
{

namespace
{

constexpr std::size_t max_reported_errors = 20;

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view strip_cr(std::string_view line)
{
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

template <class Int>
bool parse_int(std::string_view text, Int& value)
{
    if (text.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size();
}

/// Reads exactly `digits` decimal digits at pos.
bool fixed_digits(std::string_view text, std::size_t& pos, std::size_t digits, int& value)
{
    if (pos + digits > text.size()) {
        return false;
    }
    for (std::size_t i = 0; i < digits; ++i) {
        if (text[pos + i] < '0' || text[pos + i] > '9') {
            return false;
        }
    }
    bool ok = parse_int(text.substr(pos, digits), value);
    pos += digits;
    return ok;
}

bool expect(std::string_view text, std::size_t& pos, char c)
{
    if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

std::vector<SpecimenStatus> parse_status_tokens(std::string_view tokens, bool allow_inconclusive)
{
    std::vector<SpecimenStatus> statuses;
    statuses.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        switch (tokens[i]) {
        case 'N':
            statuses.push_back(SpecimenStatus::negative);
            break;
        case 'P':
            statuses.push_back(SpecimenStatus::positive);
            break;
        case 'I':
            if (!allow_inconclusive) {
                throw ValidationError(fmt::format("inconclusive status at position {}", i));
            }
            statuses.push_back(SpecimenStatus::inconclusive);
            break;
        default:
            throw ValidationError(fmt::format("unknown status token '{}' at position {}", tokens[i], i));
        }
    }
    return statuses;
}

[[noreturn]] void throw_row_errors(const std::vector<std::string>& errors, std::string_view what)
{
    std::string message = fmt::format("{} malformed {} row(s):", errors.size(), what);
    for (std::size_t i = 0; i < std::min(errors.size(), max_reported_errors); ++i) {
        message += "\n  " + errors[i];
    }
    if (errors.size() > max_reported_errors) {
        message += fmt::format("\n  ... and {} more", errors.size() - max_reported_errors);
    }
    throw ValidationError(message);
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open {}", path.string()));
    }
    return in;
}

} // namespace

Timestamp parse_timestamp(std::string_view text)
{
    using namespace std::chrono;
    auto fail = [&]() -> Timestamp {
        throw ValidationError(fmt::format("'{}' is not an ISO-8601 timestamp", text));
    };

    std::size_t pos = 0;
    int y = 0, mo = 0, d = 0;
    if (!fixed_digits(text, pos, 4, y) || !expect(text, pos, '-') || !fixed_digits(text, pos, 2, mo) ||
        !expect(text, pos, '-') || !fixed_digits(text, pos, 2, d)) {
        return fail();
    }
    year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        return fail();
    }

    int hh = 0, mm = 0, ss = 0;
    std::int64_t fraction_us = 0;
    std::int64_t offset_minutes = 0;
    if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
        ++pos;
        if (!fixed_digits(text, pos, 2, hh) || !expect(text, pos, ':') || !fixed_digits(text, pos, 2, mm)) {
            return fail();
        }
        if (expect(text, pos, ':')) {
            if (!fixed_digits(text, pos, 2, ss)) {
                return fail();
            }
            if (expect(text, pos, '.')) {
                std::size_t digits = 0;
                std::int64_t scale = 100000;
                while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                    if (digits < 6) {
                        fraction_us += (text[pos] - '0') * scale;
                        scale /= 10;
                    }
                    ++digits;
                    ++pos;
                }
                if (digits == 0) {
                    return fail();
                }
            }
        }
        if (hh > 23 || mm > 59 || ss > 60) {
            return fail();
        }
        if (!expect(text, pos, 'Z') && pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            int sign = text[pos] == '+' ? 1 : -1;
            ++pos;
            int oh = 0, om = 0;
            if (!fixed_digits(text, pos, 2, oh)) {
                return fail();
            }
            expect(text, pos, ':');
            if (!fixed_digits(text, pos, 2, om) || oh > 23 || om > 59) {
                return fail();
            }
            offset_minutes = sign * (oh * 60 + om);
        }
    }
    if (pos != text.size()) {
        return fail();
    }

    auto instant = sys_days(date) + hours(hh) + minutes(mm) + seconds(ss) + microseconds(fraction_us) -
                   minutes(offset_minutes);
    return Timestamp{std::string(text), duration_cast<microseconds>(instant.time_since_epoch()).count()};
}

std::vector<PoolRecord> parse_pools(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError(fmt::format("pool file is empty; expected header '{}'", pool_csv_header));
    }
    std::string_view header = strip_cr(line);
    if (header.substr(0, 3) == "\xEF\xBB\xBF") {
        header.remove_prefix(3);
    }
    if (header != pool_csv_header) {
        throw ValidationError(fmt::format("pool file header is '{}'; expected '{}'", header, pool_csv_header));
    }

    std::vector<PoolRecord> records;
    std::vector<std::string> errors;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view row = strip_cr(line);
        if (row.empty()) {
            continue;
        }
        try {
            auto fields = split(row, ',');
            if (fields.size() != 4) {
                throw ValidationError(fmt::format("expected 4 fields, found {}", fields.size()));
            }
            PoolRecord record;
            record.pool_id = std::string(fields[0]);
            if (record.pool_id.empty()) {
                throw ValidationError("empty pool_id");
            }
            if (!fields[1].empty()) {
                record.run_timestamp = parse_timestamp(fields[1]);
            }
            if (!parse_int(fields[2], record.pool_size) || record.pool_size == 0) {
                throw ValidationError(fmt::format("pool_size '{}' is not a positive integer", fields[2]));
            }
            record.statuses = parse_status_tokens(fields[3], true);
            if (!record.statuses.empty() && record.statuses.size() != record.pool_size) {
                throw ValidationError(fmt::format("{} statuses for a pool of size {}", record.statuses.size(),
                                                  record.pool_size));
            }
            records.push_back(std::move(record));
        }
        catch (const ValidationError& e) {
            errors.push_back(fmt::format("line {}: {}", line_number, e.what()));
        }
    }
    if (!errors.empty()) {
        throw_row_errors(errors, "pool");
    }
    return records;
}

std::vector<PoolRecord> parse_pools(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_pools(in);
}

FilterResult filter_pools(std::vector<PoolRecord> records, const std::set<std::size_t>& excluded_sizes)
{
    FilterResult result;
    auto& report = result.report;
    report.pools_in = records.size();
    for (auto& record : records) {
        report.specimens_in += record.pool_size;
        std::size_t* rule = nullptr;
        if (!record.run_timestamp) {
            rule = &report.no_timestamp;
        }
        else if (excluded_sizes.contains(record.pool_size)) {
            rule = &report.excluded_size;
        }
        else if (std::find(record.statuses.begin(), record.statuses.end(), SpecimenStatus::inconclusive) !=
                 record.statuses.end()) {
            rule = &report.inconclusive;
        }
        else if (record.statuses.empty()) {
            rule = &report.missing_statuses;
        }
        if (rule) {
            ++*rule;
            report.specimens_dropped += record.pool_size;
        }
        else {
            result.records.push_back(std::move(record));
        }
    }
    return result;
}

BatchingResult impute_batches(std::vector<PoolRecord> records, std::size_t batch_size)
{
    if (batch_size == 0) {
        throw ValidationError("batch size must be at least 1");
    }
    for (const auto& record : records) {
        if (!record.run_timestamp) {
            throw ValidationError(fmt::format("pool {} has no run timestamp; filter before batching", record.pool_id));
        }
        if (record.statuses.size() != record.pool_size ||
            std::find(record.statuses.begin(), record.statuses.end(), SpecimenStatus::inconclusive) !=
                record.statuses.end()) {
            throw ValidationError(
                fmt::format("pool {} lacks complete binary statuses; filter before batching", record.pool_id));
        }
    }
    std::vector<std::pair<std::int64_t, std::size_t>> order(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        order[i] = {records[i].run_timestamp->microseconds, i};
    }
    // (time, input position) keys make the sort stable
    std::sort(order.begin(), order.end());

    BatchingResult result;
    result.pools_in = records.size();
    std::vector<std::uint8_t> current;
    std::vector<std::string> current_pools;
    current.reserve(batch_size);
    for (auto [time, i] : order) {
        const auto& record = records[i];
        result.specimens_in += record.pool_size;
        for (auto status : record.statuses) {
            if (current_pools.empty() || current_pools.back() != record.pool_id) {
                current_pools.push_back(record.pool_id);
            }
            current.push_back(status == SpecimenStatus::positive ? 1 : 0);
            if (current.size() == batch_size) {
                result.batches.push_back(
                    Batch{result.batches.size(), OutcomeVector(std::move(current)), std::move(current_pools)});
                current.clear();
                current_pools.clear();
            }
        }
    }
    result.remainder_specimens = current.size();

    // pools that straddle a batch boundary show up in two batches but count once
    std::size_t batched = 0;
    const std::string* previous = nullptr;
    for (const auto& batch : result.batches) {
        for (const auto& id : batch.source_pools) {
            if (!previous || *previous != id) {
                ++batched;
            }
            previous = &id;
        }
    }
    result.pools_batched = batched;
    return result;
}

std::string status_string(std::span<const SpecimenStatus> statuses)
{
    std::string out;
    out.reserve(statuses.size());
    for (auto s : statuses) {
        out += s == SpecimenStatus::negative ? 'N' : s == SpecimenStatus::positive ? 'P' : 'I';
    }
    return out;
}

std::string status_string(const OutcomeVector& statuses)
{
    std::string out;
    out.reserve(statuses.size());
    for (auto s : statuses.statuses()) {
        out += s ? 'P' : 'N';
    }
    return out;
}

void write_batches(std::ostream& out, std::span<const Batch> batches)
{
    out << batch_csv_header << '\n';
    for (const auto& batch : batches) {
        out << batch.index << ',' << status_string(batch.statuses) << '\n';
    }
}

void write_batches(const std::filesystem::path& path, std::span<const Batch> batches)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot write {}", path.string()));
    }
    write_batches(out, batches);
    if (!out) {
        throw IoError(fmt::format("failed writing {}", path.string()));
    }
}

std::vector<Batch> read_batches(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != batch_csv_header) {
        throw ValidationError(fmt::format("batch file must start with header '{}'", batch_csv_header));
    }
    std::vector<Batch> batches;
    std::vector<std::string> errors;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view row = strip_cr(line);
        if (row.empty()) {
            continue;
        }
        try {
            auto fields = split(row, ',');
            if (fields.size() != 2) {
                throw ValidationError(fmt::format("expected 2 fields, found {}", fields.size()));
            }
            Batch batch;
            if (!parse_int(fields[0], batch.index)) {
                throw ValidationError(fmt::format("batch_index '{}' is not an integer", fields[0]));
            }
            auto statuses = parse_status_tokens(fields[1], false);
            if (statuses.empty()) {
                throw ValidationError("batch has no specimens");
            }
            std::vector<std::uint8_t> binary(statuses.size());
            std::transform(statuses.begin(), statuses.end(), binary.begin(), [](SpecimenStatus s) {
                return static_cast<std::uint8_t>(s == SpecimenStatus::positive);
            });
            batch.statuses = OutcomeVector(std::move(binary));
            batches.push_back(std::move(batch));
        }
        catch (const ValidationError& e) {
            errors.push_back(fmt::format("line {}: {}", line_number, e.what()));
        }
    }
    if (!errors.empty()) {
        throw_row_errors(errors, "batch");
    }
    return batches;
}

std::vector<Batch> read_batches(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return read_batches(in);
}

} // namespace poolpart
