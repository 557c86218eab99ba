// Copyright 2026 The qvuln Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Small CSV and number-formatting helpers shared by the loaders and exporters.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace qvuln::csv {

struct Row {
    std::size_t line = 0;
    std::vector<std::string> cells;
};

struct Table {
    std::string file;
    std::vector<std::string> header;
    std::vector<Row> rows;

    /// Column index by name; throws ParseError at the header line if missing.
    std::size_t column(std::string_view name) const;
};

/// Comma-separated, first non-blank line is the header, '#' starts a comment line.
Table read(const std::filesystem::path& path);

/// Throws ParseError unless the header equals `expected` exactly.
void require_header(const Table& table, std::initializer_list<std::string_view> expected);

double to_double(const Table& table, const Row& row, std::size_t col);
long long to_int(const Table& table, const Row& row, std::size_t col);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Six significant figures, for CSV exports.
std::string fmt(double value);
/// Shortest representation that parses back to the same double.
std::string fmt_exact(double value);

/// Opens for writing, creating parent directories; throws Error on failure.
std::ofstream open_out(const std::filesystem::path& path);

}  // namespace qvuln::csv
