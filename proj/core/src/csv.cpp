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

#include "qvuln/detail/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "qvuln/error.hpp"

namespace qvuln::csv {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError(file, 1, "missing column '" + std::string(name) + "'");
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    Table table;
    table.file = path.string();
    std::string line;
    std::size_t number = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto cells = split(body, ',');
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw ParseError(table.file, number,
                             "expected " + std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(cells.size()));
        table.rows.push_back({number, std::move(cells)});
    }
    if (!have_header) throw ParseError(table.file, number, "empty file");
    return table;
}

void require_header(const Table& table, std::initializer_list<std::string_view> expected) {
    bool same = table.header.size() == expected.size();
    std::size_t i = 0;
    for (auto name : expected) {
        if (!same) break;
        same = table.header[i++] == name;
    }
    if (!same) {
        std::string want;
        for (auto name : expected) want += (want.empty() ? "" : ",") + std::string(name);
        throw ParseError(table.file, 1, "header mismatch, expected '" + want + "'");
    }
}

double to_double(const Table& table, const Row& row, std::size_t col) {
    const std::string& cell = row.cells.at(col);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE)
        throw ParseError(table.file, row.line, "not a number in column '" + table.header[col] + "': '" + cell + "'");
    return value;
}

long long to_int(const Table& table, const Row& row, std::size_t col) {
    const std::string& cell = row.cells.at(col);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
        throw ParseError(table.file, row.line,
                         "not an integer in column '" + table.header[col] + "': '" + cell + "'");
    return value;
}

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string fmt_exact(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace qvuln::csv
