// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_TEXT_H
#define LNME_TEXT_H

#include <lnme/error.h>

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lnme::text {

/// Splits a document into lines on LF. A trailing CR is dropped from each line
/// and a final empty line (trailing newline) is not reported.
inline std::vector<std::string_view> split_lines(std::string_view document)
{
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < document.size()) {
        std::size_t end = document.find('\n', pos);
        if (end == std::string_view::npos) end = document.size();
        std::string_view line = document.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = end + 1;
    }
    return lines;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline bool is_blank(std::string_view line) { return trim(line).empty(); }

/// Comma split without quoting support; fields are trimmed.
inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = line.find(',', pos);
        if (end == std::string_view::npos) {
            fields.push_back(trim(line.substr(pos)));
            break;
        }
        fields.push_back(trim(line.substr(pos, end - pos)));
        pos = end + 1;
    }
    return fields;
}

inline std::optional<std::int64_t> parse_int(std::string_view s)
{
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    std::int64_t value{0};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

inline std::int64_t require_int(std::string_view s, std::string_view what)
{
    auto value = parse_int(s);
    if (!value) throw DataError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    return *value;
}

} // namespace lnme::text

#endif // LNME_TEXT_H
