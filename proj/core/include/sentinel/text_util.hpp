#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel::text {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Full-string parse; nullopt on trailing garbage, empty input or overflow.
std::optional<double> parse_double(std::string_view s);
std::optional<unsigned long long> parse_u64(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace sentinel::text
