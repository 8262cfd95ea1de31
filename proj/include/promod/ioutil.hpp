#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace promod {

std::string read_file(const std::string& path);

// Writes to a temporary sibling file and renames it over the target, so a
// crash never leaves a half-written artifact.
void write_file_atomic(const std::string& path, std::string_view content);

std::string_view trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view s);

} // namespace promod
