#pragma once

#include "promod/eventlog.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace promod {

/// Workbench-wide settings, loadable from a `key = value` file. CLI flags
/// override file values; file values override the built-in defaults.
/// Repeatable mapping keys use `long -> short` values:
///   abbreviation = New reservation -> Newreservation
///   short_name   = Newreservation -> Newres
///   counter      = Newreservation -> new_reservation
struct WorkbenchConfig {
    AttributeMapping mapping;
    std::map<std::string, std::string> abbreviations = default_abbreviations();
    std::map<std::string, std::string> short_names = default_short_names();
    std::map<std::string, std::string> counter_table;

    std::size_t k = 2;
    std::uint64_t seed = 1;
    std::size_t max_steps = 10000;
    std::size_t max_depth = 10000;
    std::int32_t counter_cap = 8;
};

WorkbenchConfig parse_config(std::string_view text);
WorkbenchConfig load_config_file(const std::string& path);

} // namespace promod
