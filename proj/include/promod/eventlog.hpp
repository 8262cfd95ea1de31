#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace promod {

/// Which CSV column plays which role, plus the timestamp pattern.
/// Pattern tokens: dd MM yyyy HH mm ss; everything else matches literally.
struct AttributeMapping {
    std::string timestamp_column = "DATETIME";
    std::string case_column = "TASKID";
    std::string activity_column = "TASKNAME";
    std::string resource_column = "USERNAME";
    std::string timestamp_format = "dd.MM.yyyy HH:mm:ss";
};

struct EventRecord {
    std::chrono::sys_seconds timestamp;
    std::string case_id;
    std::string activity;
    std::string resource;
};

struct EventLog {
    std::vector<EventRecord> records; // file order
    AttributeMapping mapping;
};

struct Trace {
    std::string case_id;
    std::vector<std::string> events;
};

struct LogSummary {
    std::size_t event_count = 0;
    std::size_t case_count = 0;
    std::map<std::string, std::size_t> activity_counts;
    std::map<std::string, std::size_t> resource_counts;
    std::map<std::size_t, std::size_t> trace_length_histogram;
};

struct FilterPolicy {
    std::size_t min_variant_frequency = 1;
    std::optional<std::set<std::vector<std::string>>> variant_whitelist;
};

/// Parses a pattern-formatted timestamp; nullopt when the value does not
/// match or names an impossible calendar date.
std::optional<std::chrono::sys_seconds> parse_timestamp(std::string_view value,
                                                        std::string_view format);

/// Parses a UTF-8 CSV event log (header row required, RFC-style quoting).
/// Rows are numbered from 1 in error reports.
EventLog parse_csv(std::string_view text, const AttributeMapping& mapping);

/// Groups records into one trace per case id, ordered by first appearance.
/// Events are sorted by timestamp; equal timestamps keep file order.
std::vector<Trace> extract_traces(const EventLog& log,
                                  const std::map<std::string, std::string>* abbreviations = nullptr);

LogSummary summarize(const EventLog& log);

/// Keeps a trace iff its variant occurs at least min_variant_frequency times
/// in the input or is whitelisted. Input order is preserved.
std::vector<Trace> filter_traces(const std::vector<Trace>& traces, const FilterPolicy& policy);

/// One line per trace, space-separated event names.
std::string traces_to_text(const std::vector<Trace>& traces);

/// Activity-name compaction used throughout: raw log names to the
/// single-token labels the models use, and those labels to short display
/// names.
const std::map<std::string, std::string>& default_abbreviations();
const std::map<std::string, std::string>& default_short_names();

} // namespace promod
