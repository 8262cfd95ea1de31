#include "promod/eventlog.hpp"

#include "promod/errors.hpp"

#include <algorithm>
#include <cctype>

namespace promod {

namespace {

// Minimal CSV reader: comma separator, double-quote quoting with "" escape,
// tolerant of CRLF and a missing final newline.
std::vector<std::vector<std::string>> parse_csv_rows(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    // strip UTF-8 BOM
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(row);
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"': in_quotes = true; row_started = true; break;
        case ',': end_field(); row_started = true; break;
        case '\r': break;
        case '\n':
            if (row_started || !field.empty() || !row.empty()) end_row();
            break;
        default: field += c; row_started = true; break;
        }
    }
    if (row_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

} // namespace

std::optional<std::chrono::sys_seconds> parse_timestamp(std::string_view value,
                                                        std::string_view format) {
    int year = -1, month = -1, day = -1, hour = 0, minute = 0, second = 0;
    std::size_t vi = 0;

    auto read_int = [&](std::size_t width, int& out) -> bool {
        if (vi + width > value.size()) return false;
        int v = 0;
        for (std::size_t j = 0; j < width; ++j) {
            char c = value[vi + j];
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
            v = v * 10 + (c - '0');
        }
        vi += width;
        out = v;
        return true;
    };

    std::size_t fi = 0;
    while (fi < format.size()) {
        char f = format[fi];
        if (std::isalpha(static_cast<unsigned char>(f))) {
            std::size_t run = 1;
            while (fi + run < format.size() && format[fi + run] == f) ++run;
            std::string_view token = format.substr(fi, run);
            bool ok;
            if (token == "dd") ok = read_int(2, day);
            else if (token == "MM") ok = read_int(2, month);
            else if (token == "yyyy") ok = read_int(4, year);
            else if (token == "HH") ok = read_int(2, hour);
            else if (token == "mm") ok = read_int(2, minute);
            else if (token == "ss") ok = read_int(2, second);
            else throw Error("unsupported timestamp format token: '" + std::string(token) + "'");
            if (!ok) return std::nullopt;
            fi += run;
        } else {
            if (vi >= value.size() || value[vi] != f) return std::nullopt;
            ++vi;
            ++fi;
        }
    }
    if (vi != value.size()) return std::nullopt;
    if (year < 0 || month < 0 || day < 0) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                                          std::chrono::day{unsigned(day)}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd} + std::chrono::hours{hour} + std::chrono::minutes{minute} +
           std::chrono::seconds{second};
}

EventLog parse_csv(std::string_view text, const AttributeMapping& mapping) {
    const auto rows = parse_csv_rows(text);
    if (rows.empty()) throw Error("CSV input has no header row");

    const auto& header = rows.front();
    auto column_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw MissingColumnError(name);
    };
    const std::size_t ts_col = column_index(mapping.timestamp_column);
    const std::size_t case_col = column_index(mapping.case_column);
    const std::size_t act_col = column_index(mapping.activity_column);
    const std::size_t res_col = column_index(mapping.resource_column);

    EventLog log;
    log.mapping = mapping;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto field = [&](std::size_t col, const std::string& colname) -> const std::string& {
            static const std::string empty;
            const std::string& v = col < row.size() ? row[col] : empty;
            if (v.empty()) throw EmptyFieldError(r, colname);
            return v;
        };
        EventRecord rec;
        const std::string& ts = field(ts_col, mapping.timestamp_column);
        auto parsed = parse_timestamp(ts, mapping.timestamp_format);
        if (!parsed) throw TimestampParseError(r, ts);
        rec.timestamp = *parsed;
        rec.case_id = field(case_col, mapping.case_column);
        rec.activity = field(act_col, mapping.activity_column);
        rec.resource = field(res_col, mapping.resource_column);
        log.records.push_back(std::move(rec));
    }
    return log;
}

std::vector<Trace> extract_traces(const EventLog& log,
                                  const std::map<std::string, std::string>* abbreviations) {
    std::map<std::string, std::size_t> case_slot;
    std::vector<std::vector<std::size_t>> grouped; // record indices per case
    std::vector<std::string> case_order;

    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& id = log.records[i].case_id;
        auto it = case_slot.find(id);
        if (it == case_slot.end()) {
            it = case_slot.emplace(id, grouped.size()).first;
            grouped.emplace_back();
            case_order.push_back(id);
        }
        grouped[it->second].push_back(i);
    }

    std::vector<Trace> traces;
    traces.reserve(grouped.size());
    for (std::size_t g = 0; g < grouped.size(); ++g) {
        auto& idx = grouped[g];
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return log.records[a].timestamp < log.records[b].timestamp;
        });
        Trace t;
        t.case_id = case_order[g];
        t.events.reserve(idx.size());
        for (std::size_t i : idx) {
            const std::string& activity = log.records[i].activity;
            if (abbreviations) {
                auto it = abbreviations->find(activity);
                t.events.push_back(it != abbreviations->end() ? it->second : activity);
            } else {
                t.events.push_back(activity);
            }
        }
        traces.push_back(std::move(t));
    }
    return traces;
}

LogSummary summarize(const EventLog& log) {
    LogSummary s;
    s.event_count = log.records.size();
    std::map<std::string, std::size_t> case_sizes;
    for (const auto& rec : log.records) {
        ++s.activity_counts[rec.activity];
        ++s.resource_counts[rec.resource];
        ++case_sizes[rec.case_id];
    }
    s.case_count = case_sizes.size();
    for (const auto& [id, n] : case_sizes) ++s.trace_length_histogram[n];
    return s;
}

std::vector<Trace> filter_traces(const std::vector<Trace>& traces, const FilterPolicy& policy) {
    std::map<std::vector<std::string>, std::size_t> variant_counts;
    for (const auto& t : traces) ++variant_counts[t.events];

    std::vector<Trace> kept;
    for (const auto& t : traces) {
        bool whitelisted =
            policy.variant_whitelist && policy.variant_whitelist->count(t.events) > 0;
        if (whitelisted || variant_counts[t.events] >= policy.min_variant_frequency)
            kept.push_back(t);
    }
    return kept;
}

std::string traces_to_text(const std::vector<Trace>& traces) {
    std::string out;
    for (const auto& t : traces) {
        for (std::size_t i = 0; i < t.events.size(); ++i) {
            if (i) out += ' ';
            out += t.events[i];
        }
        out += '\n';
    }
    return out;
}

const std::map<std::string, std::string>& default_abbreviations() {
    static const std::map<std::string, std::string> m = {
        {"New reservation", "Newreservation"},
        {"Check In", "CheckIn"},
        {"Extra service added", "Extraserviceadded"},
        {"Bill payment", "Billpayment"},
        {"Check Out", "CheckOut"},
    };
    return m;
}

const std::map<std::string, std::string>& default_short_names() {
    static const std::map<std::string, std::string> m = {
        {"Newreservation", "Newres"}, {"CheckIn", "ChIn"},   {"Extraserviceadded", "Extra"},
        {"Billpayment", "Bill"},      {"CheckOut", "ChOut"},
    };
    return m;
}

} // namespace promod
