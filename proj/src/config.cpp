#include "promod/config.hpp"

#include "promod/errors.hpp"
#include "promod/ioutil.hpp"

#include <charconv>

namespace promod {

namespace {

std::pair<std::string, std::string> parse_arrow(std::string_view value, std::size_t lineno) {
    auto pos = value.find("->");
    if (pos == std::string_view::npos)
        throw Error("config line " + std::to_string(lineno) + ": expected 'from -> to'");
    std::string from{trim(value.substr(0, pos))};
    std::string to{trim(value.substr(pos + 2))};
    if (from.empty() || to.empty())
        throw Error("config line " + std::to_string(lineno) + ": empty mapping side");
    return {from, to};
}

template <typename T>
T parse_number(std::string_view value, std::size_t lineno) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw Error("config line " + std::to_string(lineno) + ": expected a number, got '" +
                    std::string(value) + "'");
    return out;
}

} // namespace

WorkbenchConfig parse_config(std::string_view text) {
    WorkbenchConfig cfg;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = trim(lines[i]);
        const std::size_t lineno = i + 1;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error("config line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key{trim(line.substr(0, eq))};
        std::string_view value = trim(line.substr(eq + 1));

        if (key == "timestamp_column") cfg.mapping.timestamp_column = value;
        else if (key == "case_column") cfg.mapping.case_column = value;
        else if (key == "activity_column") cfg.mapping.activity_column = value;
        else if (key == "resource_column") cfg.mapping.resource_column = value;
        else if (key == "timestamp_format") cfg.mapping.timestamp_format = value;
        else if (key == "abbreviation") cfg.abbreviations.insert(parse_arrow(value, lineno));
        else if (key == "short_name") cfg.short_names.insert(parse_arrow(value, lineno));
        else if (key == "counter") cfg.counter_table.insert(parse_arrow(value, lineno));
        else if (key == "k") cfg.k = parse_number<std::size_t>(value, lineno);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value, lineno);
        else if (key == "max_steps") cfg.max_steps = parse_number<std::size_t>(value, lineno);
        else if (key == "max_depth") cfg.max_depth = parse_number<std::size_t>(value, lineno);
        else if (key == "counter_cap") cfg.counter_cap = parse_number<std::int32_t>(value, lineno);
        else throw Error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

WorkbenchConfig load_config_file(const std::string& path) {
    return parse_config(read_file(path));
}

} // namespace promod
