#include "promod/automaton.hpp"

#include "promod/errors.hpp"
#include "promod/ioutil.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <sstream>

namespace promod {

namespace {

bool is_bare_name(std::string_view s) {
    if (s.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string quote_dot(std::string_view s) {
    if (is_bare_name(s)) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

struct Edge {
    std::string from, to, label;
    std::size_t line = 0;
    bool blue = false;
    bool has_label = false;
};

struct NodeDecl {
    std::string name;
    bool point = false, doublecircle = false, filled = false, grey = false;
};

// key=value list between '[' and ']'; values may be quoted.
std::map<std::string, std::string> parse_attrs(std::string_view s, std::size_t line) {
    std::map<std::string, std::string> attrs;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    while (true) {
        skip_ws();
        if (i >= s.size()) break;
        std::size_t kstart = i;
        while (i < s.size() && s[i] != '=' && s[i] != ',' &&
               !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        std::string key(s.substr(kstart, i - kstart));
        skip_ws();
        if (i >= s.size() || s[i] != '=') throw DotParseError(line, "expected '=' in attribute list");
        ++i;
        skip_ws();
        std::string value;
        if (i < s.size() && s[i] == '"') {
            ++i;
            while (i < s.size() && s[i] != '"') {
                if (s[i] == '\\' && i + 1 < s.size()) ++i;
                value += s[i++];
            }
            if (i >= s.size()) throw DotParseError(line, "unterminated quoted attribute value");
            ++i;
        } else {
            std::size_t vstart = i;
            while (i < s.size() && s[i] != ',' && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            value = std::string(s.substr(vstart, i - vstart));
        }
        attrs[key] = value;
        skip_ws();
        if (i < s.size() && s[i] == ',') ++i;
    }
    return attrs;
}

// node name: quoted string or a bare identifier (letters/digits/_/.)
std::string parse_name(std::string_view s, std::size_t& i, std::size_t line) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) throw DotParseError(line, "expected a node name");
    if (s[i] == '"') {
        ++i;
        std::string out;
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\\' && i + 1 < s.size()) ++i;
            out += s[i++];
        }
        if (i >= s.size()) throw DotParseError(line, "unterminated quoted name");
        ++i;
        return out;
    }
    std::size_t start = i;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.'))
        ++i;
    if (i == start) throw DotParseError(line, "expected a node name");
    return std::string(s.substr(start, i - start));
}

} // namespace

int ProcessModel::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    return -1;
}

bool ProcessModel::operator==(const ProcessModel& other) const {
    auto name_set = [](const ProcessModel& m, const std::set<int>& idx) {
        std::set<std::string> out;
        for (int i : idx) out.insert(m.states[static_cast<std::size_t>(i)]);
        return out;
    };
    auto edge_set = [](const ProcessModel& m) {
        std::set<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& [key, dst] : m.delta)
            out.emplace(m.states[static_cast<std::size_t>(key.first)], key.second,
                        m.states[static_cast<std::size_t>(dst)]);
        return out;
    };
    return std::set<std::string>(states.begin(), states.end()) ==
               std::set<std::string>(other.states.begin(), other.states.end()) &&
           alphabet == other.alphabet &&
           states[static_cast<std::size_t>(initial)] ==
               other.states[static_cast<std::size_t>(other.initial)] &&
           name_set(*this, end_states) == name_set(other, other.end_states) &&
           name_set(*this, sink_states) == name_set(other, other.sink_states) &&
           edge_set(*this) == edge_set(other);
}

void validate(const ProcessModel& model) {
    const int n = static_cast<int>(model.states.size());
    if (n == 0) throw Error("model has no states");
    {
        std::set<std::string> names(model.states.begin(), model.states.end());
        if (static_cast<int>(names.size()) != n) throw Error("duplicate state names");
    }
    if (model.initial < 0 || model.initial >= n) throw Error("initial state index out of range");
    for (int s : model.end_states)
        if (s < 0 || s >= n) throw Error("end state index out of range");
    for (int s : model.sink_states)
        if (s < 0 || s >= n) throw Error("sink state index out of range");
    for (int s : model.end_states)
        if (model.sink_states.count(s))
            throw Error("state '" + model.state_name(s) + "' is both end and sink");
    for (const auto& [key, dst] : model.delta) {
        if (key.first < 0 || key.first >= n || dst < 0 || dst >= n)
            throw Error("transition endpoint out of range");
        if (!model.alphabet.count(key.second))
            throw Error("transition label '" + key.second + "' not in alphabet");
    }
}

RunOutcome run(const ProcessModel& model, std::span<const std::string> trace) {
    int state = model.initial;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const std::string& label = trace[i];
        if (!model.alphabet.count(label))
            return {RunOutcome::Kind::Stuck, state, i, true};
        auto it = model.delta.find({state, label});
        if (it == model.delta.end())
            return {RunOutcome::Kind::Stuck, state, i, false};
        state = it->second;
    }
    if (model.end_states.count(state)) return {RunOutcome::Kind::End, state, trace.size(), false};
    if (model.sink_states.count(state)) return {RunOutcome::Kind::Sink, state, trace.size(), false};
    return {RunOutcome::Kind::Incomplete, state, trace.size(), false};
}

std::string to_dot(const ProcessModel& model) {
    std::vector<int> order(model.states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return model.state_name(a) < model.state_name(b); });

    std::ostringstream out;
    out << "digraph process_model {\n";
    out << "    __start [shape=point];\n";
    out << "    __start -> " << quote_dot(model.state_name(model.initial)) << " [color=blue];\n";
    for (int s : order) {
        out << "    " << quote_dot(model.state_name(s));
        if (model.end_states.count(s)) out << " [shape=doublecircle]";
        else if (model.sink_states.count(s)) out << " [style=filled, fillcolor=grey]";
        out << ";\n";
    }
    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    for (const auto& [key, dst] : model.delta)
        edges.emplace_back(model.state_name(key.first), key.second, model.state_name(dst));
    std::sort(edges.begin(), edges.end());
    for (const auto& [from, label, to] : edges)
        out << "    " << quote_dot(from) << " -> " << quote_dot(to) << " [label=\"" << label
            << "\"];\n";
    out << "}\n";
    return out.str();
}

ProcessModel from_dot(std::string_view text) {
    std::vector<NodeDecl> nodes;
    std::vector<Edge> edges;

    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view raw = lines[ln];
        if (auto pos = raw.find("//"); pos != std::string_view::npos) raw = raw.substr(0, pos);
        std::string_view line = trim(raw);
        const std::size_t lineno = ln + 1;
        if (line.empty() || line == "{" || line == "}") continue;
        if (line.substr(0, 7) == "digraph" || line.substr(0, 5) == "graph") continue;

        // split off the attribute list, if any
        std::string_view stmt = line;
        if (!stmt.empty() && stmt.back() == ';') stmt.remove_suffix(1);
        std::map<std::string, std::string> attrs;
        if (auto open = stmt.find('['); open != std::string_view::npos) {
            auto close = stmt.rfind(']');
            if (close == std::string_view::npos || close < open)
                throw DotParseError(lineno, "unterminated attribute list");
            attrs = parse_attrs(stmt.substr(open + 1, close - open - 1), lineno);
            stmt = trim(stmt.substr(0, open));
        }

        if (auto arrow = stmt.find("->"); arrow != std::string_view::npos) {
            std::size_t i = 0;
            Edge e;
            e.line = lineno;
            e.from = parse_name(stmt, i, lineno);
            while (i < stmt.size() && std::isspace(static_cast<unsigned char>(stmt[i]))) ++i;
            if (stmt.substr(i, 2) != "->") throw DotParseError(lineno, "malformed edge");
            i += 2;
            e.to = parse_name(stmt, i, lineno);
            if (auto it = attrs.find("color"); it != attrs.end() && it->second == "blue")
                e.blue = true;
            if (auto it = attrs.find("label"); it != attrs.end()) {
                e.label = it->second;
                e.has_label = true;
            }
            edges.push_back(std::move(e));
        } else {
            std::size_t i = 0;
            NodeDecl n;
            n.name = parse_name(stmt, i, lineno);
            if (trim(stmt.substr(i)) != "") throw DotParseError(lineno, "trailing text after node");
            if (auto it = attrs.find("shape"); it != attrs.end()) {
                if (it->second == "point") n.point = true;
                if (it->second == "doublecircle") n.doublecircle = true;
            }
            if (auto it = attrs.find("style"); it != attrs.end() && it->second == "filled")
                n.filled = true;
            if (auto it = attrs.find("fillcolor"); it != attrs.end() &&
                (it->second == "grey" || it->second == "gray"))
                n.grey = true;
            nodes.push_back(std::move(n));
        }
    }

    std::set<std::string> point_nodes;
    for (const auto& n : nodes)
        if (n.point) point_nodes.insert(n.name);

    // initial state: target of a blue edge or of an edge leaving a point node
    std::string initial_name;
    for (const auto& e : edges) {
        if (e.blue || point_nodes.count(e.from)) {
            if (!initial_name.empty() && initial_name != e.to)
                throw DotParseError(e.line, "conflicting initial-state markers");
            initial_name = e.to;
        }
    }
    if (initial_name.empty()) throw NoInitialError();

    std::set<std::string> state_names;
    state_names.insert(initial_name);
    for (const auto& n : nodes)
        if (!n.point) state_names.insert(n.name);
    for (const auto& e : edges) {
        if (e.blue || point_nodes.count(e.from)) continue;
        if (!e.has_label) throw DotParseError(e.line, "transition edge without a label");
        state_names.insert(e.from);
        state_names.insert(e.to);
    }

    ProcessModel model;
    model.states.assign(state_names.begin(), state_names.end()); // lexicographic
    model.initial = model.state_index(initial_name);
    for (const auto& n : nodes) {
        if (n.point) continue;
        int idx = model.state_index(n.name);
        if (n.doublecircle) model.end_states.insert(idx);
        if (n.filled && n.grey) model.sink_states.insert(idx);
    }
    for (const auto& e : edges) {
        if (e.blue || point_nodes.count(e.from)) continue;
        int from = model.state_index(e.from);
        int to = model.state_index(e.to);
        auto [it, inserted] = model.delta.insert({{from, e.label}, to});
        if (!inserted && it->second != to) throw NondeterministicError(e.from, e.label);
        model.alphabet.insert(e.label);
    }
    validate(model);
    return model;
}

std::string to_json(const ProcessModel& model) {
    nlohmann::ordered_json j;
    j["states"] = model.states;
    j["alphabet"] = std::vector<std::string>(model.alphabet.begin(), model.alphabet.end());
    j["initial"] = model.state_name(model.initial);
    std::vector<std::string> ends, sinks;
    for (int s : model.end_states) ends.push_back(model.state_name(s));
    for (int s : model.sink_states) sinks.push_back(model.state_name(s));
    j["end_states"] = ends;
    j["sink_states"] = sinks;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [key, dst] : model.delta) {
        nlohmann::ordered_json e;
        e["from"] = model.state_name(key.first);
        e["label"] = key.second;
        e["to"] = model.state_name(dst);
        edges.push_back(e);
    }
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

ProcessModel from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("model JSON parse error: ") + e.what());
    }
    ProcessModel model;
    try {
        model.states = j.at("states").get<std::vector<std::string>>();
        for (const auto& a : j.at("alphabet")) model.alphabet.insert(a.get<std::string>());
        model.initial = model.state_index(j.at("initial").get<std::string>());
        if (model.initial < 0) throw Error("initial state not in state list");
        for (const auto& s : j.at("end_states"))
            model.end_states.insert(model.state_index(s.get<std::string>()));
        for (const auto& s : j.at("sink_states"))
            model.sink_states.insert(model.state_index(s.get<std::string>()));
        for (const auto& e : j.at("edges")) {
            int from = model.state_index(e.at("from").get<std::string>());
            int to = model.state_index(e.at("to").get<std::string>());
            std::string label = e.at("label").get<std::string>();
            if (from < 0 || to < 0) throw Error("edge endpoint not in state list");
            auto [it, inserted] = model.delta.insert({{from, label}, to});
            if (!inserted && it->second != to)
                throw NondeterministicError(e.at("from").get<std::string>(), label);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("model JSON shape error: ") + e.what());
    }
    validate(model);
    return model;
}

namespace {

NormalizeResult rebuild_reachable(const ProcessModel& model, bool rename) {
    std::vector<int> bfs_order;
    std::map<int, int> new_index;
    std::deque<int> queue{model.initial};
    new_index[model.initial] = 0;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        bfs_order.push_back(s);
        // delta is ordered by (state, label), so successors come out in label order
        auto it = model.delta.lower_bound({s, std::string()});
        for (; it != model.delta.end() && it->first.first == s; ++it) {
            int t = it->second;
            if (!new_index.count(t)) {
                new_index[t] = static_cast<int>(new_index.size());
                queue.push_back(t);
            }
        }
    }

    NormalizeResult res;
    res.dropped_states = model.states.size() - bfs_order.size();
    ProcessModel& out = res.model;
    out.states.resize(bfs_order.size());
    for (std::size_t i = 0; i < bfs_order.size(); ++i)
        out.states[i] = rename ? "q" + std::to_string(i) : model.state_name(bfs_order[i]);
    out.initial = 0;
    for (const auto& [key, dst] : model.delta) {
        auto f = new_index.find(key.first);
        auto t = new_index.find(dst);
        if (f == new_index.end() || t == new_index.end()) continue;
        out.delta[{f->second, key.second}] = t->second;
        out.alphabet.insert(key.second);
    }
    for (int s : model.end_states)
        if (auto it = new_index.find(s); it != new_index.end()) out.end_states.insert(it->second);
    for (int s : model.sink_states)
        if (auto it = new_index.find(s); it != new_index.end()) out.sink_states.insert(it->second);
    return res;
}

} // namespace

NormalizeResult normalize(const ProcessModel& model) { return rebuild_reachable(model, true); }

NormalizeResult prune_unreachable(const ProcessModel& model) {
    return rebuild_reachable(model, false);
}

std::set<std::vector<std::string>> enumerate_traces(const ProcessModel& model, std::size_t max_len,
                                                    TraceTarget target) {
    std::set<std::vector<std::string>> out;
    auto matches = [&](int state) {
        switch (target) {
        case TraceTarget::End: return model.end_states.count(state) > 0;
        case TraceTarget::Sink: return model.sink_states.count(state) > 0;
        case TraceTarget::Any: return true;
        }
        return false;
    };

    std::vector<std::pair<int, std::vector<std::string>>> frontier{{model.initial, {}}};
    if (matches(model.initial)) out.insert({});
    for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
        std::vector<std::pair<int, std::vector<std::string>>> next;
        for (const auto& [state, prefix] : frontier) {
            auto it = model.delta.lower_bound({state, std::string()});
            for (; it != model.delta.end() && it->first.first == state; ++it) {
                auto seq = prefix;
                seq.push_back(it->first.second);
                if (matches(it->second)) out.insert(seq);
                next.emplace_back(it->second, std::move(seq));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

} // namespace promod
