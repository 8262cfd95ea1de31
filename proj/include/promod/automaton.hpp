#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace promod {

/// Deterministic labelled automaton over event names. End states accept
/// regular executions; sink states absorb irregular ones. States are indexed
/// into `states`; `delta` maps (state index, label) to a state index.
struct ProcessModel {
    std::vector<std::string> states;
    std::set<std::string> alphabet;
    std::map<std::pair<int, std::string>, int> delta;
    int initial = 0;
    std::set<int> end_states;
    std::set<int> sink_states;

    int state_index(std::string_view name) const;
    const std::string& state_name(int index) const { return states[static_cast<std::size_t>(index)]; }

    /// Structural equality up to state indexing: compares the named graphs.
    bool operator==(const ProcessModel& other) const;
};

/// Throws Error when a structural invariant is broken (determinism is
/// inherent in the delta map; this checks index ranges, role disjointness
/// and alphabet closure). Reachability is the business of normalize().
void validate(const ProcessModel& model);

struct RunOutcome {
    enum class Kind { End, Sink, Stuck, Incomplete };
    Kind kind = Kind::Incomplete;
    int state = -1;              // final state (End/Sink/Incomplete) or stuck state
    std::size_t position = 0;    // Stuck: first position with no transition
    bool unknown_label = false;  // Stuck because the event is outside the alphabet
};

/// Replays the trace from the initial state. The empty trace is evaluated at
/// the initial state itself.
RunOutcome run(const ProcessModel& model, std::span<const std::string> trace);

/// Emits the dot dialect used across the project: a point-shaped helper node
/// with a blue edge into the initial state, doublecircle end states,
/// grey-filled sink states, one labelled edge per transition. States and
/// edges are sorted lexicographically, so equal models give equal bytes.
std::string to_dot(const ProcessModel& model);

/// Parses the dialect above, tolerant of whitespace and attribute order.
ProcessModel from_dot(std::string_view text);

std::string to_json(const ProcessModel& model);
ProcessModel from_json(std::string_view text);

struct NormalizeResult {
    ProcessModel model;
    std::size_t dropped_states = 0; // unreachable states removed
};

/// Renames states to canonical q0..qN in breadth-first order from the
/// initial state (edges visited in label order) and drops unreachable states.
NormalizeResult normalize(const ProcessModel& model);

/// Drops unreachable states but keeps the original names.
NormalizeResult prune_unreachable(const ProcessModel& model);

enum class TraceTarget { End, Sink, Any };

/// Exhaustively walks delta from the initial state and returns every event
/// sequence of length <= max_len whose run outcome matches the target
/// (Any = every delta-realizable prefix). Brute-force test oracle.
std::set<std::vector<std::string>> enumerate_traces(const ProcessModel& model, std::size_t max_len,
                                                    TraceTarget target);

} // namespace promod
