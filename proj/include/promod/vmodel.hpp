#pragma once

#include "promod/automaton.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace promod {

struct LtlFormula; // promod/ltl.hpp

struct Option {
    enum class Kind { Take, Stop };
    Kind kind = Kind::Take;
    std::string label; // Take
    int target = -1;   // Take: destination block index

    bool operator==(const Option&) const = default;
};

struct StateBlock {
    enum class Marker { None, End, Sink };
    std::string state; // name of the originating automaton state
    Marker marker = Marker::None;
    std::vector<Option> options; // Take options in label order, then Stop if marked
};

/// Executable form of a ProcessModel: one guarded-choice block per state,
/// block 0 the initial state, plus an implicit stop pseudo-state. End and
/// sink blocks emit END/SINK markers on entry, set their sticky flag and
/// offer a Stop option besides their outgoing transitions. When
/// instrumented, taking a transition increments that label's counter,
/// saturating at counter_cap.
struct VerificationModel {
    std::vector<StateBlock> blocks;
    std::vector<std::string> labels;        // sorted alphabet
    std::vector<std::string> counter_names; // parallel to labels; empty unless instrumented
    bool instrumented = false;
    std::int32_t counter_cap = 8;

    struct VarRef {
        enum class Kind { EndFlag, SinkFlag, Counter };
        Kind kind = Kind::EndFlag;
        std::size_t index = 0; // Counter: label index
    };
    std::optional<VarRef> find_variable(std::string_view name) const;
    int label_index(std::string_view label) const;
};

/// Per-run mutable execution state. block == -1 means the stop pseudo-state.
struct ExecState {
    int block = 0;
    bool end_flag = false;
    bool sink_flag = false;
    std::vector<std::int32_t> counters;

    bool at_stop() const { return block < 0; }
    bool operator==(const ExecState&) const = default;
};

/// Maps a label to its counter variable name: the documented table for the
/// hotel-domain labels, otherwise lower-cased with non-alphanumerics folded
/// to '_' (and an 'n_' prefix when the result would start with a digit).
std::string default_counter_name(std::string_view label);
const std::map<std::string, std::string>& default_counter_table();

VerificationModel compile(const ProcessModel& model, bool instrument,
                          const std::map<std::string, std::string>* counter_table = nullptr,
                          std::int32_t counter_cap = 8);

/// Initial execution state: block 0 with its entry flags already applied.
ExecState initial_state(const VerificationModel& vm);

/// Applies one option: Take bumps the counter (when instrumented), moves to
/// the target block and applies its entry flags; Stop moves to the stop
/// pseudo-state with variables frozen.
ExecState apply_option(const VerificationModel& vm, const ExecState& s, const Option& opt);

std::map<std::string, std::int64_t> variable_snapshot(const VerificationModel& vm,
                                                      const ExecState& s);

/// Spin-compatible text: global flag/counter declarations, one labelled
/// if..fi block per state with a printf per transition and END/SINK control
/// printfs, a stop label, and a trailing never claim for the given formula
/// (default: finally end_state == 1) emitted without negation. Output is
/// byte-deterministic. Throws UnsupportedAtomError when the claim names a
/// variable the model does not carry.
std::string emit_promela(const VerificationModel& vm, const LtlFormula* claim = nullptr);

} // namespace promod
