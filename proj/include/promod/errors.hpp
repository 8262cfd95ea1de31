#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace promod {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- eventlog ---

class MissingColumnError : public Error {
public:
    std::string column;
    explicit MissingColumnError(std::string col)
        : Error("missing column in CSV header: " + col), column(std::move(col)) {}
};

class TimestampParseError : public Error {
public:
    std::size_t row;
    std::string value;
    TimestampParseError(std::size_t row_, std::string value_)
        : Error("row " + std::to_string(row_) + ": cannot parse timestamp '" + value_ + "'"),
          row(row_), value(std::move(value_)) {}
};

class EmptyFieldError : public Error {
public:
    std::size_t row;
    std::string column;
    EmptyFieldError(std::size_t row_, std::string column_)
        : Error("row " + std::to_string(row_) + ": empty field in column '" + column_ + "'"),
          row(row_), column(std::move(column_)) {}
};

// --- automaton / dot ---

class DotParseError : public Error {
public:
    std::size_t line;
    DotParseError(std::size_t line_, const std::string& message)
        : Error("dot line " + std::to_string(line_) + ": " + message), line(line_) {}
};

class NoInitialError : public Error {
public:
    NoInitialError() : Error("dot model has no initial-state marker (point node or blue edge)") {}
};

class NondeterministicError : public Error {
public:
    std::string state, label;
    NondeterministicError(std::string state_, std::string label_)
        : Error("nondeterministic transitions from state '" + state_ + "' on label '" + label_ + "'"),
          state(std::move(state_)), label(std::move(label_)) {}
};

// --- discovery ---

class ConflictingLabelError : public Error {
public:
    std::vector<std::string> sequence;
    explicit ConflictingLabelError(std::vector<std::string> seq);
};

class MarkConflictError : public Error {
public:
    int merged_class;
    explicit MarkConflictError(int cls)
        : Error("state class " + std::to_string(cls) +
                " merges accepting and rejecting samples; raise k"),
          merged_class(cls) {}
};

class InconsistentModelError : public Error {
public:
    std::vector<std::string> trace;
    explicit InconsistentModelError(std::vector<std::string> trc);
};

// --- ltl / verification ---

class LtlSyntaxError : public Error {
public:
    std::size_t position;
    LtlSyntaxError(std::size_t pos, const std::string& message)
        : Error("LTL syntax error at offset " + std::to_string(pos) + ": " + message),
          position(pos) {}
};

class UnknownVariableError : public Error {
public:
    std::string name;
    explicit UnknownVariableError(std::string name_)
        : Error("unknown model variable '" + name_ + "'"), name(std::move(name_)) {}
};

class UnsupportedAtomError : public Error {
public:
    std::string name;
    explicit UnsupportedAtomError(std::string name_)
        : Error("claim references variable absent from the model: '" + name_ + "'"),
          name(std::move(name_)) {}
};

class InvalidChoiceError : public Error {
public:
    std::size_t index;
    explicit InvalidChoiceError(std::size_t idx)
        : Error("chooser returned out-of-range option index " + std::to_string(idx)), index(idx) {}
};

class InvalidStepError : public Error {
public:
    std::size_t position;
    explicit InvalidStepError(std::size_t pos, const std::string& detail)
        : Error("trail step " + std::to_string(pos) + " is not executable: " + detail),
          position(pos) {}
};

class ExhaustedError : public Error {
public:
    std::size_t collected, attempts;
    ExhaustedError(std::size_t collected_, std::size_t attempts_)
        : Error("example generation exhausted after " + std::to_string(attempts_) +
                " attempts with " + std::to_string(collected_) + " examples collected"),
          collected(collected_), attempts(attempts_) {}
};

namespace detail {
inline std::string join_events(const std::vector<std::string>& seq) {
    std::string out;
    for (const auto& e : seq) {
        if (!out.empty()) out += ' ';
        out += e;
    }
    return out;
}
} // namespace detail

inline ConflictingLabelError::ConflictingLabelError(std::vector<std::string> seq)
    : Error("sequence labelled both positive and negative: '" + detail::join_events(seq) + "'"),
      sequence(std::move(seq)) {}

inline InconsistentModelError::InconsistentModelError(std::vector<std::string> trc)
    : Error("discovered model violates its sample on trace '" + detail::join_events(trc) + "'"),
      trace(std::move(trc)) {}

} // namespace promod
