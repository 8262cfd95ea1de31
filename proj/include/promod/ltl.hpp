#pragma once

#include "promod/sim.hpp"
#include "promod/vmodel.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace promod {

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

/// Atomic proposition over a model variable (end_state, sink_state or an
/// event counter) compared against an integer constant.
struct Predicate {
    std::string variable;
    Cmp cmp = Cmp::Eq;
    std::int64_t constant = 0;

    auto operator<=>(const Predicate&) const = default;
};

struct LtlFormula;
using FormulaPtr = std::shared_ptr<const LtlFormula>;

struct LtlFormula {
    enum class Kind { True, False, Pred, Not, And, Or, Implies, Finally, Globally, Next, Until };
    Kind kind = Kind::True;
    Predicate pred;      // Kind::Pred
    FormulaPtr lhs, rhs; // unary operators use lhs only
};

namespace ltl {
FormulaPtr boolean(bool value);
FormulaPtr atom(Predicate p);
FormulaPtr negation(FormulaPtr f);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr finally_(FormulaPtr f);
FormulaPtr globally(FormulaPtr f);
FormulaPtr next(FormulaPtr f);
FormulaPtr until(FormulaPtr a, FormulaPtr b);
} // namespace ltl

/// Concrete syntax: `<>` finally, `[]` globally, `U`, `X`, `!`, `&&`, `||`,
/// `->` (right-associative), parentheses, atoms `var OP int`. Precedence:
/// unary > U > && > || > ->. Constant-only atoms such as `0 == 0` fold to
/// boolean literals.
FormulaPtr parse_ltl(std::string_view text);

std::string to_string(const LtlFormula& f);

/// Collects every variable named by the formula's atoms.
std::vector<std::string> formula_variables(const LtlFormula& f);

using Valuation = std::map<std::string, std::int64_t>;

bool eval_predicate(const Predicate& p, const Valuation& v);

/// Direct recursive LTL semantics on the ultimately periodic word
/// prefix . cycle^omega (cycle must be non-empty). Independent oracle for
/// the automaton-based path.
bool eval_ltl(const LtlFormula& f, std::span<const Valuation> prefix,
              std::span<const Valuation> cycle);

/// Buchi automaton with transition guards that are conjunctions of
/// predicates (an empty guard is `true`). A run consumes one valuation per
/// transition; it accepts when it visits accepting states infinitely often.
struct BuchiAutomaton {
    struct Transition {
        int target = 0;
        std::vector<Predicate> guard; // conjunction; empty = true
    };
    struct State {
        std::vector<Transition> transitions;
        bool accepting = false;
    };
    std::vector<State> states;
    int initial = 0;
};

/// Tableau expansion with degeneralization and a bisimulation-quotient
/// cleanup pass. The formula is taken as-is (not negated): the automaton's
/// language is exactly the set of words satisfying the formula.
BuchiAutomaton to_buchi(const LtlFormula& f);

/// Membership of the lasso word prefix . cycle^omega in L(B); used to
/// cross-check to_buchi against eval_ltl.
bool accepts_lasso(const BuchiAutomaton& b, std::span<const Valuation> prefix,
                   std::span<const Valuation> cycle);

struct TrailStep {
    enum class Kind { Take, Stop };
    Kind kind = Kind::Take;
    std::string label; // Take only

    bool operator==(const TrailStep&) const = default;
};

std::string trail_to_text(std::span<const TrailStep> trail);
std::vector<TrailStep> parse_trail(std::string_view text);

/// Deterministically re-executes a trail; throws InvalidStepError when a
/// step is not an option of the current block.
SimulationRun replay(const VerificationModel& vm, std::span<const TrailStep> trail);

/// Valuation snapshots along a trail, starting with the initial state (one
/// entry per visited configuration, trail.size() + 1 in total).
std::vector<Valuation> valuation_trace(const VerificationModel& vm,
                                       std::span<const TrailStep> trail);

struct VerifySpec {
    enum class Kind { Ltl, Assert, DeadlockOnly };
    Kind kind = Kind::Ltl;
    FormulaPtr formula;                  // Ltl
    std::optional<Predicate> assertion;  // Assert

    static VerifySpec ltl(FormulaPtr f) { return {Kind::Ltl, std::move(f), std::nullopt}; }
    static VerifySpec assertion_of(Predicate p) { return {Kind::Assert, nullptr, std::move(p)}; }
    static VerifySpec deadlock_only() { return {Kind::DeadlockOnly, nullptr, std::nullopt}; }
};

struct Verdict {
    enum class Kind { CounterexampleFound, NoCounterexample, AssertViolated, DeadlockFound };
    Kind kind = Kind::NoCounterexample;
    std::vector<TrailStep> trail; // witness steps (may be empty)
    SimulationRun trail_run;      // the trail, replayed
    std::size_t states_explored = 0;
    bool max_depth_hit = false;
};

/// Explicit-state verification of a VerificationModel.
///  - Ltl: nested depth-first search over the synchronous product of the
///    model (runs stutter at the stop pseudo-state) and the unnegated
///    formula's Buchi automaton; a counterexample is a witness OF the
///    formula. positive_property negates the formula first.
///  - Assert: breadth-first safety search, shortest violating trail.
///  - DeadlockOnly: reports a reachable block with no options (the stop
///    pseudo-state is not a deadlock).
Verdict verify(const VerificationModel& vm, const VerifySpec& spec, std::size_t max_depth = 10000,
               bool positive_property = false);

} // namespace promod
