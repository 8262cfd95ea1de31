#include "promod/errors.hpp"
#include "promod/ioutil.hpp"
#include "promod/ltl.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace promod {

// ---- trails -----------------------------------------------------------------

std::string trail_to_text(std::span<const TrailStep> trail) {
    std::string out;
    for (const auto& step : trail) {
        if (step.kind == TrailStep::Kind::Stop) out += "STOP\n";
        else out += "TAKE " + step.label + "\n";
    }
    return out;
}

std::vector<TrailStep> parse_trail(std::string_view text) {
    std::vector<TrailStep> trail;
    for (std::string_view raw : split_lines(text)) {
        std::string_view line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line == "STOP") {
            trail.push_back({TrailStep::Kind::Stop, ""});
        } else if (line.substr(0, 5) == "TAKE ") {
            trail.push_back({TrailStep::Kind::Take, std::string(trim(line.substr(5)))});
        } else {
            throw Error("unrecognized trail line: '" + std::string(line) + "'");
        }
    }
    return trail;
}

namespace {

const Option* find_option(const VerificationModel& vm, const ExecState& s, const TrailStep& step) {
    if (s.at_stop()) return nullptr;
    for (const auto& opt : vm.blocks[static_cast<std::size_t>(s.block)].options) {
        if (step.kind == TrailStep::Kind::Stop && opt.kind == Option::Kind::Stop) return &opt;
        if (step.kind == TrailStep::Kind::Take && opt.kind == Option::Kind::Take &&
            opt.label == step.label)
            return &opt;
    }
    return nullptr;
}

} // namespace

SimulationRun replay(const VerificationModel& vm, std::span<const TrailStep> trail) {
    SimulationRun run;
    ExecState state = initial_state(vm);
    auto record_entry = [&] {
        const auto marker = vm.blocks[static_cast<std::size_t>(state.block)].marker;
        if (marker == StateBlock::Marker::None) return;
        run.markers.push_back({run.events.size(), marker});
        ++run.steps;
    };
    record_entry();
    run.outcome = Outcome::TrailEnd;
    for (std::size_t i = 0; i < trail.size(); ++i) {
        const Option* opt = find_option(vm, state, trail[i]);
        if (!opt)
            throw InvalidStepError(i, state.at_stop()
                                          ? "execution already stopped"
                                          : "no such option in block of state '" +
                                                vm.blocks[static_cast<std::size_t>(state.block)].state +
                                                "'");
        ++run.steps;
        if (opt->kind == Option::Kind::Stop) {
            state = apply_option(vm, state, *opt);
            run.outcome = Outcome::Stopped;
            break;
        }
        run.events.push_back(opt->label);
        state = apply_option(vm, state, *opt);
        record_entry();
    }
    // a terminal block whose Stop option was not spelled out still stops
    if (run.outcome == Outcome::TrailEnd && !state.at_stop()) {
        for (const auto& opt : vm.blocks[static_cast<std::size_t>(state.block)].options) {
            if (opt.kind == Option::Kind::Stop) {
                ++run.steps;
                state = apply_option(vm, state, opt);
                run.outcome = Outcome::Stopped;
                break;
            }
        }
    }
    run.final_vars = variable_snapshot(vm, state);
    return run;
}

std::vector<Valuation> valuation_trace(const VerificationModel& vm,
                                       std::span<const TrailStep> trail) {
    std::vector<Valuation> vals;
    ExecState state = initial_state(vm);
    vals.push_back(variable_snapshot(vm, state));
    for (std::size_t i = 0; i < trail.size(); ++i) {
        const Option* opt = find_option(vm, state, trail[i]);
        if (!opt) throw InvalidStepError(i, "no such option");
        state = apply_option(vm, state, *opt);
        vals.push_back(variable_snapshot(vm, state));
    }
    return vals;
}

// ---- explicit-state search --------------------------------------------------

namespace {

struct StateKey {
    std::vector<std::int32_t> words;
    bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        std::size_t h = 1469598103934665603ull; // FNV-1a
        for (std::int32_t w : k.words) {
            for (int shift = 0; shift < 32; shift += 8) {
                h ^= static_cast<std::size_t>((static_cast<std::uint32_t>(w) >> shift) & 0xff);
                h *= 1099511628211ull;
            }
        }
        return h;
    }
};

StateKey make_key(const ExecState& s, int buchi = -1) {
    StateKey key;
    key.words.reserve(s.counters.size() + 4);
    key.words.push_back(s.block);
    key.words.push_back(s.end_flag ? 1 : 0);
    key.words.push_back(s.sink_flag ? 1 : 0);
    for (auto c : s.counters) key.words.push_back(c);
    key.words.push_back(buchi);
    return key;
}

Valuation snapshot_cached(const VerificationModel& vm, const ExecState& s) {
    return variable_snapshot(vm, s);
}

bool guard_sat(const std::vector<Predicate>& guard, const Valuation& v) {
    for (const auto& p : guard)
        if (!eval_predicate(p, v)) return false;
    return true;
}

struct ModelStep {
    ExecState state;
    TrailStep step;
    bool is_stutter = false; // stop self-loop: no trail step
};

std::vector<ModelStep> model_successors(const VerificationModel& vm, const ExecState& s) {
    std::vector<ModelStep> out;
    if (s.at_stop()) {
        out.push_back({s, {}, true});
        return out;
    }
    for (const auto& opt : vm.blocks[static_cast<std::size_t>(s.block)].options) {
        TrailStep step = opt.kind == Option::Kind::Stop
                             ? TrailStep{TrailStep::Kind::Stop, ""}
                             : TrailStep{TrailStep::Kind::Take, opt.label};
        out.push_back({apply_option(vm, s, opt), step, false});
    }
    return out;
}

// breadth-first search over model configurations; `hit` decides the target
template <typename HitFn>
Verdict bfs_search(const VerificationModel& vm, std::size_t max_depth, Verdict::Kind found_kind,
                   HitFn&& hit) {
    struct NodeInfo {
        int parent = -1;
        TrailStep step;
    };
    std::vector<ExecState> states;
    std::vector<NodeInfo> info;
    std::vector<std::size_t> depth;
    std::unordered_map<StateKey, int, StateKeyHash> visited;

    Verdict verdict;
    auto build_trail = [&](int idx) {
        std::vector<TrailStep> trail;
        for (int i = idx; info[static_cast<std::size_t>(i)].parent >= 0;
             i = info[static_cast<std::size_t>(i)].parent)
            trail.push_back(info[static_cast<std::size_t>(i)].step);
        std::reverse(trail.begin(), trail.end());
        return trail;
    };

    ExecState init = initial_state(vm);
    states.push_back(init);
    info.push_back({});
    depth.push_back(0);
    visited.emplace(make_key(init), 0);

    for (std::size_t i = 0; i < states.size(); ++i) {
        if (hit(states[i])) {
            verdict.kind = found_kind;
            verdict.trail = build_trail(static_cast<int>(i));
            verdict.states_explored = visited.size();
            return verdict;
        }
        if (states[i].at_stop()) continue;
        if (depth[i] >= max_depth) {
            if (!vm.blocks[static_cast<std::size_t>(states[i].block)].options.empty())
                verdict.max_depth_hit = true;
            continue;
        }
        for (const auto& succ : model_successors(vm, states[i])) {
            StateKey key = make_key(succ.state);
            if (visited.count(key)) continue;
            visited.emplace(std::move(key), static_cast<int>(states.size()));
            states.push_back(succ.state);
            info.push_back({static_cast<int>(i), succ.step});
            depth.push_back(depth[i] + 1);
        }
    }
    verdict.kind = Verdict::Kind::NoCounterexample;
    verdict.states_explored = visited.size();
    return verdict;
}

// Nested depth-first search for an accepting lasso in the synchronous
// product. Two acceptance routes:
//  - red search closes a cycle through an accepting product node;
//  - claim completion: a Buchi transition enabled now leads to an accepting
//    state that can absorb the current valuation forever (unconditionally
//    when its self-loop guard is empty, otherwise only at the stop
//    pseudo-state, where the model itself stutters).
// Counters saturate and flags are sticky, so valuations are constant along
// any product cycle and the stem alone, stutter-extended, is the witness.
class NdfsSearch {
public:
    NdfsSearch(const VerificationModel& vm, const BuchiAutomaton& buchi, std::size_t max_depth)
        : vm_(vm), buchi_(buchi), max_depth_(max_depth) {}

    Verdict run() {
        Verdict verdict;
        ExecState init = initial_state(vm_);
        push_blue(init, buchi_.initial, {}, false);
        while (!stack_.empty() && !found_) {
            Frame& frame = stack_.back();
            if (frame.next_succ < frame.succs.size()) {
                const PSucc succ = frame.succs[frame.next_succ++];
                auto flag = flags_.find(make_key(succ.state, succ.buchi));
                if (flag == flags_.end() || (flag->second & Blue) == 0) {
                    if (stack_.size() >= max_depth_) {
                        truncated_ = true;
                        continue;
                    }
                    push_blue(succ.state, succ.buchi, succ.step, succ.has_step);
                }
            } else {
                if (!found_ && buchi_.states[static_cast<std::size_t>(frame.buchi)].accepting)
                    red_search(frame);
                flags_[make_key(frame.state, frame.buchi)] &= ~OnStack;
                stack_.pop_back();
            }
        }
        verdict.kind = found_ ? Verdict::Kind::CounterexampleFound : Verdict::Kind::NoCounterexample;
        if (found_) verdict.trail = witness_;
        verdict.states_explored = blue_count_;
        verdict.max_depth_hit = truncated_;
        return verdict;
    }

private:
    enum Flag : std::uint8_t { Blue = 1, OnStack = 2, Red = 4 };

    struct PSucc {
        ExecState state;
        int buchi = 0;
        TrailStep step;
        bool has_step = false;
    };

    struct Frame {
        ExecState state;
        int buchi = 0;
        TrailStep step_in; // step that entered this node
        bool has_step_in = false;
        std::vector<PSucc> succs;
        std::size_t next_succ = 0;
    };

    std::vector<PSucc> product_successors(const ExecState& s, int b) {
        std::vector<PSucc> out;
        const Valuation vals = snapshot_cached(vm_, s);
        for (const auto& ms : model_successors(vm_, s)) {
            for (const auto& tr : buchi_.states[static_cast<std::size_t>(b)].transitions) {
                if (!guard_sat(tr.guard, vals)) continue;
                out.push_back({ms.state, tr.target, ms.step, !ms.is_stutter});
            }
        }
        return out;
    }

    // claim-completion acceptance at node (s, b)
    bool claim_completes(const ExecState& s, int b) {
        const Valuation vals = snapshot_cached(vm_, s);
        for (const auto& tr : buchi_.states[static_cast<std::size_t>(b)].transitions) {
            if (!guard_sat(tr.guard, vals)) continue;
            const auto& target = buchi_.states[static_cast<std::size_t>(tr.target)];
            if (!target.accepting) continue;
            for (const auto& loop : target.transitions) {
                if (loop.target != tr.target) continue;
                if (loop.guard.empty() || (s.at_stop() && guard_sat(loop.guard, vals))) return true;
            }
        }
        return false;
    }

    void push_blue(const ExecState& s, int b, TrailStep step_in, bool has_step_in) {
        flags_[make_key(s, b)] |= Blue | OnStack;
        ++blue_count_;
        Frame frame;
        frame.state = s;
        frame.buchi = b;
        frame.step_in = std::move(step_in);
        frame.has_step_in = has_step_in;
        stack_.push_back(std::move(frame));
        if (claim_completes(s, b)) {
            witness_ = stack_steps();
            found_ = true;
            return;
        }
        stack_.back().succs = product_successors(s, b);
    }

    std::vector<TrailStep> stack_steps() const {
        std::vector<TrailStep> steps;
        for (const auto& frame : stack_)
            if (frame.has_step_in) steps.push_back(frame.step_in);
        return steps;
    }

    // Terminates without a depth bound: counters saturate, so the product is
    // finite and red marks block re-expansion.
    void red_search(const Frame& seed) {
        const StateKey seed_key = make_key(seed.state, seed.buchi);
        std::vector<std::pair<ExecState, int>> work{{seed.state, seed.buchi}};
        flags_[seed_key] |= Red;
        while (!work.empty()) {
            auto [s, b] = work.back();
            work.pop_back();
            for (const auto& succ : product_successors(s, b)) {
                StateKey key = make_key(succ.state, succ.buchi);
                if (key == seed_key) {
                    witness_ = stack_steps(); // stem to the seed; cycle stutters
                    found_ = true;
                    return;
                }
                auto it = flags_.find(key);
                if (it != flags_.end() && (it->second & OnStack)) {
                    witness_ = stack_steps();
                    found_ = true;
                    return;
                }
                auto& f = flags_[std::move(key)];
                if ((f & Red) == 0) {
                    f |= Red;
                    work.emplace_back(succ.state, succ.buchi);
                }
            }
        }
    }

    const VerificationModel& vm_;
    const BuchiAutomaton& buchi_;
    std::size_t max_depth_;
    std::unordered_map<StateKey, std::uint8_t, StateKeyHash> flags_;
    std::vector<Frame> stack_;
    std::vector<TrailStep> witness_;
    bool found_ = false;
    bool truncated_ = false;
    std::size_t blue_count_ = 0;
};

} // namespace

Verdict verify(const VerificationModel& vm, const VerifySpec& spec, std::size_t max_depth,
               bool positive_property) {
    if (max_depth < 1) throw Error("max_depth must be at least 1");

    Verdict verdict;
    switch (spec.kind) {
    case VerifySpec::Kind::Assert: {
        if (!spec.assertion) throw Error("assert specification without a predicate");
        if (!vm.find_variable(spec.assertion->variable))
            throw UnknownVariableError(spec.assertion->variable);
        const Predicate pred = *spec.assertion;
        verdict = bfs_search(vm, max_depth, Verdict::Kind::AssertViolated,
                             [&](const ExecState& s) {
                                 return !eval_predicate(pred, variable_snapshot(vm, s));
                             });
        break;
    }
    case VerifySpec::Kind::DeadlockOnly: {
        verdict = bfs_search(vm, max_depth, Verdict::Kind::DeadlockFound, [&](const ExecState& s) {
            return !s.at_stop() &&
                   vm.blocks[static_cast<std::size_t>(s.block)].options.empty();
        });
        break;
    }
    case VerifySpec::Kind::Ltl: {
        if (!spec.formula) throw Error("LTL specification without a formula");
        FormulaPtr formula = spec.formula;
        if (positive_property) formula = ltl::negation(formula);
        for (const auto& var : formula_variables(*formula))
            if (!vm.find_variable(var)) throw UnknownVariableError(var);
        const BuchiAutomaton buchi = to_buchi(*formula);
        verdict = NdfsSearch(vm, buchi, max_depth).run();
        break;
    }
    }

    if (verdict.kind != Verdict::Kind::NoCounterexample) verdict.trail_run = replay(vm, verdict.trail);
    return verdict;
}

} // namespace promod
