#include "promod/vmodel.hpp"

#include "promod/errors.hpp"
#include "promod/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace promod {

std::optional<VerificationModel::VarRef> VerificationModel::find_variable(
    std::string_view name) const {
    if (name == "end_state") return VarRef{VarRef::Kind::EndFlag, 0};
    if (name == "sink_state") return VarRef{VarRef::Kind::SinkFlag, 0};
    for (std::size_t i = 0; i < counter_names.size(); ++i)
        if (counter_names[i] == name) return VarRef{VarRef::Kind::Counter, i};
    return std::nullopt;
}

int VerificationModel::label_index(std::string_view label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) return -1;
    return static_cast<int>(it - labels.begin());
}

std::string default_counter_name(std::string_view label) {
    const auto& table = default_counter_table();
    if (auto it = table.find(std::string(label)); it != table.end()) return it->second;
    std::string out;
    for (char c : label)
        out += std::isalnum(static_cast<unsigned char>(c))
                   ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                   : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "n_" + out;
    return out;
}

const std::map<std::string, std::string>& default_counter_table() {
    static const std::map<std::string, std::string> m = {
        {"CheckIn", "checkIn"},
        {"CheckOut", "checkOut"},
        {"Billpayment", "bill_payment"},
        {"Extraserviceadded", "extra_service"},
        {"Newreservation", "new_reservation"},
    };
    return m;
}

VerificationModel compile(const ProcessModel& model, bool instrument,
                          const std::map<std::string, std::string>* counter_table,
                          std::int32_t counter_cap) {
    validate(model);
    VerificationModel vm;
    vm.instrumented = instrument;
    vm.counter_cap = counter_cap;
    vm.labels.assign(model.alphabet.begin(), model.alphabet.end());

    if (instrument) {
        std::set<std::string> used{"end_state", "sink_state"};
        for (const auto& label : vm.labels) {
            std::string name;
            if (counter_table) {
                if (auto it = counter_table->find(label); it != counter_table->end())
                    name = it->second;
            }
            if (name.empty()) name = default_counter_name(label);
            if (!used.insert(name).second)
                throw Error("counter name collision: '" + name + "' (label '" + label + "')");
            vm.counter_names.push_back(name);
        }
    }

    // blocks: initial state first, the rest in the model's state order
    std::vector<int> state_order{model.initial};
    for (int s = 0; s < static_cast<int>(model.states.size()); ++s)
        if (s != model.initial) state_order.push_back(s);
    std::vector<int> block_of(model.states.size());
    for (std::size_t b = 0; b < state_order.size(); ++b)
        block_of[static_cast<std::size_t>(state_order[b])] = static_cast<int>(b);

    for (int s : state_order) {
        StateBlock block;
        block.state = model.state_name(s);
        if (model.end_states.count(s)) block.marker = StateBlock::Marker::End;
        else if (model.sink_states.count(s)) block.marker = StateBlock::Marker::Sink;
        auto it = model.delta.lower_bound({s, std::string()});
        for (; it != model.delta.end() && it->first.first == s; ++it)
            block.options.push_back(
                {Option::Kind::Take, it->first.second, block_of[static_cast<std::size_t>(it->second)]});
        if (block.marker != StateBlock::Marker::None)
            block.options.push_back({Option::Kind::Stop, "", -1});
        vm.blocks.push_back(std::move(block));
    }
    return vm;
}

namespace {

void apply_entry_flags(const VerificationModel& vm, ExecState& s) {
    switch (vm.blocks[static_cast<std::size_t>(s.block)].marker) {
    case StateBlock::Marker::End: s.end_flag = true; break;
    case StateBlock::Marker::Sink: s.sink_flag = true; break;
    case StateBlock::Marker::None: break;
    }
}

} // namespace

ExecState initial_state(const VerificationModel& vm) {
    ExecState s;
    s.block = 0;
    if (vm.instrumented) s.counters.assign(vm.labels.size(), 0);
    apply_entry_flags(vm, s);
    return s;
}

ExecState apply_option(const VerificationModel& vm, const ExecState& s, const Option& opt) {
    ExecState next = s;
    if (opt.kind == Option::Kind::Stop) {
        next.block = -1;
        return next;
    }
    if (vm.instrumented) {
        int li = vm.label_index(opt.label);
        if (li >= 0 && next.counters[static_cast<std::size_t>(li)] < vm.counter_cap)
            ++next.counters[static_cast<std::size_t>(li)];
    }
    next.block = opt.target;
    apply_entry_flags(vm, next);
    return next;
}

std::map<std::string, std::int64_t> variable_snapshot(const VerificationModel& vm,
                                                      const ExecState& s) {
    std::map<std::string, std::int64_t> vars;
    vars["end_state"] = s.end_flag ? 1 : 0;
    vars["sink_state"] = s.sink_flag ? 1 : 0;
    for (std::size_t i = 0; i < vm.counter_names.size(); ++i)
        vars[vm.counter_names[i]] = s.counters[i];
    return vars;
}

namespace {

const char* cmp_text(Cmp c) {
    switch (c) {
    case Cmp::Eq: return "==";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    }
    return "==";
}

std::string guard_text(const std::vector<Predicate>& guard) {
    if (guard.empty()) return "(1)";
    std::string out;
    for (std::size_t i = 0; i < guard.size(); ++i) {
        if (i) out += " && ";
        out += "(" + guard[i].variable + " " + cmp_text(guard[i].cmp) + " " +
               std::to_string(guard[i].constant) + ")";
    }
    return out;
}

void emit_never_claim(std::ostream& out, const BuchiAutomaton& buchi) {
    // state order: initial first (Spin starts a never claim at its first
    // statement), the rest ascending
    std::vector<int> order{buchi.initial};
    for (int i = 0; i < static_cast<int>(buchi.states.size()); ++i)
        if (i != buchi.initial) order.push_back(i);

    auto state_label = [&](int i) {
        const bool acc = buchi.states[static_cast<std::size_t>(i)].accepting;
        return std::string(acc ? "accept_S" : "T0_S") + std::to_string(i);
    };

    out << "never {\n";
    for (int i : order) {
        const auto& st = buchi.states[static_cast<std::size_t>(i)];
        out << state_label(i) << ":\n";
        if (st.transitions.empty()) {
            out << "\tfalse;\n"; // blocked: this branch rejects
            continue;
        }
        out << "\tif\n";
        for (const auto& tr : st.transitions)
            out << "\t:: " << guard_text(tr.guard) << " -> goto " << state_label(tr.target) << "\n";
        out << "\tfi;\n";
    }
    out << "}\n";
}

} // namespace

std::string emit_promela(const VerificationModel& vm, const LtlFormula* claim) {
    FormulaPtr default_claim;
    if (!claim) {
        default_claim = ltl::finally_(ltl::atom({"end_state", Cmp::Eq, 1}));
        claim = default_claim.get();
    }
    for (const auto& var : formula_variables(*claim))
        if (!vm.find_variable(var)) throw UnsupportedAtomError(var);

    std::ostringstream out;
    out << "/* verification model generated from a process model automaton */\n";
    out << "int end_state = 0;\n";
    out << "int sink_state = 0;\n";
    for (std::size_t i = 0; i < vm.counter_names.size(); ++i)
        out << "int " << vm.counter_names[i] << " = 0;\t/* counts " << vm.labels[i] << " */\n";
    out << "\n";
    out << "active proctype model() {\n";
    for (std::size_t b = 0; b < vm.blocks.size(); ++b) {
        const auto& block = vm.blocks[b];
        out << "S" << b << ":\t/* " << block.state << " */\n";
        if (block.marker == StateBlock::Marker::End) {
            out << "\tend_state = 1;\n";
            out << "\tprintf(\"END\\n\");\n";
        } else if (block.marker == StateBlock::Marker::Sink) {
            out << "\tsink_state = 1;\n";
            out << "\tprintf(\"SINK\\n\");\n";
        }
        out << "\tif\n";
        for (const auto& opt : block.options) {
            if (opt.kind == Option::Kind::Stop) {
                out << "\t:: goto stop\n";
            } else {
                out << "\t:: printf(\"" << opt.label << " \");";
                if (vm.instrumented) {
                    const auto& ctr =
                        vm.counter_names[static_cast<std::size_t>(vm.label_index(opt.label))];
                    out << " " << ctr << " = " << ctr << " + 1;";
                }
                out << " goto S" << opt.target << "\n";
            }
        }
        if (block.options.empty()) out << "\t:: false\n"; // deadlocked state, kept explicit
        out << "\tfi;\n";
    }
    out << "stop:\tskip\n";
    out << "}\n\n";
    out << "/* claim (not negated): " << to_string(*claim) << " */\n";
    emit_never_claim(out, to_buchi(*claim));
    return out.str();
}

} // namespace promod
