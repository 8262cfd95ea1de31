#include "promod/sim.hpp"

#include "promod/errors.hpp"
#include "promod/ioutil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace promod {

namespace {

// Shared driver: `pick` chooses among the current block's options.
template <typename Pick>
SimulationRun drive(const VerificationModel& vm, std::uint64_t seed, std::size_t max_steps,
                    Pick&& pick) {
    SimulationRun run;
    run.seed = seed;

    ExecState state = initial_state(vm);
    auto record_entry = [&](bool& over) {
        const auto marker = vm.blocks[static_cast<std::size_t>(state.block)].marker;
        if (marker == StateBlock::Marker::None) return;
        if (run.steps >= max_steps) {
            run.outcome = Outcome::StepLimit;
            over = true;
            return;
        }
        run.markers.push_back({run.events.size(), marker});
        ++run.steps;
    };

    bool over = false;
    record_entry(over);
    while (!over) {
        const auto& options = vm.blocks[static_cast<std::size_t>(state.block)].options;
        if (options.empty()) {
            run.outcome = Outcome::Deadlock;
            break;
        }
        if (run.steps >= max_steps) {
            run.outcome = Outcome::StepLimit;
            break;
        }
        const std::size_t choice = pick(vm.blocks[static_cast<std::size_t>(state.block)], options);
        if (choice >= options.size()) throw InvalidChoiceError(choice);
        const Option& opt = options[choice];
        ++run.steps;
        if (opt.kind == Option::Kind::Stop) {
            state = apply_option(vm, state, opt);
            run.outcome = Outcome::Stopped;
            break;
        }
        run.events.push_back(opt.label);
        state = apply_option(vm, state, opt);
        record_entry(over);
    }
    run.final_vars = variable_snapshot(vm, state);
    return run;
}

} // namespace

SimulationRun simulate_random(const VerificationModel& vm, std::uint64_t seed,
                              std::size_t max_steps) {
    SplitMix64 rng(seed);
    return drive(vm, seed, max_steps, [&rng](const StateBlock&, const std::vector<Option>& opts) {
        return static_cast<std::size_t>(rng.below(opts.size()));
    });
}

SimulationRun simulate_interactive(const VerificationModel& vm, const Chooser& chooser,
                                   std::size_t max_steps) {
    return drive(vm, 0, max_steps, chooser);
}

std::vector<SimulationRun> generate_traces(const VerificationModel& vm, std::size_t n,
                                           std::uint64_t base_seed, std::size_t max_steps,
                                           unsigned threads) {
    std::vector<SimulationRun> runs(n);
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            runs[i] = simulate_random(vm, base_seed + i, max_steps);
        return runs;
    }
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers)
                runs[i] = simulate_random(vm, base_seed + i, max_steps);
        });
    }
    for (auto& t : pool) t.join();
    return runs; // indexed by seed offset, so ordering is seed order
}

Classification classify(const SimulationRun& run) {
    for (const auto& m : run.markers)
        if (m.kind == StateBlock::Marker::End) return Classification::Positive;
    return Classification::Negative;
}

ExampleSet generate_examples(const VerificationModel& vm, Classification kind, std::size_t count,
                             std::uint64_t base_seed, std::size_t max_attempts,
                             std::size_t max_steps) {
    ExampleSet set;
    std::size_t collected = 0;
    while (collected < count) {
        if (set.attempts >= max_attempts) throw ExhaustedError(collected, set.attempts);
        SimulationRun run = simulate_random(vm, base_seed + set.attempts, max_steps);
        ++set.attempts;
        if (classify(run) != kind) continue;
        ++set.variant_frequency[run.events];
        if (kind == Classification::Positive) set.positives.push_back(std::move(run));
        else set.negatives.push_back(std::move(run));
        ++collected;
    }
    return set;
}

TraceStats stats(std::span<const SimulationRun> runs, double runtime_s) {
    TraceStats s;
    s.generated = runs.size();
    s.runtime_s = runtime_s;
    if (runs.empty()) return s;

    std::size_t total = 0;
    s.shortest = runs.front().events.size();
    for (const auto& run : runs) {
        const std::size_t len = run.events.size();
        total += len;
        s.shortest = std::min(s.shortest, len);
        s.longest = std::max(s.longest, len);
        if (classify(run) == Classification::Positive) ++s.positive_count;
        else ++s.negative_count;
    }
    s.average = static_cast<double>(total) / static_cast<double>(runs.size());
    s.ratio_percent = s.negative_count == 0
                          ? 0.0
                          : 100.0 * static_cast<double>(s.positive_count) /
                                static_cast<double>(s.negative_count);
    return s;
}

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string stats_to_table(const TraceStats& s) {
    std::ostringstream out;
    auto row = [&](const char* name, const std::string& value) {
        out << name;
        for (std::size_t i = std::string(name).size(); i < 28; ++i) out << ' ';
        out << value << "\n";
    };
    row("Generated number of traces", std::to_string(s.generated));
    row("Script runtime (s)", fixed2(s.runtime_s));
    row("Shortest trace length", std::to_string(s.shortest));
    row("Longest trace length", std::to_string(s.longest));
    row("Average trace length", fixed2(s.average));
    row("Number of positive examples", std::to_string(s.positive_count));
    row("Number of negative examples", std::to_string(s.negative_count));
    row("Ratio positive/negative (%)", fixed2(s.ratio_percent));
    return out.str();
}

std::string stats_to_json(const TraceStats& s) {
    std::ostringstream out;
    out << "{\n"
        << "  \"generated\": " << s.generated << ",\n"
        << "  \"runtime_s\": " << fixed2(s.runtime_s) << ",\n"
        << "  \"shortest\": " << s.shortest << ",\n"
        << "  \"longest\": " << s.longest << ",\n"
        << "  \"average\": " << fixed2(s.average) << ",\n"
        << "  \"positive_count\": " << s.positive_count << ",\n"
        << "  \"negative_count\": " << s.negative_count << ",\n"
        << "  \"ratio_percent\": " << fixed2(s.ratio_percent) << "\n"
        << "}\n";
    return out.str();
}

std::string run_to_text(const SimulationRun& run) {
    std::string out;
    std::size_t marker_idx = 0;
    auto emit_markers_at = [&](std::size_t pos) {
        while (marker_idx < run.markers.size() && run.markers[marker_idx].position == pos) {
            if (!out.empty()) out += ' ';
            out += run.markers[marker_idx].kind == StateBlock::Marker::End ? "END" : "SINK";
            ++marker_idx;
        }
    };
    for (std::size_t i = 0; i < run.events.size(); ++i) {
        emit_markers_at(i);
        if (!out.empty()) out += ' ';
        out += run.events[i];
    }
    emit_markers_at(run.events.size());
    return out;
}

NormalizedTraces normalize_external_trace(std::string_view text) {
    NormalizedTraces result;
    std::vector<std::string> current;
    bool current_dirty = false;

    for (std::string_view raw : split_lines(text)) {
        if (raw.find("warning:") != std::string_view::npos) {
            ++result.dropped_lines;
            continue;
        }
        std::string line(raw);
        // remove "N process(es) created" notices anywhere in the line
        for (const char* suffix : {" processes created", " process created"}) {
            for (auto pos = line.find(suffix); pos != std::string::npos;
                 pos = line.find(suffix)) {
                auto start = pos;
                while (start > 0 && std::isdigit(static_cast<unsigned char>(line[start - 1])))
                    --start;
                if (start == pos) break; // no leading number: not a notice
                line.erase(start, pos - start + std::string(suffix).size());
            }
        }
        for (const auto& token : split_whitespace(line)) {
            if (token == "END" || token == "SINK") {
                result.runs.push_back({std::move(current), token == "END"});
                current.clear();
                current_dirty = false;
            } else {
                current.push_back(token);
                current_dirty = true;
            }
        }
    }
    if (current_dirty) ++result.dropped_lines; // unterminated tail
    return result;
}

} // namespace promod
