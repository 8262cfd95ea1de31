#pragma once

#include "promod/vmodel.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace promod {

/// SplitMix64: the fixed 64-bit generator behind every simulation. Seeds
/// are user-visible inputs; nothing here ever reads the clock.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // modulo draw; n is tiny (option counts), bias is negligible and fixed
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

enum class Outcome { Stopped, StepLimit, Deadlock, TrailEnd };

struct RunMarker {
    std::size_t position = 0; // number of events emitted before the marker
    StateBlock::Marker kind = StateBlock::Marker::End;

    bool operator==(const RunMarker&) const = default;
};

struct SimulationRun {
    std::vector<std::string> events;
    std::vector<RunMarker> markers;
    Outcome outcome = Outcome::Stopped;
    std::size_t steps = 0; // events + markers + stop actions
    std::uint64_t seed = 0;
    std::map<std::string, std::int64_t> final_vars;

    bool operator==(const SimulationRun&) const = default;
};

SimulationRun simulate_random(const VerificationModel& vm, std::uint64_t seed,
                              std::size_t max_steps = 10000);

using Chooser = std::function<std::size_t(const StateBlock&, const std::vector<Option>&)>;

SimulationRun simulate_interactive(const VerificationModel& vm, const Chooser& chooser,
                                   std::size_t max_steps = 10000);

/// Runs n simulations with seeds base_seed .. base_seed+n-1, in seed order.
/// threads > 1 fans the work out; results are merged in seed order either
/// way, so the output never depends on the thread count.
std::vector<SimulationRun> generate_traces(const VerificationModel& vm, std::size_t n,
                                           std::uint64_t base_seed, std::size_t max_steps = 10000,
                                           unsigned threads = 1);

enum class Classification { Positive, Negative };

/// Positive iff the run emitted an END marker; StepLimit and Deadlock runs
/// are negative.
Classification classify(const SimulationRun& run);

struct ExampleSet {
    std::vector<SimulationRun> positives;
    std::vector<SimulationRun> negatives;
    std::map<std::vector<std::string>, std::size_t> variant_frequency; // of the collected kind
    std::size_t attempts = 0;
};

/// Iterates seeds base_seed, base_seed+1, ... collecting runs of the
/// requested kind until count is reached; throws ExhaustedError when
/// max_attempts runs out first.
ExampleSet generate_examples(const VerificationModel& vm, Classification kind, std::size_t count,
                             std::uint64_t base_seed, std::size_t max_attempts,
                             std::size_t max_steps = 10000);

struct TraceStats {
    std::size_t generated = 0;
    double runtime_s = 0;
    std::size_t shortest = 0;
    std::size_t longest = 0;
    double average = 0; // marker-free event counts
    std::size_t positive_count = 0;
    std::size_t negative_count = 0;
    double ratio_percent = 0; // positives per 100 negatives
};

TraceStats stats(std::span<const SimulationRun> runs, double runtime_s = 0.0);

std::string stats_to_table(const TraceStats& s);
std::string stats_to_json(const TraceStats& s);

/// One run on one line: events space-separated with literal END/SINK markers
/// interleaved at their positions.
std::string run_to_text(const SimulationRun& run);

struct NormalizedRun {
    std::vector<std::string> events; // markers stripped
    bool positive = false;           // segment ended with END
};

struct NormalizedTraces {
    std::vector<NormalizedRun> runs;
    std::size_t dropped_lines = 0; // warning lines plus an unterminated tail
};

/// Cleans external simulator output: drops "warning:" lines, removes
/// "N process(es) created" notices, collapses whitespace and splits the
/// token stream into runs at END/SINK markers.
NormalizedTraces normalize_external_trace(std::string_view text);

} // namespace promod
