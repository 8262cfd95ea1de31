#pragma once

#include "promod/automaton.hpp"
#include "promod/discovery.hpp"
#include "promod/sim.hpp"

#include <set>
#include <span>
#include <vector>

namespace promod {

struct ClassifiedTrace {
    EventSequence events;
    Classification label = Classification::Positive;
};

struct RepairResult {
    ProcessModel model;
    LabeledSample sample; // the augmented sample the model was learned from
    std::set<EventSequence> added_accepted;   // accepted now, not before
    std::set<EventSequence> removed_accepted; // accepted before, not now
};

/// Feeds classified runs back into the sample (positives and negatives
/// respectively, duplicates collapsed), re-runs discovery at the given k and
/// diffs the accepted language against the old model on traces up to
/// diff_len events.
RepairResult repair_loop(const ProcessModel& old_model, const LabeledSample& sample,
                         std::span<const ClassifiedTrace> classified, std::size_t k,
                         std::size_t diff_len);

} // namespace promod
