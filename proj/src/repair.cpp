#include "promod/repair.hpp"

#include <algorithm>

namespace promod {

RepairResult repair_loop(const ProcessModel& old_model, const LabeledSample& sample,
                         std::span<const ClassifiedTrace> classified, std::size_t k,
                         std::size_t diff_len) {
    RepairResult result;
    result.sample = sample;

    std::set<EventSequence> have_positive(sample.positives.begin(), sample.positives.end());
    std::set<EventSequence> have_negative(sample.negatives.begin(), sample.negatives.end());
    for (const auto& ct : classified) {
        if (ct.label == Classification::Positive) {
            if (have_positive.insert(ct.events).second) result.sample.positives.push_back(ct.events);
        } else {
            if (have_negative.insert(ct.events).second) result.sample.negatives.push_back(ct.events);
        }
    }

    result.model = discover(result.sample, k);

    const auto before = enumerate_traces(old_model, diff_len, TraceTarget::End);
    const auto after = enumerate_traces(result.model, diff_len, TraceTarget::End);
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::inserter(result.added_accepted, result.added_accepted.end()));
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                        std::inserter(result.removed_accepted, result.removed_accepted.end()));
    return result;
}

} // namespace promod
