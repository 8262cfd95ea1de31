#pragma once

#include "promod/automaton.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace promod {

using EventSequence = std::vector<std::string>;

struct LabeledSample {
    std::vector<EventSequence> positives;
    std::vector<EventSequence> negatives;
};

/// Prefix tree acceptor. Node 0 is the root (empty prefix); terminal nodes
/// of positive sequences are marked Accept, of negative ones Reject.
struct Pta {
    enum class Mark { None, Accept, Reject };
    struct Node {
        std::map<std::string, int> children;
        Mark mark = Mark::None;
    };
    std::vector<Node> nodes{1};

    bool is_leaf(int n) const { return nodes[static_cast<std::size_t>(n)].children.empty(); }
};

/// Builds the PTA; shared prefixes share nodes. Throws ConflictingLabelError
/// when one sequence is marked both positive and negative.
Pta build_pta(const LabeledSample& sample);

/// The k-tail of a node: every marked continuation of length <= k, as
/// (word, mark) pairs. Unmarked continuations carry no evidence and are
/// omitted, so at k=0 the signature reduces to the node's own mark.
using KtailSignature = std::set<std::pair<EventSequence, Pta::Mark>>;
KtailSignature ktail_signature(const Pta& pta, int node, std::size_t k);

struct KtailPartition {
    std::size_t k = 0;
    std::vector<int> class_of; // per PTA node
    int class_count = 0;
};

/// Groups PTA nodes by equal k-tail signatures.
KtailPartition ktail_partition(const Pta& pta, std::size_t k);

/// Merges each class into one state and folds same-labelled edges that left
/// the quotient nondeterministic by recursively merging their targets.
/// End states are classes containing an Accept node, sinks those containing
/// a Reject node; a class containing both raises MarkConflictError.
ProcessModel quotient(const Pta& pta, const KtailPartition& partition);

/// build_pta -> ktail_partition -> quotient -> normalize, then re-checks the
/// sample: every positive must run to End and no negative may. A violation
/// raises InconsistentModelError (internal bug guard).
ProcessModel discover(const LabeledSample& sample, std::size_t k);

/// Sample text: one trace per line, space-separated events. A line equal to
/// "#negative" starts the negative section ("#positive" switches back);
/// other '#' lines are comments.
LabeledSample parse_sample(std::string_view text);
std::string sample_to_text(const LabeledSample& sample);

} // namespace promod
