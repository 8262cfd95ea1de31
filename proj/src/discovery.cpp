#include "promod/discovery.hpp"

#include "promod/errors.hpp"
#include "promod/ioutil.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace promod {

namespace {

void insert_sequence(Pta& pta, const EventSequence& seq, Pta::Mark mark) {
    int node = 0;
    for (const auto& label : seq) {
        auto& children = pta.nodes[static_cast<std::size_t>(node)].children;
        auto it = children.find(label);
        if (it == children.end()) {
            int fresh = static_cast<int>(pta.nodes.size());
            children.emplace(label, fresh);
            pta.nodes.emplace_back();
            node = fresh;
        } else {
            node = it->second;
        }
    }
    auto& terminal = pta.nodes[static_cast<std::size_t>(node)].mark;
    if (terminal != Pta::Mark::None && terminal != mark) throw ConflictingLabelError(seq);
    terminal = mark;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b); // keep the smaller id as representative
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
};

} // namespace

Pta build_pta(const LabeledSample& sample) {
    Pta pta;
    for (const auto& seq : sample.positives) insert_sequence(pta, seq, Pta::Mark::Accept);
    for (const auto& seq : sample.negatives) insert_sequence(pta, seq, Pta::Mark::Reject);
    return pta;
}

KtailSignature ktail_signature(const Pta& pta, int node, std::size_t k) {
    KtailSignature sig;
    EventSequence word;
    std::function<void(int, std::size_t)> walk = [&](int n, std::size_t depth) {
        const auto& nd = pta.nodes[static_cast<std::size_t>(n)];
        if (nd.mark != Pta::Mark::None) sig.emplace(word, nd.mark);
        if (depth == k) return;
        for (const auto& [label, child] : nd.children) {
            word.push_back(label);
            walk(child, depth + 1);
            word.pop_back();
        }
    };
    walk(node, 0);
    return sig;
}

KtailPartition ktail_partition(const Pta& pta, std::size_t k) {
    KtailPartition part;
    part.k = k;
    part.class_of.resize(pta.nodes.size());
    std::map<KtailSignature, int> seen;
    for (std::size_t n = 0; n < pta.nodes.size(); ++n) {
        auto sig = ktail_signature(pta, static_cast<int>(n), k);
        auto [it, inserted] = seen.emplace(std::move(sig), part.class_count);
        if (inserted) ++part.class_count;
        part.class_of[n] = it->second;
    }
    return part;
}

ProcessModel quotient(const Pta& pta, const KtailPartition& partition) {
    const std::size_t n = pta.nodes.size();
    UnionFind uf(n);
    std::map<int, int> first_member;
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = first_member.emplace(partition.class_of[i], static_cast<int>(i));
        if (!inserted) uf.unite(it->second, static_cast<int>(i));
    }

    // Deterministic fold: whenever a merged state has two same-labelled
    // edges with different targets, merge the targets, until stable.
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<int, std::string>, int> rep_delta;
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [label, child] : pta.nodes[i].children) {
                int from = uf.find(static_cast<int>(i));
                int to = uf.find(child);
                auto [it, inserted] = rep_delta.insert({{from, label}, to});
                if (!inserted && it->second != to) {
                    uf.unite(it->second, to);
                    changed = true;
                }
            }
        }
    }

    // number the final classes by smallest member node
    std::map<int, int> class_index;
    for (std::size_t i = 0; i < n; ++i) {
        int rep = uf.find(static_cast<int>(i));
        if (!class_index.count(rep)) class_index.emplace(rep, static_cast<int>(class_index.size()));
    }

    ProcessModel model;
    model.states.resize(class_index.size());
    for (const auto& [rep, idx] : class_index)
        model.states[static_cast<std::size_t>(idx)] = "c" + std::to_string(idx);
    model.initial = class_index.at(uf.find(0));

    std::map<int, bool> has_accept, has_reject;
    for (std::size_t i = 0; i < n; ++i) {
        int idx = class_index.at(uf.find(static_cast<int>(i)));
        if (pta.nodes[i].mark == Pta::Mark::Accept) has_accept[idx] = true;
        if (pta.nodes[i].mark == Pta::Mark::Reject) has_reject[idx] = true;
        for (const auto& [label, child] : pta.nodes[i].children) {
            model.delta[{idx, label}] = class_index.at(uf.find(child));
            model.alphabet.insert(label);
        }
    }
    for (const auto& kv : has_accept) {
        if (has_reject.count(kv.first)) throw MarkConflictError(kv.first);
        model.end_states.insert(kv.first);
    }
    for (const auto& kv : has_reject) model.sink_states.insert(kv.first);
    validate(model);
    return model;
}

ProcessModel discover(const LabeledSample& sample, std::size_t k) {
    const Pta pta = build_pta(sample);
    const KtailPartition partition = ktail_partition(pta, k);
    ProcessModel model = normalize(quotient(pta, partition)).model;

    for (const auto& seq : sample.positives)
        if (run(model, seq).kind != RunOutcome::Kind::End) throw InconsistentModelError(seq);
    for (const auto& seq : sample.negatives)
        if (run(model, seq).kind == RunOutcome::Kind::End) throw InconsistentModelError(seq);
    return model;
}

LabeledSample parse_sample(std::string_view text) {
    LabeledSample sample;
    bool negative_section = false;
    for (std::string_view raw : split_lines(text)) {
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "#negative") negative_section = true;
            else if (line == "#positive") negative_section = false;
            continue; // other '#' lines are comments
        }
        auto events = split_whitespace(line);
        (negative_section ? sample.negatives : sample.positives).push_back(std::move(events));
    }
    return sample;
}

std::string sample_to_text(const LabeledSample& sample) {
    std::string out;
    auto emit = [&out](const std::vector<EventSequence>& seqs) {
        for (const auto& seq : seqs) {
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (i) out += ' ';
                out += seq[i];
            }
            out += '\n';
        }
    };
    emit(sample.positives);
    if (!sample.negatives.empty()) {
        out += "#negative\n";
        emit(sample.negatives);
    }
    return out;
}

} // namespace promod
