#include "promod/errors.hpp"
#include "promod/ltl.hpp"

#include <vector>

namespace promod {

namespace {

// Positions 0..P+C-1 cover every distinct suffix of prefix.cycle^omega;
// stepping past the end wraps to the cycle start.
struct Lasso {
    std::span<const Valuation> prefix, cycle;
    std::size_t size() const { return prefix.size() + cycle.size(); }
    const Valuation& at(std::size_t i) const {
        return i < prefix.size() ? prefix[i] : cycle[i - prefix.size()];
    }
    std::size_t next(std::size_t i) const {
        return i + 1 < size() ? i + 1 : prefix.size();
    }
};

bool eval_at(const LtlFormula& f, const Lasso& w, std::size_t pos);

// Walks forward from pos until `stop` decides, or until a position repeats
// (the walk is deterministic, so a repeat means the remainder is settled).
template <typename StopFn>
bool walk(const Lasso& w, std::size_t pos, bool default_result, StopFn&& stop) {
    std::vector<bool> seen(w.size(), false);
    std::size_t i = pos;
    while (!seen[i]) {
        seen[i] = true;
        if (auto verdict = stop(i)) return *verdict;
        i = w.next(i);
    }
    return default_result;
}

bool eval_at(const LtlFormula& f, const Lasso& w, std::size_t pos) {
    using K = LtlFormula::Kind;
    switch (f.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Pred: return eval_predicate(f.pred, w.at(pos));
    case K::Not: return !eval_at(*f.lhs, w, pos);
    case K::And: return eval_at(*f.lhs, w, pos) && eval_at(*f.rhs, w, pos);
    case K::Or: return eval_at(*f.lhs, w, pos) || eval_at(*f.rhs, w, pos);
    case K::Implies: return !eval_at(*f.lhs, w, pos) || eval_at(*f.rhs, w, pos);
    case K::Next: return eval_at(*f.lhs, w, w.next(pos));
    case K::Finally:
        return walk(w, pos, false, [&](std::size_t i) -> std::optional<bool> {
            if (eval_at(*f.lhs, w, i)) return true;
            return std::nullopt;
        });
    case K::Globally:
        return walk(w, pos, true, [&](std::size_t i) -> std::optional<bool> {
            if (!eval_at(*f.lhs, w, i)) return false;
            return std::nullopt;
        });
    case K::Until:
        return walk(w, pos, false, [&](std::size_t i) -> std::optional<bool> {
            if (eval_at(*f.rhs, w, i)) return true;
            if (!eval_at(*f.lhs, w, i)) return false;
            return std::nullopt;
        });
    }
    return false;
}

} // namespace

bool eval_ltl(const LtlFormula& f, std::span<const Valuation> prefix,
              std::span<const Valuation> cycle) {
    if (cycle.empty()) throw Error("eval_ltl requires a non-empty cycle");
    return eval_at(f, Lasso{prefix, cycle}, 0);
}

} // namespace promod
