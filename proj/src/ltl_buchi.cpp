#include "promod/errors.hpp"
#include "promod/ltl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <vector>

namespace promod {

namespace {

// ---- negation normal form over an interning arena --------------------------
//
// Kinds after NNF: True, False, Lit (predicate; negation folded into the
// comparator), And, Or, Next, Until, Release. Interned ids make the tableau's
// formula sets cheap.

struct Arena {
    enum class K { True, False, Lit, And, Or, Next, Until, Release };
    struct Node {
        K k;
        Predicate pred; // Lit
        int a = -1, b = -1;
    };
    std::vector<Node> nodes;
    std::map<std::tuple<int, std::string, int, std::int64_t, int, int>, int> memo;

    int intern(K k, const Predicate& pred, int a, int b) {
        auto key = std::make_tuple(static_cast<int>(k), pred.variable, static_cast<int>(pred.cmp),
                                   pred.constant, a, b);
        auto [it, inserted] = memo.emplace(key, static_cast<int>(nodes.size()));
        if (inserted) nodes.push_back({k, pred, a, b});
        return it->second;
    }

    int truth(bool v) { return intern(v ? K::True : K::False, {}, -1, -1); }
    int lit(Predicate p) { return intern(K::Lit, p, -1, -1); }

    int conj(int a, int b) {
        if (nodes[a].k == K::False || nodes[b].k == K::False) return truth(false);
        if (nodes[a].k == K::True) return b;
        if (nodes[b].k == K::True) return a;
        if (a == b) return a;
        return intern(K::And, {}, std::min(a, b), std::max(a, b));
    }
    int disj(int a, int b) {
        if (nodes[a].k == K::True || nodes[b].k == K::True) return truth(true);
        if (nodes[a].k == K::False) return b;
        if (nodes[b].k == K::False) return a;
        if (a == b) return a;
        return intern(K::Or, {}, std::min(a, b), std::max(a, b));
    }
    int next(int a) {
        if (nodes[a].k == K::True || nodes[a].k == K::False) return a;
        return intern(K::Next, {}, a, -1);
    }
    int until(int a, int b) {
        if (nodes[b].k == K::True) return truth(true);
        if (nodes[b].k == K::False) return truth(false);
        if (nodes[a].k == K::False) return b;
        return intern(K::Until, {}, a, b);
    }
    int release(int a, int b) {
        if (nodes[b].k == K::True) return truth(true);
        if (nodes[b].k == K::False) return truth(false);
        if (nodes[a].k == K::True) return b;
        return intern(K::Release, {}, a, b);
    }
};

Cmp negate_cmp(Cmp c) {
    switch (c) {
    case Cmp::Eq: return Cmp::Ne;
    case Cmp::Ne: return Cmp::Eq;
    case Cmp::Lt: return Cmp::Ge;
    case Cmp::Le: return Cmp::Gt;
    case Cmp::Gt: return Cmp::Le;
    case Cmp::Ge: return Cmp::Lt;
    }
    return c;
}

int nnf(const LtlFormula& f, bool negated, Arena& arena) {
    using K = LtlFormula::Kind;
    switch (f.kind) {
    case K::True: return arena.truth(!negated);
    case K::False: return arena.truth(negated);
    case K::Pred: {
        Predicate p = f.pred;
        if (negated) p.cmp = negate_cmp(p.cmp);
        return arena.lit(p);
    }
    case K::Not: return nnf(*f.lhs, !negated, arena);
    case K::And: {
        int a = nnf(*f.lhs, negated, arena), b = nnf(*f.rhs, negated, arena);
        return negated ? arena.disj(a, b) : arena.conj(a, b);
    }
    case K::Or: {
        int a = nnf(*f.lhs, negated, arena), b = nnf(*f.rhs, negated, arena);
        return negated ? arena.conj(a, b) : arena.disj(a, b);
    }
    case K::Implies: {
        int a = nnf(*f.lhs, !negated, arena), b = nnf(*f.rhs, negated, arena);
        return negated ? arena.conj(a, b) : arena.disj(a, b);
    }
    case K::Next: return arena.next(nnf(*f.lhs, negated, arena));
    case K::Finally: { // <>g = true U g ; ![]... dual: [] = false R
        int g = nnf(*f.lhs, negated, arena);
        return negated ? arena.release(arena.truth(false), g)
                       : arena.until(arena.truth(true), g);
    }
    case K::Globally: {
        int g = nnf(*f.lhs, negated, arena);
        return negated ? arena.until(arena.truth(true), g)
                       : arena.release(arena.truth(false), g);
    }
    case K::Until: {
        int a = nnf(*f.lhs, negated, arena), b = nnf(*f.rhs, negated, arena);
        return negated ? arena.release(a, b) : arena.until(a, b);
    }
    }
    return arena.truth(false);
}

// ---- declarative (tableau) expansion ---------------------------------------
//
// Classic on-the-fly node expansion: each graph node carries the obligations
// it has discharged for the current position (old_) and what it defers to the
// next position (next_). Nodes with equal (old_, next_) merge. Transitions
// into a node are guarded by the literals in its old_ set, and one acceptance
// set per Until subformula enforces the eventuality.

struct TableauNode {
    std::set<int> incoming; // node ids; -1 = initial pseudo-node
    std::set<int> old_, next_;
};

class Tableau {
public:
    explicit Tableau(Arena& arena) : arena_(arena) {}

    std::vector<TableauNode> expand_all(int root) {
        expand({-1}, {root}, {}, {});
        return nodes_;
    }

private:
    void expand(std::set<int> incoming, std::set<int> new_, std::set<int> old_,
                std::set<int> next_) {
        if (new_.empty()) {
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                if (nodes_[i].old_ == old_ && nodes_[i].next_ == next_) {
                    nodes_[i].incoming.insert(incoming.begin(), incoming.end());
                    return;
                }
            }
            const int id = static_cast<int>(nodes_.size());
            nodes_.push_back({incoming, old_, next_});
            expand({id}, nodes_[static_cast<std::size_t>(id)].next_, {}, {});
            return;
        }
        const int eta = *new_.begin();
        new_.erase(new_.begin());
        const auto& node = arena_.nodes[static_cast<std::size_t>(eta)];
        using K = Arena::K;
        switch (node.k) {
        case K::False:
            return; // contradiction: drop this branch
        case K::True:
            expand(std::move(incoming), std::move(new_), std::move(old_), std::move(next_));
            return;
        case K::Lit: {
            old_.insert(eta);
            expand(std::move(incoming), std::move(new_), std::move(old_), std::move(next_));
            return;
        }
        case K::And: {
            old_.insert(eta);
            if (!old_.count(node.a)) new_.insert(node.a);
            if (!old_.count(node.b)) new_.insert(node.b);
            expand(std::move(incoming), std::move(new_), std::move(old_), std::move(next_));
            return;
        }
        case K::Next: {
            old_.insert(eta);
            next_.insert(node.a);
            expand(std::move(incoming), std::move(new_), std::move(old_), std::move(next_));
            return;
        }
        case K::Or: {
            auto old2 = old_;
            old2.insert(eta);
            auto new1 = new_;
            if (!old2.count(node.a)) new1.insert(node.a);
            expand(incoming, std::move(new1), old2, next_);
            auto new2 = std::move(new_);
            if (!old2.count(node.b)) new2.insert(node.b);
            expand(std::move(incoming), std::move(new2), std::move(old2), std::move(next_));
            return;
        }
        case K::Until: { // aUb = b | (a & X(aUb))
            auto old2 = old_;
            old2.insert(eta);
            auto new1 = new_;
            if (!old2.count(node.a)) new1.insert(node.a);
            auto next1 = next_;
            next1.insert(eta);
            expand(incoming, std::move(new1), old2, std::move(next1));
            auto new2 = std::move(new_);
            if (!old2.count(node.b)) new2.insert(node.b);
            expand(std::move(incoming), std::move(new2), std::move(old2), std::move(next_));
            return;
        }
        case K::Release: { // aRb = (a & b) | (b & X(aRb))
            auto old2 = old_;
            old2.insert(eta);
            auto new1 = new_;
            if (!old2.count(node.a)) new1.insert(node.a);
            if (!old2.count(node.b)) new1.insert(node.b);
            expand(incoming, std::move(new1), old2, next_);
            auto new2 = std::move(new_);
            if (!old2.count(node.b)) new2.insert(node.b);
            auto next2 = std::move(next_);
            next2.insert(eta);
            expand(std::move(incoming), std::move(new2), std::move(old2), std::move(next2));
            return;
        }
        }
    }

    Arena& arena_;
    std::vector<TableauNode> nodes_;
};

// ---- bisimulation quotient --------------------------------------------------

std::string guard_key(const std::vector<Predicate>& guard) {
    std::string key;
    for (const auto& p : guard)
        key += p.variable + "\x01" + std::to_string(static_cast<int>(p.cmp)) + "\x01" +
               std::to_string(p.constant) + "\x02";
    return key;
}

BuchiAutomaton reduce(const BuchiAutomaton& in) {
    const std::size_t n = in.states.size();

    // drop states unreachable from the initial state
    std::vector<bool> reachable(n, false);
    std::vector<int> stack{in.initial};
    reachable[static_cast<std::size_t>(in.initial)] = true;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (const auto& tr : in.states[static_cast<std::size_t>(s)].transitions)
            if (!reachable[static_cast<std::size_t>(tr.target)]) {
                reachable[static_cast<std::size_t>(tr.target)] = true;
                stack.push_back(tr.target);
            }
    }

    // partition refinement on (accepting, guarded successor classes)
    std::vector<int> cls(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (reachable[i]) cls[i] = in.states[i].accepting ? 1 : 0;

    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<int, std::set<std::pair<std::string, int>>>, int> groups;
        std::vector<int> next_cls(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            if (!reachable[i]) continue;
            std::set<std::pair<std::string, int>> sig;
            for (const auto& tr : in.states[i].transitions)
                if (reachable[static_cast<std::size_t>(tr.target)])
                    sig.emplace(guard_key(tr.guard), cls[static_cast<std::size_t>(tr.target)]);
            auto [it, inserted] =
                groups.emplace(std::make_pair(cls[i], std::move(sig)), static_cast<int>(groups.size()));
            next_cls[i] = it->second;
        }
        if (next_cls != cls) {
            changed = true;
            cls = std::move(next_cls);
        }
    }

    // rebuild, numbering classes by first member for determinism
    std::map<int, int> renumber;
    for (std::size_t i = 0; i < n; ++i)
        if (reachable[i] && !renumber.count(cls[i]))
            renumber.emplace(cls[i], static_cast<int>(renumber.size()));

    BuchiAutomaton out;
    out.states.resize(renumber.size());
    out.initial = renumber.at(cls[static_cast<std::size_t>(in.initial)]);
    std::vector<bool> built(renumber.size(), false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!reachable[i]) continue;
        const int id = renumber.at(cls[i]);
        if (built[static_cast<std::size_t>(id)]) continue;
        built[static_cast<std::size_t>(id)] = true;
        auto& st = out.states[static_cast<std::size_t>(id)];
        st.accepting = in.states[i].accepting;
        std::set<std::pair<std::string, int>> seen;
        for (const auto& tr : in.states[i].transitions) {
            if (!reachable[static_cast<std::size_t>(tr.target)]) continue;
            const int tgt = renumber.at(cls[static_cast<std::size_t>(tr.target)]);
            if (seen.emplace(guard_key(tr.guard), tgt).second)
                st.transitions.push_back({tgt, tr.guard});
        }
        std::sort(st.transitions.begin(), st.transitions.end(),
                  [](const BuchiAutomaton::Transition& a, const BuchiAutomaton::Transition& b) {
                      return std::make_pair(a.target, guard_key(a.guard)) <
                             std::make_pair(b.target, guard_key(b.guard));
                  });
    }
    return out;
}

} // namespace

BuchiAutomaton to_buchi(const LtlFormula& f) {
    Arena arena;
    const int root = nnf(f, false, arena);

    Tableau tableau(arena);
    const std::vector<TableauNode> nodes = tableau.expand_all(root);

    // acceptance sets: one per Until in the closure
    std::vector<int> untils;
    for (std::size_t i = 0; i < arena.nodes.size(); ++i)
        if (arena.nodes[i].k == Arena::K::Until) untils.push_back(static_cast<int>(i));

    auto in_accept_set = [&](const TableauNode& node, int until_id) {
        return node.old_.count(until_id) == 0 ||
               node.old_.count(arena.nodes[static_cast<std::size_t>(until_id)].b) > 0;
    };
    auto node_guard = [&](const TableauNode& node) {
        std::vector<Predicate> guard;
        for (int id : node.old_)
            if (arena.nodes[static_cast<std::size_t>(id)].k == Arena::K::Lit)
                guard.push_back(arena.nodes[static_cast<std::size_t>(id)].pred);
        std::sort(guard.begin(), guard.end());
        return guard;
    };

    // generalized automaton: state 0 = initial pseudo-node, node i -> state i+1
    const std::size_t k = std::max<std::size_t>(untils.size(), 1);
    const std::size_t gn = nodes.size() + 1;

    auto gba_accepting = [&](std::size_t gstate, std::size_t set_idx) {
        if (untils.empty()) return true;
        if (gstate == 0) return true; // empty old_: trivially in every set
        return in_accept_set(nodes[gstate - 1], untils[set_idx]);
    };

    // degeneralize: layer advances past set j when leaving a state in set j
    BuchiAutomaton nba;
    nba.states.resize(gn * k);
    nba.initial = 0; // (gstate 0, layer 0)
    auto deg_id = [&](std::size_t gstate, std::size_t layer) {
        return static_cast<int>(gstate * k + layer);
    };
    for (std::size_t gs = 0; gs < gn; ++gs) {
        for (std::size_t layer = 0; layer < k; ++layer) {
            auto& st = nba.states[static_cast<std::size_t>(deg_id(gs, layer))];
            // the initial pseudo-node has no incoming edges, so its flag is
            // semantically dead; keeping it false lets reduce() merge it
            st.accepting = gs != 0 && layer == 0 && gba_accepting(gs, 0);
            const std::size_t next_layer =
                gba_accepting(gs, layer) ? (layer + 1) % k : layer;
            for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
                if (!nodes[ni].incoming.count(static_cast<int>(gs) - 1)) continue;
                st.transitions.push_back({deg_id(ni + 1, next_layer), node_guard(nodes[ni])});
            }
        }
    }

    return reduce(nba);
}

bool accepts_lasso(const BuchiAutomaton& b, std::span<const Valuation> prefix,
                   std::span<const Valuation> cycle) {
    if (cycle.empty()) throw Error("accepts_lasso requires a non-empty cycle");
    const std::size_t positions = prefix.size() + cycle.size();
    auto val_at = [&](std::size_t i) -> const Valuation& {
        return i < prefix.size() ? prefix[i] : cycle[i - prefix.size()];
    };
    auto next_pos = [&](std::size_t i) { return i + 1 < positions ? i + 1 : prefix.size(); };
    auto guard_sat = [&](const std::vector<Predicate>& guard, const Valuation& v) {
        for (const auto& p : guard)
            if (!eval_predicate(p, v)) return false;
        return true;
    };

    const std::size_t pn = b.states.size() * positions;
    auto pid = [&](int state, std::size_t pos) {
        return static_cast<std::size_t>(state) * positions + pos;
    };

    // reachable product nodes
    std::vector<bool> reach(pn, false);
    std::vector<std::size_t> stack{pid(b.initial, 0)};
    reach[stack[0]] = true;
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        const int s = static_cast<int>(node / positions);
        const std::size_t pos = node % positions;
        for (const auto& tr : b.states[static_cast<std::size_t>(s)].transitions) {
            if (!guard_sat(tr.guard, val_at(pos))) continue;
            const std::size_t nxt = pid(tr.target, next_pos(pos));
            if (!reach[nxt]) {
                reach[nxt] = true;
                stack.push_back(nxt);
            }
        }
    }

    // accepted iff some reachable accepting product node lies on a cycle
    for (std::size_t node = 0; node < pn; ++node) {
        if (!reach[node]) continue;
        const int s = static_cast<int>(node / positions);
        if (!b.states[static_cast<std::size_t>(s)].accepting) continue;

        std::vector<bool> seen(pn, false);
        std::vector<std::size_t> dfs{node};
        bool closes = false;
        while (!dfs.empty() && !closes) {
            const std::size_t cur = dfs.back();
            dfs.pop_back();
            const int cs = static_cast<int>(cur / positions);
            const std::size_t cpos = cur % positions;
            for (const auto& tr : b.states[static_cast<std::size_t>(cs)].transitions) {
                if (!guard_sat(tr.guard, val_at(cpos))) continue;
                const std::size_t nxt = pid(tr.target, next_pos(cpos));
                if (nxt == node) {
                    closes = true;
                    break;
                }
                if (!seen[nxt]) {
                    seen[nxt] = true;
                    dfs.push_back(nxt);
                }
            }
        }
        if (closes) return true;
    }
    return false;
}

} // namespace promod
