#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tb/check.hpp"
#include "tb/decomposition.hpp"
#include "tb/flow.hpp"
#include "tb/graph.hpp"
#include "tb/protocol.hpp"

namespace tb {

struct SolveResult {
    int rounds = 0;
    BroadcastProtocol protocol;
};

inline int ceil_log2(int64_t x) {
    int r = 0;
    int64_t p = 1;
    while (p < x) {
        p <<= 1;
        r++;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Subset DP oracle
//
// Breadth-first search over informed vertex sets. A transition I -> I|T is
// admitted iff a bipartite matching from I saturates T (each sender informs at
// most one new vertex per round, along edges). First reach is optimal; states
// store one predecessor for protocol reconstruction.

namespace detail {

inline std::vector<uint64_t> adjacency_masks(const Graph& g) {
    std::vector<uint64_t> adj(g.n(), 0);
    for (auto [u, v] : g.edges()) {
        adj[u] |= 1ULL << v;
        adj[v] |= 1ULL << u;
    }
    return adj;
}

inline uint64_t to_mask(const VertexSet& s) {
    uint64_t m = 0;
    for (int v = s.next(0); v != -1; v = s.next(v + 1)) m |= 1ULL << v;
    return m;
}

// Deterministic matching used both for feasibility and reconstruction: senders
// ascending, targets ascending.
inline bool match_round(const std::vector<uint64_t>& adj, uint64_t informed, uint64_t targets,
                        std::vector<std::pair<int, int>>* out) {
    std::vector<int> targetBits;
    for (uint64_t t = targets; t; t &= t - 1) targetBits.push_back(std::countr_zero(t));
    std::vector<uint64_t> senderMasks;
    std::vector<int> senderIds;
    for (uint64_t i = informed; i; i &= i - 1) {
        int u = std::countr_zero(i);
        uint64_t reachable = adj[u] & targets;
        if (reachable) {
            senderMasks.push_back(reachable);
            senderIds.push_back(u);
        }
    }
    std::vector<int> matchSender;
    if (!MaskMatcher::assign(senderMasks, targetBits, matchSender)) return false;
    if (out) {
        out->clear();
        for (std::size_t i = 0; i < targetBits.size(); ++i)
            out->emplace_back(senderIds[matchSender[i]], targetBits[i]);
    }
    return true;
}

}  // namespace detail

struct SubsetDpOptions {
    int maxVertices = 15;    // instance-too-large guard for the public oracle
    std::optional<int> cap;  // round budget
};

// Core search: minimum rounds from `sources` until accept(informedMask) holds.
// Returns nullopt when the budget is exhausted (or accept is unreachable).
inline std::optional<SolveResult> subset_dp_reach(const Graph& g, const VertexSet& sources,
                                                  const std::function<bool(uint64_t)>& accept,
                                                  std::optional<int> cap, int maxVertices) {
    const int n = g.n();
    check(n <= maxVertices, "subset dp: instance too large (n=" + std::to_string(n) + ")");
    check(n <= 62, "subset dp: more than 62 vertices unsupported");
    check(!sources.empty(), "subset dp: empty source set");

    const auto adj = detail::adjacency_masks(g);
    const uint64_t start = detail::to_mask(sources);

    auto build = [&](const std::vector<uint64_t>& chain) {
        BroadcastProtocol p = BroadcastProtocol::start(n, sources);
        std::vector<std::pair<int, int>> matched;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            uint64_t targets = chain[i + 1] & ~chain[i];
            check(detail::match_round(adj, chain[i], targets, &matched),
                  "subset dp: reconstruction matching vanished");
            for (auto [u, v] : matched) p.add(v, u, static_cast<int>(i) + 1);
        }
        p.rounds = static_cast<int>(chain.size()) - 1;
        return p;
    };

    if (accept(start)) return SolveResult{0, build({start})};

    std::unordered_map<uint64_t, uint64_t> pred;  // state -> predecessor
    pred.emplace(start, start);
    std::vector<uint64_t> frontier{start};
    int round = 0;
    while (!frontier.empty()) {
        if (cap && round >= *cap) return std::nullopt;
        round++;
        std::vector<uint64_t> next;
        for (uint64_t informed : frontier) {
            uint64_t reach = 0;
            for (uint64_t i = informed; i; i &= i - 1) reach |= adj[std::countr_zero(i)];
            reach &= ~informed;
            if (!reach) continue;
            check(std::popcount(reach) <= 22, "subset dp: branching too wide");
            const int senders = std::popcount(informed);
            for (uint64_t sub = reach; sub; sub = (sub - 1) & reach) {
                if (std::popcount(sub) > senders) continue;
                uint64_t j = informed | sub;
                if (pred.count(j)) continue;
                if (!detail::match_round(adj, informed, sub, nullptr)) continue;
                pred.emplace(j, informed);
                if (accept(j)) {
                    std::vector<uint64_t> chain{j};
                    while (chain.back() != start) chain.push_back(pred.at(chain.back()));
                    std::reverse(chain.begin(), chain.end());
                    return SolveResult{round, build(chain)};
                }
                next.push_back(j);
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

// b(G, sources) by exhaustive subset DP; the designated oracle for every other
// solver. Throws when n exceeds the configured limit; returns nullopt only
// when a round cap is given and exceeded.
inline std::optional<SolveResult> subset_dp_opt(const Graph& g, const VertexSet& sources,
                                                const SubsetDpOptions& opt = {}) {
    check(is_connected(g), "subset dp: graph disconnected");
    const uint64_t full = (g.n() >= 62) ? (~0ULL >> 2) : ((1ULL << g.n()) - 1);
    return subset_dp_reach(
        g, sources, [full](uint64_t m) { return m == full; }, opt.cap, opt.maxVertices);
}

inline std::optional<SolveResult> subset_dp_opt(const Graph& g, int s,
                                                const SubsetDpOptions& opt = {}) {
    return subset_dp_opt(g, VertexSet(g.n(), {s}), opt);
}

// ---------------------------------------------------------------------------
// Trees: children served in decreasing order of their own broadcast time.

inline SolveResult tree_opt(const Graph& g, int s) {
    const int n = g.n();
    check(is_connected(g) && g.m() == n - 1, "tree_opt: input is not a tree");

    std::vector<int> order, par(n, -1), b(n, 0);
    std::vector<bool> seen(n, false);
    order.push_back(s);
    seen[s] = true;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int u : g.neighbors(order[i]))
            if (!seen[u]) {
                seen[u] = true;
                par[u] = order[i];
                order.push_back(u);
            }
    std::vector<std::vector<int>> children(n);
    for (int v : order)
        if (v != s) children[par[v]].push_back(v);

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        auto& ch = children[v];
        std::sort(ch.begin(), ch.end(),
                  [&](int a, int c) { return b[a] != b[c] ? b[a] > b[c] : a < c; });
        for (std::size_t i = 0; i < ch.size(); ++i)
            b[v] = std::max(b[v], static_cast<int>(i) + 1 + b[ch[i]]);
    }

    SolveResult res;
    res.rounds = b[s];
    res.protocol = BroadcastProtocol::start(n, VertexSet(n, {s}), b[s]);
    std::vector<int> when(n, 0);
    for (int v : order)
        for (std::size_t i = 0; i < children[v].size(); ++i) {
            int c = children[v][i];
            when[c] = when[v] + static_cast<int>(i) + 1;
            res.protocol.add(c, v, when[c]);
        }
    return res;
}

// ---------------------------------------------------------------------------
// Degree-2 instances (every vertex except s has degree at most 2): G - s is a
// disjoint union of paths attached to s at endpoints, propagation along each
// path is forced, and only s's transmission schedule needs searching.

namespace detail {

struct PathItem {
    int length = 0;        // vertices
    bool twoEnds = false;  // both endpoints adjacent to s
};

struct Degree2Model {
    std::vector<PathItem> items;
    int n = 0;
};

inline Degree2Model degree2_model(const Graph& g, int s) {
    const int n = g.n();
    for (int v = 0; v < n; ++v)
        check(v == s || g.degree(v) <= 2,
              "degree2: vertex " + std::to_string(v) + " violates the degree condition");
    check(is_connected(g), "degree2: graph disconnected");
    Degree2Model model;
    model.n = n;
    for (const auto& comp : components(g, VertexSet(n, {s}))) {
        int L = comp.count();
        int attachments = 0;
        int innerEdges = 0;
        for (int v = comp.next(0); v != -1; v = comp.next(v + 1)) {
            int inner = 0;
            for (int u : g.neighbors(v)) {
                if (u == s) attachments++;
                else if (comp.test(u)) inner++;
            }
            check(inner <= 2, "degree2: component not a path");
            if (g.has_edge(v, s)) check(inner <= 1, "degree2: attachment not at an endpoint");
            innerEdges += inner;
        }
        check(innerEdges == 2 * (L - 1), "degree2: component has a cycle");
        check(1 <= attachments && attachments <= 2, "degree2: component attachment count");
        model.items.push_back({L, attachments == 2});
    }
    return model;
}

// Earliest-deadline-first assignment of single-send demands to free rounds.
inline bool edf_feasible(std::vector<int> deadlines, const std::vector<bool>& taken, int t) {
    std::sort(deadlines.begin(), deadlines.end());
    int round = 1;
    for (int d : deadlines) {
        while (round <= t && taken[round]) round++;
        if (round > d) return false;
        round++;
    }
    return true;
}

inline bool degree2_pairs_dfs(const std::vector<int>& pairBounds, std::size_t idx,
                              std::vector<bool>& taken, const std::vector<int>& deadlines, int t) {
    if (idx == pairBounds.size()) return edf_feasible(deadlines, taken, t);
    const int K = pairBounds[idx];
    for (int r1 = 1; r1 <= t; ++r1) {
        if (taken[r1] || 2 * r1 >= K) continue;
        for (int r2 = r1 + 1; r2 <= t && r1 + r2 <= K; ++r2) {
            if (taken[r2]) continue;
            taken[r1] = taken[r2] = true;
            bool ok = degree2_pairs_dfs(pairBounds, idx + 1, taken, deadlines, t);
            taken[r1] = taken[r2] = false;
            if (ok) return true;
        }
    }
    return false;
}

inline bool degree2_feasible(const Degree2Model& model, int t) {
    std::vector<int> deadlines;  // one-send demands: latest usable round
    std::map<int, int> doubleByLength;
    for (const auto& item : model.items) {
        if (item.twoEnds) {
            doubleByLength[item.length]++;
        } else {
            int d = t - item.length + 1;
            if (d < 1) return false;
            deadlines.push_back(d);
        }
    }
    // Per two-end path: either one send by t-L+1 or two sends with
    // r1+r2 <= 2t+2-L. Equal lengths are interchangeable, so only the count of
    // one-send paths per length class is enumerated.
    std::vector<std::pair<int, int>> classes(doubleByLength.begin(), doubleByLength.end());
    std::vector<int> pairBounds;

    std::function<bool(std::size_t)> assign = [&](std::size_t ci) -> bool {
        if (ci == classes.size()) {
            check(pairBounds.size() <= 8, "degree2: too many two-send paths");
            std::vector<int> sorted = pairBounds;
            std::sort(sorted.begin(), sorted.end());
            std::vector<bool> taken(t + 1, false);
            return degree2_pairs_dfs(sorted, 0, taken, deadlines, t);
        }
        auto [L, cnt] = classes[ci];
        for (int oneSend = 0; oneSend <= cnt; ++oneSend) {
            if (oneSend > 0 && t - L + 1 < 1) break;
            for (int i = 0; i < oneSend; ++i) deadlines.push_back(t - L + 1);
            for (int i = 0; i < cnt - oneSend; ++i) pairBounds.push_back(2 * t + 2 - L);
            bool ok = assign(ci + 1);
            deadlines.resize(deadlines.size() - oneSend);
            pairBounds.resize(pairBounds.size() - (cnt - oneSend));
            if (ok) return true;
        }
        return false;
    };
    return assign(0);
}

}  // namespace detail

// Optimum round count on degree-2 instances.
inline int degree2_exact(const Graph& g, int s) {
    const int n = g.n();
    if (n == 1) return 0;
    auto model = detail::degree2_model(g, s);
    int lb = std::max(ceil_log2(n), eccentricity(g, s));
    while (1 + static_cast<int64_t>(lb) * (lb + 1) / 2 < n) lb++;  // non-s vertices send once
    for (int t = std::max(lb, 1);; ++t)
        if (detail::degree2_feasible(model, t)) return t;
}

// ---------------------------------------------------------------------------
// Branch and bound
//
// Iterative deepening over the round budget, branching on maximal per-round
// matchings (some optimal protocol always uses maximal rounds: an idle
// informed vertex can take over its neighbor's later reception unchanged).

struct BnbResult {
    int rounds = 0;
    BroadcastProtocol protocol;
    bool optimal = false;
};

namespace detail {

struct BnbContext {
    const Graph& g;
    const std::vector<uint64_t>& adj;
    uint64_t full;
    int n;
    int t = 0;
    std::unordered_map<uint64_t, int> seen;  // state -> earliest round reached
    std::vector<std::vector<std::pair<int, int>>> trace;
    std::chrono::steady_clock::time_point deadline;
    bool timedOut = false;

    bool expired() {
        if (timedOut) return true;
        if (std::chrono::steady_clock::now() > deadline) timedOut = true;
        return timedOut;
    }

    bool dfs(uint64_t informed, int round) {
        if (informed == full) {
            trace.resize(round);
            return true;
        }
        if (round >= t || expired()) return false;
        const int rem = t - round;
        const int have = std::popcount(informed);
        if (rem < 62 && (static_cast<uint64_t>(have) << rem) < static_cast<uint64_t>(n))
            return false;
        auto it = seen.find(informed);
        if (it != seen.end() && it->second <= round) return false;
        seen[informed] = round;

        // Hop distances from the informed set; doubles as a reach bound.
        std::vector<int> dist(n, -1);
        std::vector<int> queue;
        for (uint64_t i = informed; i; i &= i - 1) {
            int v = std::countr_zero(i);
            dist[v] = 0;
            queue.push_back(v);
        }
        int far = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi)
            for (int u : g.neighbors(queue[qi]))
                if (dist[u] == -1) {
                    dist[u] = dist[queue[qi]] + 1;
                    far = std::max(far, dist[u]);
                    queue.push_back(u);
                }
        if (far > rem) return false;

        uint64_t reach = 0;
        for (uint64_t i = informed; i; i &= i - 1) reach |= adj[std::countr_zero(i)];
        reach &= ~informed;
        std::vector<int> receivers;
        for (uint64_t r = reach; r; r &= r - 1) receivers.push_back(std::countr_zero(r));

        // Prefer receivers whose uninformed region runs deepest.
        std::vector<int> depth(receivers.size(), 0);
        for (std::size_t i = 0; i < receivers.size(); ++i) {
            std::vector<int> d2(n, -1), q2{receivers[i]};
            d2[receivers[i]] = 0;
            for (std::size_t qi = 0; qi < q2.size(); ++qi)
                for (int u : g.neighbors(q2[qi]))
                    if (d2[u] == -1 && !((informed >> u) & 1)) {
                        d2[u] = d2[q2[qi]] + 1;
                        depth[i] = std::max(depth[i], d2[u]);
                        q2.push_back(u);
                    }
        }
        std::vector<int> order(receivers.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return depth[a] != depth[b] ? depth[a] > depth[b] : receivers[a] < receivers[b];
        });

        std::vector<int> senders;
        for (uint64_t i = informed; i; i &= i - 1) {
            int u = std::countr_zero(i);
            if (adj[u] & reach) senders.push_back(u);
        }
        std::vector<std::pair<int, int>> chosen;
        return branch(informed, round, senders, 0, receivers, order, 0, chosen);
    }

    bool branch(uint64_t informed, int round, const std::vector<int>& senders, std::size_t si,
                const std::vector<int>& receivers, const std::vector<int>& order,
                uint64_t claimed, std::vector<std::pair<int, int>>& chosen) {
        if (si == senders.size()) {
            if (chosen.empty()) return false;
            uint64_t freeRecv = 0;
            for (int r : receivers)
                if (!((claimed >> r) & 1)) freeRecv |= 1ULL << r;
            for (int u : senders) {
                bool used = false;
                for (auto [a, b] : chosen)
                    if (a == u) {
                        used = true;
                        break;
                    }
                if (!used && (adj[u] & freeRecv)) return false;  // not maximal
            }
            if (dfs(informed | claimed, round + 1)) {
                trace[round] = chosen;
                return true;
            }
            return false;
        }
        int u = senders[si];
        for (int oi : order) {
            int v = receivers[oi];
            if (((claimed >> v) & 1) || !((adj[u] >> v) & 1)) continue;
            chosen.emplace_back(u, v);
            bool ok = branch(informed, round, senders, si + 1, receivers, order,
                             claimed | (1ULL << v), chosen);
            chosen.pop_back();
            if (ok) return true;
            if (timedOut) return false;
        }
        return branch(informed, round, senders, si + 1, receivers, order, claimed, chosen);
    }
};

}  // namespace detail

// Exact optimum via iterative deepening when the search closes within the time
// budget; otherwise the greedy incumbent with optimal=false. lowerBoundHook
// may supply module-bounds pruning; the trivial log and eccentricity bounds
// are always applied.
inline BnbResult branch_bound_opt(const Graph& g, int s,
                                  const std::function<int(const Graph&, int)>& lowerBoundHook = {},
                                  int64_t budgetMs = 60000) {
    const int n = g.n();
    check(is_connected(g), "branch_bound: graph disconnected");
    VertexSet src(n, {s});

    BnbResult res;
    if (n == 1) {
        res.rounds = 0;
        res.protocol = BroadcastProtocol::start(n, src, 0);
        res.optimal = true;
        return res;
    }

    auto greedy = greedy_complete(g, BroadcastProtocol::start(n, src, 0), n - 1);
    check(greedy.has_value(), "branch_bound: greedy completion failed on connected graph");
    int ub = greedy->max_stamp();
    greedy->rounds = ub;

    int lb = std::max(ceil_log2(n), eccentricity(g, s));
    if (lowerBoundHook) lb = std::max(lb, lowerBoundHook(g, s));

    res.rounds = ub;
    res.protocol = *greedy;
    res.optimal = (lb >= ub);
    if (res.optimal || n > 62) return res;

    const auto adj = detail::adjacency_masks(g);
    detail::BnbContext ctx{g, adj, (n >= 62) ? (~0ULL >> 2) : ((1ULL << n) - 1), n};
    ctx.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(budgetMs);

    for (int t = lb; t < ub; ++t) {
        ctx.t = t;
        ctx.seen.clear();
        ctx.trace.clear();
        bool ok = ctx.dfs(1ULL << s, 0);
        if (ctx.timedOut) return res;
        if (ok) {
            BroadcastProtocol p = BroadcastProtocol::start(n, src, t);
            for (std::size_t r = 0; r < ctx.trace.size(); ++r)
                for (auto [u, v] : ctx.trace[r]) p.add(v, u, static_cast<int>(r) + 1);
            res.rounds = t;
            res.protocol = p;
            res.optimal = true;
            return res;
        }
    }
    res.optimal = true;  // every t below the greedy bound was refuted
    return res;
}

// ---------------------------------------------------------------------------
// Treewidth x time dynamic programming
//
// Decides b(G,s) <= t over a nice tree decomposition by searching for an
// oriented edge subset plus coloring c : V u E' -> [0,t] where non-s vertices
// have in-degree 1, the in-arc carries color c(v), out-arcs are colored above
// c(v), and colors around a vertex are distinct. Signatures keep
// (c(v), in-arc seen, used out-colors below) per bag vertex; only reachable
// signatures are stored.

namespace detail {

struct TwtEntry {
    int prevStage = -1;
    int prevStage2 = -1;
    std::string prevKey, prevKey2;
    int edgeU = -1, edgeV = -1, edgeColor = 0;  // arc committed at this step
};

using TwtTable = std::map<std::string, TwtEntry>;

struct TwtSig {
    // Parallel arrays over the bag's ascending vertex list.
    std::vector<int> color;
    std::vector<bool> inArc;
    std::vector<uint32_t> used;

    std::string key() const {
        std::string k;
        k.reserve(color.size() * 6);
        for (std::size_t i = 0; i < color.size(); ++i) {
            k.push_back(static_cast<char>(color[i]));
            k.push_back(inArc[i] ? 1 : 0);
            for (int b = 0; b < 4; ++b)
                k.push_back(static_cast<char>((used[i] >> (8 * b)) & 0xff));
        }
        return k;
    }
    static TwtSig parse(const std::string& k) {
        TwtSig s;
        std::size_t m = k.size() / 6;
        for (std::size_t i = 0; i < m; ++i) {
            s.color.push_back(static_cast<unsigned char>(k[i * 6]));
            s.inArc.push_back(k[i * 6 + 1] != 0);
            uint32_t u = 0;
            for (int b = 0; b < 4; ++b)
                u |= static_cast<uint32_t>(static_cast<unsigned char>(k[i * 6 + 2 + b]))
                     << (8 * b);
            s.used.push_back(u);
        }
        return s;
    }
};

}  // namespace detail

struct TwtResult {
    bool feasible = false;
    std::optional<BroadcastProtocol> protocol;
};

inline TwtResult twt_feasible(const Graph& g, int s, int t, const NiceTreeDecomposition& ntd,
                              bool extract = false) {
    check(t >= 1, "twt: t must be positive");
    check(t <= 25, "twt: t too large for the signature encoding");
    validate_nice_tree_decomposition(g, ntd);

    using detail::TwtEntry;
    using detail::TwtSig;
    using detail::TwtTable;

    std::vector<TwtTable> stages;
    auto add_stage = [&](TwtTable&& tbl) {
        stages.push_back(std::move(tbl));
        return static_cast<int>(stages.size()) - 1;
    };
    std::vector<int> nodeStage(ntd.nodes.size(), -1);

    for (int x : ntd.postorder()) {
        const auto& nd = ntd.nodes[x];
        const auto bag = nd.bag.to_vector();
        TwtTable table;

        switch (nd.kind) {
            case NodeKind::Leaf: {
                table.emplace(TwtSig{}.key(), TwtEntry{});
                nodeStage[x] = add_stage(std::move(table));
                break;
            }
            case NodeKind::Introduce: {
                const int v = nd.vertex;
                const int childStage = nodeStage[nd.left];
                int pos =
                    static_cast<int>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
                for (const auto& [ckey, centry] : stages[childStage]) {
                    TwtSig sig = TwtSig::parse(ckey);
                    auto place = [&](int color) {
                        TwtSig ns = sig;
                        ns.color.insert(ns.color.begin() + pos, color);
                        ns.inArc.insert(ns.inArc.begin() + pos, false);
                        ns.used.insert(ns.used.begin() + pos, 0);
                        TwtEntry e;
                        e.prevStage = childStage;
                        e.prevKey = ckey;
                        table.emplace(ns.key(), std::move(e));
                    };
                    if (v == s) place(0);
                    else
                        for (int c = 1; c <= t; ++c) place(c);
                }
                if (!extract) stages[childStage].clear();
                int cur = add_stage(std::move(table));

                // One stage per bag edge at v: skip it, or orient and color it.
                for (int u : bag) {
                    if (u == v || !g.has_edge(u, v)) continue;
                    int pu =
                        static_cast<int>(std::lower_bound(bag.begin(), bag.end(), u) - bag.begin());
                    TwtTable next;
                    for (const auto& [ckey, centry] : stages[cur]) {
                        TwtSig sig = TwtSig::parse(ckey);
                        TwtEntry keep;
                        keep.prevStage = cur;
                        keep.prevKey = ckey;
                        next.emplace(ckey, std::move(keep));
                        auto orient = [&](int from, int to, int pf, int pt) {
                            if (to == s) return;
                            if (sig.color[pf] >= sig.color[pt]) return;
                            if (sig.inArc[pt]) return;
                            if ((sig.used[pf] >> sig.color[pt]) & 1) return;
                            TwtSig ns = sig;
                            ns.inArc[pt] = true;
                            ns.used[pf] |= 1u << ns.color[pt];
                            TwtEntry e;
                            e.prevStage = cur;
                            e.prevKey = ckey;
                            e.edgeU = from;
                            e.edgeV = to;
                            e.edgeColor = ns.color[pt];
                            next.emplace(ns.key(), std::move(e));
                        };
                        orient(u, v, pu, pos);
                        orient(v, u, pos, pu);
                    }
                    if (!extract) stages[cur].clear();
                    cur = add_stage(std::move(next));
                }
                nodeStage[x] = cur;
                break;
            }
            case NodeKind::Forget: {
                const int v = nd.vertex;
                const int childStage = nodeStage[nd.left];
                const auto childBag = ntd.nodes[nd.left].bag.to_vector();
                int pos = static_cast<int>(
                    std::lower_bound(childBag.begin(), childBag.end(), v) - childBag.begin());
                for (const auto& [ckey, centry] : stages[childStage]) {
                    TwtSig sig = TwtSig::parse(ckey);
                    if (!sig.inArc[pos] && v != s) continue;  // v would stay uninformed
                    TwtSig ns = sig;
                    ns.color.erase(ns.color.begin() + pos);
                    ns.inArc.erase(ns.inArc.begin() + pos);
                    ns.used.erase(ns.used.begin() + pos);
                    TwtEntry e;
                    e.prevStage = childStage;
                    e.prevKey = ckey;
                    table.emplace(ns.key(), std::move(e));
                }
                if (!extract) stages[childStage].clear();
                nodeStage[x] = add_stage(std::move(table));
                break;
            }
            case NodeKind::Join: {
                const int ls = nodeStage[nd.left], rs = nodeStage[nd.right];
                for (const auto& [lkey, lentry] : stages[ls]) {
                    TwtSig a = TwtSig::parse(lkey);
                    for (const auto& [rkey, rentry] : stages[rs]) {
                        TwtSig b = TwtSig::parse(rkey);
                        bool ok = true;
                        TwtSig ns = a;
                        for (std::size_t i = 0; i < a.color.size() && ok; ++i) {
                            if (a.color[i] != b.color[i] || (a.inArc[i] && b.inArc[i]) ||
                                (a.used[i] & b.used[i])) {
                                ok = false;
                            } else {
                                ns.inArc[i] = a.inArc[i] || b.inArc[i];
                                ns.used[i] = a.used[i] | b.used[i];
                            }
                        }
                        if (!ok) continue;
                        TwtEntry e;
                        e.prevStage = ls;
                        e.prevKey = lkey;
                        e.prevStage2 = rs;
                        e.prevKey2 = rkey;
                        table.emplace(ns.key(), std::move(e));
                    }
                }
                if (!extract) {
                    stages[ls].clear();
                    stages[rs].clear();
                }
                nodeStage[x] = add_stage(std::move(table));
                break;
            }
        }
    }

    const TwtTable& rootTable = stages[nodeStage[ntd.root]];
    TwtResult res;
    res.feasible = !rootTable.empty();
    if (!res.feasible || !extract) return res;

    BroadcastProtocol p = BroadcastProtocol::start(g.n(), VertexSet(g.n(), {s}), t);
    std::vector<std::pair<int, std::string>> work{
        {nodeStage[ntd.root], rootTable.begin()->first}};
    while (!work.empty()) {
        auto [stage, key] = work.back();
        work.pop_back();
        const TwtEntry& e = stages[stage].at(key);
        if (e.edgeU != -1) p.add(e.edgeV, e.edgeU, e.edgeColor);
        if (e.prevStage != -1) work.emplace_back(e.prevStage, e.prevKey);
        if (e.prevStage2 != -1) work.emplace_back(e.prevStage2, e.prevKey2);
    }
    res.protocol = p;
    return res;
}

// Smallest t with twt_feasible true; handy for the oracle concordance checks.
inline int twt_opt(const Graph& g, int s, const NiceTreeDecomposition& ntd, int upper) {
    if (g.n() == 1) return 0;
    for (int t = 1; t <= upper; ++t)
        if (twt_feasible(g, s, t, ntd).feasible) return t;
    fail("twt_opt: no feasible t up to upper bound");
}

}  // namespace tb
