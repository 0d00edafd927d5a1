#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tb/check.hpp"
#include "tb/exact.hpp"
#include "tb/flow.hpp"
#include "tb/graph.hpp"
#include "tb/protocol.hpp"

namespace tb {

// ---------------------------------------------------------------------------
// Modulator = vertex cover of the complement; bounded branching.

inline bool is_clique_modulator(const Graph& g, const VertexSet& X) {
    auto rest = VertexSet::all(g.n()) - X;
    auto ids = rest.to_vector();
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j)
            if (!g.has_edge(ids[i], ids[j])) return false;
    return true;
}

inline std::optional<VertexSet> find_clique_modulator(const Graph& g, int k) {
    const int n = g.n();
    std::vector<std::pair<int, int>> nonEdges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!g.has_edge(u, v)) nonEdges.emplace_back(u, v);

    std::function<std::optional<VertexSet>(VertexSet, int)> branch =
        [&](VertexSet X, int budget) -> std::optional<VertexSet> {
        std::optional<std::pair<int, int>> open;
        for (auto [u, v] : nonEdges)
            if (!X.test(u) && !X.test(v)) {
                open = {u, v};
                break;
            }
        if (!open) return X;
        if (budget == 0) return std::nullopt;
        auto [u, v] = *open;
        VertexSet Xu = X;
        Xu.set(u);
        if (auto r = branch(Xu, budget - 1)) return r;
        VertexSet Xv = X;
        Xv.set(v);
        return branch(Xv, budget - 1);
    };

    for (int size = 0; size <= k; ++size)
        if (auto r = branch(VertexSet(n), size))
            if (r->count() <= size) return r;
    return std::nullopt;
}

inline int dtc_upper_bound(const Graph& g, const VertexSet& X) {
    check(is_clique_modulator(g, X), "dtc_upper_bound: not a modulator");
    int cliqueSize = g.n() - X.count();
    return X.count() + ceil_log2(std::max(cliqueSize, 1));
}

// ---------------------------------------------------------------------------
// Signatures: per modulator vertex (ascending id order) the informed round,
// the informer code, the informer's informer, and the send count.

struct DtcSignature {
    int t = 0;
    std::vector<int> tau;           // informed round; 0 at s when s is in X
    std::vector<int> informerCode;  // [0, 2^k + 2k]; -1 at s
    std::vector<int> informerOfInformer;  // X-order index, -1 = phi
    std::vector<int> sends;               // c_v
};

namespace detail {

struct DtcDecoded {
    // Per X entry: the concrete informer vertex (graph id), or -1 at s.
    std::vector<int> informer;
    // Informer's informer as X-order index, -1 = phi; only meaningful for
    // informers outside X.
    std::vector<int> b;
};

struct DtcContext {
    const Graph& g;
    int s;
    std::vector<int> X;       // ascending
    std::vector<int> xIndex;  // vertex -> X position or -1
    std::vector<uint64_t> classOf;  // clique vertex -> neighborhood mask over X
    std::map<uint64_t, std::vector<int>> classMembers;  // ascending ids, s excluded
    int k = 0;

    DtcContext(const Graph& graph, int src, const VertexSet& modulator)
        : g(graph), s(src), xIndex(graph.n(), -1), classOf(graph.n(), 0) {
        X = modulator.to_vector();
        k = static_cast<int>(X.size());
        check(k <= 16, "dtc: modulator too large");
        for (int i = 0; i < k; ++i) xIndex[X[i]] = i;
        for (int v = 0; v < g.n(); ++v) {
            if (xIndex[v] != -1) continue;
            uint64_t mask = 0;
            for (int i = 0; i < k; ++i)
                if (g.has_edge(v, X[i])) mask |= 1ULL << i;
            classOf[v] = mask;
            if (v != s) classMembers[mask].push_back(v);
        }
    }

    int code_s() const { return (1 << k) + 2 * k; }
    bool is_class_code(int c) const { return 0 <= c && c < (1 << k); }
    bool is_x_code(int c) const { return (1 << k) <= c && c < (1 << k) + k; }
    bool is_share_code(int c) const { return (1 << k) + k <= c && c < (1 << k) + 2 * k; }
};

}  // namespace detail

struct DtcReconstruction {
    std::optional<BroadcastProtocol> protocol;
    std::string failure;  // stage-tagged reason when infeasible
};

namespace detail {

// Decode informer codes into concrete vertices; allocation of fresh class
// vertices is min-id first. Returns failure text on infeasible codes.
inline std::optional<std::string> dtc_decode(const DtcContext& ctx, const DtcSignature& sig,
                                             DtcDecoded& out) {
    const int k = ctx.k;
    out.informer.assign(k, -1);
    out.b.assign(k, -1);
    std::map<uint64_t, int> allocated;  // class mask -> how many taken

    for (int i = 0; i < k; ++i) {
        const int v = ctx.X[i];
        if (v == ctx.s) {
            check(sig.informerCode[i] == -1 && sig.tau[i] == 0,
                  "dtc signature: source entry malformed");
            continue;
        }
        check(1 <= sig.tau[i] && sig.tau[i] <= sig.t, "dtc signature: tau out of range");
        check(0 <= sig.sends[i] && sig.sends[i] <= sig.t - sig.tau[i],
              "dtc signature: send count out of range");
        const int code = sig.informerCode[i];
        check(0 <= code && code <= ctx.code_s(), "dtc signature: informer code out of range");

        if (code == ctx.code_s()) {
            check(ctx.xIndex[ctx.s] == -1, "dtc signature: s-code with s inside X");
            if (!ctx.g.has_edge(ctx.s, v)) return "stage1: s not adjacent to its assignee";
            out.informer[i] = ctx.s;
        } else if (ctx.is_x_code(code)) {
            int j = code - (1 << k);
            if (j == i) return "stage1: vertex informs itself";
            if (!ctx.g.has_edge(ctx.X[j], v)) return "stage1: X informer not adjacent";
            if (sig.tau[j] >= sig.tau[i]) return "stage1: X informer informed too late";
            out.informer[i] = ctx.X[j];
        } else if (ctx.is_share_code(code)) {
            int j = code - (1 << k) - k;
            if (j == i || out.informer[j] == -1) return "stage1: share code unresolved";
            int a = out.informer[j];
            if (ctx.xIndex[a] != -1 || a == ctx.s)
                return "stage1: share code points at a non-clique informer";
            if (!ctx.g.has_edge(a, v)) return "stage1: shared informer not adjacent";
            out.informer[i] = a;
            out.b[i] = out.b[j];
        } else {
            uint64_t mask = static_cast<uint64_t>(code);
            if (!((mask >> i) & 1)) return "stage1: class not adjacent to its assignee";
            auto it = ctx.classMembers.find(mask);
            int have = (it == ctx.classMembers.end()) ? 0 : static_cast<int>(it->second.size());
            int used = allocated[mask];
            if (used >= have) return "stage1: neighborhood class exhausted";
            out.informer[i] = it->second[used];
            allocated[mask] = used + 1;
            int b = sig.informerOfInformer[i];
            if (b != -1) {
                check(0 <= b && b < k, "dtc signature: informer-of-informer out of range");
                if (!((mask >> b) & 1)) return "stage1: b not adjacent to the informer";
                if (sig.tau[b] > sig.tau[i] - 2) return "stage2: b has no slot before tau";
                out.b[i] = b;
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Rebuilds a protocol matching the signature: stage 1 stamps the modulator
// arrivals, stage 2 informs the informers, stage 3 assigns clique vertices to
// modulator senders through the 4-layer flow network, stage 4 greedily places
// the leftovers among clique vertices.
inline DtcReconstruction dtc_reconstruct(const Graph& g, int s, const VertexSet& X,
                                         const DtcSignature& sig) {
    detail::DtcContext ctx(g, s, X);
    const int k = ctx.k;
    const int n = g.n();
    const int t = sig.t;
    check(static_cast<int>(sig.tau.size()) == k && static_cast<int>(sig.sends.size()) == k &&
              static_cast<int>(sig.informerCode.size()) == k &&
              static_cast<int>(sig.informerOfInformer.size()) == k,
          "dtc signature: size mismatch");

    DtcReconstruction out;
    detail::DtcDecoded dec;
    if (auto err = detail::dtc_decode(ctx, sig, dec)) {
        out.failure = *err;
        return out;
    }

    BroadcastProtocol proto = BroadcastProtocol::start(n, VertexSet(n, {s}), t);
    std::vector<std::vector<int>> busy(n);
    auto is_busy = [&](int v, int round) {
        return std::find(busy[v].begin(), busy[v].end(), round) != busy[v].end();
    };

    // Stage 1: informer -> modulator vertex at tau.
    for (int i = 0; i < k; ++i) {
        if (ctx.X[i] == s) continue;
        int a = dec.informer[i];
        if (is_busy(a, sig.tau[i])) {
            out.failure = "stage1: informer double-booked in a round";
            return out;
        }
        busy[a].push_back(sig.tau[i]);
        proto.add(ctx.X[i], a, sig.tau[i]);
    }

    // Stage 2: connect clique informers, by ascending first-send round.
    std::map<int, std::pair<int, int>> informerNeed;  // vertex -> (first send, b)
    for (int i = 0; i < k; ++i) {
        int a = dec.informer[i];
        if (a == -1 || a == s || ctx.xIndex[a] != -1) continue;
        auto it = informerNeed.find(a);
        if (it == informerNeed.end()) informerNeed[a] = {sig.tau[i], dec.b[i]};
        else {
            it->second.first = std::min(it->second.first, sig.tau[i]);
            if (it->second.second == -1) it->second.second = dec.b[i];
        }
    }
    std::vector<std::pair<int, int>> needOrder;  // (first send, vertex)
    for (auto& [a, need] : informerNeed) needOrder.emplace_back(need.first, a);
    std::sort(needOrder.begin(), needOrder.end());
    for (auto [firstSend, a] : needOrder) {
        int b = informerNeed[a].second;
        int foundRound = -1, foundBy = -1;
        for (int i = 1; i < firstSend && foundRound == -1; ++i) {
            if (b != -1) {
                int u = ctx.X[b];
                if (proto.informed(u) && proto.tau[u] < i && !is_busy(u, i)) {
                    foundRound = i;
                    foundBy = u;
                }
            } else {
                for (int u = 0; u < n && foundBy == -1; ++u) {
                    if (ctx.xIndex[u] != -1 || u == a) continue;  // clique senders only
                    if (proto.informed(u) && proto.tau[u] < i && !is_busy(u, i)) {
                        foundRound = i;
                        foundBy = u;
                    }
                }
            }
        }
        if (foundRound == -1) {
            out.failure = "stage2: no idle informer slot";
            return out;
        }
        busy[foundBy].push_back(foundRound);
        proto.add(a, foundBy, foundRound);
    }

    // Stage 3: residual capacities and the 4-layer flow.
    std::vector<int> residual(k, 0);
    for (int i = 0; i < k; ++i) {
        int committed = static_cast<int>(busy[ctx.X[i]].size());
        residual[i] = sig.sends[i] - committed;
        if (residual[i] < 0) {
            out.failure = "stage3: send budget overrun for a modulator vertex";
            return out;
        }
    }
    std::map<uint64_t, std::vector<int>> remaining;  // class -> uninformed ids
    for (int v = 0; v < n; ++v)
        if (ctx.xIndex[v] == -1 && v != s && !proto.informed(v))
            remaining[ctx.classOf[v]].push_back(v);

    std::vector<uint64_t> classList;
    for (auto& [mask, ids] : remaining) classList.push_back(mask);
    const int C = static_cast<int>(classList.size());
    // Nodes: 0 = source, 1..k = h_v, k+1..k+C = r_q, k+C+1 = sink.
    FlowNetwork net(k + C + 2);
    std::vector<int> hArc(k, -1);
    std::vector<std::vector<int>> vqArc(k, std::vector<int>(C, -1));
    int64_t want = 0;
    for (int i = 0; i < k; ++i) {
        hArc[i] = net.add_arc(0, 1 + i, residual[i]);
        want += residual[i];
    }
    for (int q = 0; q < C; ++q) {
        for (int i = 0; i < k; ++i)
            if ((classList[q] >> i) & 1) vqArc[i][q] = net.add_arc(1 + i, 1 + k + q, n);
        net.add_arc(1 + k + q, 1 + k + C,
                    static_cast<int64_t>(remaining[classList[q]].size()));
    }
    int64_t flow = net.max_flow(0, 1 + k + C);
    if (flow != want) {
        out.failure = "stage3: flow does not saturate the modulator sends";
        return out;
    }
    for (int i = 0; i < k; ++i) {
        // Receiver list for X[i]: flow per class, min-id first.
        std::vector<int> receivers;
        for (int q = 0; q < C; ++q) {
            if (vqArc[i][q] == -1) continue;
            int64_t f = net.flow_on(vqArc[i][q]);
            auto& pool = remaining[classList[q]];
            for (int64_t c = 0; c < f; ++c) {
                receivers.push_back(pool.front());
                pool.erase(pool.begin());
            }
        }
        std::sort(receivers.begin(), receivers.end());
        int round = sig.tau[i];
        for (int r : receivers) {
            do round++;
            while (round <= t && is_busy(ctx.X[i], round));
            if (round > t) {
                out.failure = "stage3: sends do not fit by round t";
                return out;
            }
            busy[ctx.X[i]].push_back(round);
            proto.add(r, ctx.X[i], round);
        }
    }

    // Stage 4: leftovers are informed by clique vertices only.
    VertexSet cliqueSenders = VertexSet::all(n) - X;
    auto completed = greedy_complete(g, proto, t, cliqueSenders);
    if (!completed) {
        out.failure = "stage4: leftover vertices unplaceable";
        return out;
    }
    out.protocol = *completed;
    return out;
}

// Signature of an existing protocol relative to modulator X (the mechanism
// fidelity round-trip): informers are coded by X membership, sharing, or
// neighborhood class, in ascending X order.
inline DtcSignature extract_signature(const Graph& g, int s, const VertexSet& X,
                                      const BroadcastProtocol& p) {
    detail::DtcContext ctx(g, s, X);
    const int k = ctx.k;
    DtcSignature sig;
    sig.t = p.rounds;
    sig.tau.assign(k, 0);
    sig.informerCode.assign(k, -1);
    sig.informerOfInformer.assign(k, -1);
    sig.sends.assign(k, 0);

    std::vector<int> childCount(g.n(), 0);
    for (std::size_t v = 0; v < p.parent.size(); ++v)
        if (p.parent[v] != -1) childCount[p.parent[v]]++;

    for (int i = 0; i < k; ++i) {
        const int v = ctx.X[i];
        sig.sends[i] = childCount[v];
        if (v == s) continue;
        sig.tau[i] = p.tau[v];
        int a = p.parent[v];
        if (a == s && ctx.xIndex[s] == -1) {
            sig.informerCode[i] = ctx.code_s();
        } else if (ctx.xIndex[a] != -1) {
            sig.informerCode[i] = (1 << k) + ctx.xIndex[a];
        } else {
            int share = -1;
            for (int j = 0; j < i; ++j)
                if (ctx.X[j] != s && p.parent[ctx.X[j]] == a) {
                    share = j;
                    break;
                }
            if (share != -1) {
                sig.informerCode[i] = (1 << k) + k + share;
            } else {
                sig.informerCode[i] = static_cast<int>(ctx.classOf[a]);
                int pa = p.parent[a];
                if (pa != -1 && ctx.xIndex[pa] != -1)
                    sig.informerOfInformer[i] = ctx.xIndex[pa];
            }
        }
    }
    return sig;
}

// ---------------------------------------------------------------------------
// The solver: try t ascending, enumerate signatures, reconstruct.

namespace detail {

struct DtcEnumerator {
    const DtcContext& ctx;
    const Graph& g;
    int t;
    DtcSignature sig;
    std::vector<std::pair<int, int>> informerRound;  // (informer id proxy, round) seen
    std::function<bool(const DtcSignature&)> tryOne;

    bool run() {
        sig.t = t;
        const int k = ctx.k;
        sig.tau.assign(k, 0);
        sig.informerCode.assign(k, -1);
        sig.informerOfInformer.assign(k, -1);
        sig.sends.assign(k, 0);
        return enumTau(0);
    }

    bool enumTau(int i) {
        const int k = ctx.k;
        if (i == k) return enumFields(0);
        if (ctx.X[i] == ctx.s) {
            sig.tau[i] = 0;
            return enumTau(i + 1);
        }
        for (int tau = 1; tau <= t; ++tau) {
            sig.tau[i] = tau;
            if (enumTau(i + 1)) return true;
        }
        sig.tau[i] = 0;
        return false;
    }

    // informer identity proxy for the collision prune: s = -1, X member =
    // -2 - index, fresh class allocation = (mask << 5) + allocation index.
    bool enumFields(int i) {
        const int k = ctx.k;
        if (i == k) {
            for (int cs = 0; cs <= (ctx.xIndex[ctx.s] != -1 ? t : 0); ++cs) {
                if (ctx.xIndex[ctx.s] != -1) sig.sends[ctx.xIndex[ctx.s]] = cs;
                if (tryOne(sig)) return true;
                if (ctx.xIndex[ctx.s] == -1) break;
            }
            return false;
        }
        if (ctx.X[i] == ctx.s) return enumFields(i + 1);

        auto collides = [&](int64_t proxy) {
            for (auto [p, r] : informerRound)
                if (p == proxy && r == sig.tau[i]) return true;
            return false;
        };
        auto attempt = [&](int code, int b, int64_t proxy) {
            if (collides(proxy)) return false;
            sig.informerCode[i] = code;
            sig.informerOfInformer[i] = b;
            informerRound.emplace_back(proxy, sig.tau[i]);
            bool done = false;
            for (int c = 0; c <= t - sig.tau[i] && !done; ++c) {
                sig.sends[i] = c;
                done = enumFields(i + 1);
            }
            informerRound.pop_back();
            if (!done) {
                sig.informerCode[i] = -1;
                sig.informerOfInformer[i] = -1;
                sig.sends[i] = 0;
            }
            return done;
        };

        const int v = ctx.X[i];
        // Fresh class codes, ascending mask.
        for (const auto& [mask, members] : ctx.classMembers) {
            if (!((mask >> i) & 1)) continue;
            int already = 0;
            for (int j = 0; j < i; ++j)
                if (ctx.X[j] != ctx.s && ctx.is_class_code(sig.informerCode[j]) &&
                    sig.informerCode[j] == static_cast<int>(mask))
                    already++;
            if (already >= static_cast<int>(members.size())) continue;
            int64_t proxy = (static_cast<int64_t>(mask) << 5) + already;
            // phi informer-of-informer.
            if (attempt(static_cast<int>(mask), -1, proxy)) return true;
            for (int b = 0; b < k; ++b) {
                if (!((mask >> b) & 1) || ctx.X[b] == ctx.s) continue;
                if (sig.tau[b] > sig.tau[i] - 2) continue;
                if (attempt(static_cast<int>(mask), b, proxy)) return true;
            }
        }
        // X informers.
        for (int j = 0; j < k; ++j) {
            if (j == i || !g.has_edge(ctx.X[j], v)) continue;
            if (sig.tau[j] >= sig.tau[i]) continue;
            if (attempt((1 << k) + j, -1, -2 - j)) return true;
        }
        // Share codes pointing at earlier fresh-class entries.
        for (int j = 0; j < i; ++j) {
            if (ctx.X[j] == ctx.s || !ctx.is_class_code(sig.informerCode[j])) continue;
            uint64_t mask = static_cast<uint64_t>(sig.informerCode[j]);
            if (!((mask >> i) & 1)) continue;
            int alloc = 0;
            for (int l = 0; l < j; ++l)
                if (ctx.X[l] != ctx.s && sig.informerCode[l] == sig.informerCode[j]) alloc++;
            int64_t proxy = (static_cast<int64_t>(mask) << 5) + alloc;
            if (attempt((1 << k) + k + j, -1, proxy)) return true;
        }
        // The source itself.
        if (ctx.xIndex[ctx.s] == -1 && g.has_edge(ctx.s, v)) {
            if (attempt(ctx.code_s(), -1, -1)) return true;
        }
        return false;
    }
};

}  // namespace detail

// Exact b(G,s) given a clique modulator X, by enumerating signatures for
// increasing t and reconstructing. The upper-bound lemma caps the search.
inline SolveResult dtc_solve(const Graph& g, int s, const VertexSet& X) {
    check(is_connected(g), "dtc_solve: graph disconnected");
    check(is_clique_modulator(g, X), "dtc_solve: not a modulator");
    const int n = g.n();
    if (n == 1) return {0, BroadcastProtocol::start(1, VertexSet(1, {0}), 0)};

    detail::DtcContext ctx(g, s, X);
    int lb = std::max(ceil_log2(n), eccentricity(g, s));
    int ub = dtc_upper_bound(g, X);

    for (int t = std::max(lb, 1); t <= std::max(ub, lb); ++t) {
        SolveResult found;
        bool ok = false;
        detail::DtcEnumerator en{ctx, g, t, {}, {}, [&](const DtcSignature& sig) {
                                     auto rec = dtc_reconstruct(g, s, X, sig);
                                     if (!rec.protocol) return false;
                                     found.rounds = t;
                                     found.protocol = *rec.protocol;
                                     ok = true;
                                     return true;
                                 }};
        if (en.run() && ok) {
            int used = validate(g, VertexSet(n, {s}), found.protocol);
            check(used == t, "dtc_solve: reconstruction used unexpected rounds");
            return found;
        }
    }
    fail("dtc_solve: no signature reconstructed within the upper bound");
}

}  // namespace tb
