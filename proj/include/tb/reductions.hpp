#pragma once

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tb/check.hpp"
#include "tb/decomposition.hpp"
#include "tb/graph.hpp"
#include "tb/protocol.hpp"
#include "tb/rng.hpp"

namespace tb {

// ---------------------------------------------------------------------------
// RNMTS instances: disjoint sets A (even), B, C (odd), sum(A)+sum(B)=sum(C);
// ask for triples c = a + b.

struct RnmtsInstance {
    std::vector<int64_t> A, B, C;

    int size() const { return static_cast<int>(A.size()); }
    int64_t target() const {
        int64_t t = 0;
        for (int64_t c : C) t = std::max(t, c);
        return t;
    }
};

inline void validate_rnmts(const RnmtsInstance& inst, int64_t valueCap = 100000) {
    const int n = inst.size();
    check(n >= 1, "rnmts: empty instance");
    check(static_cast<int>(inst.B.size()) == n && static_cast<int>(inst.C.size()) == n,
          "rnmts: set sizes differ");
    std::set<int64_t> seen;
    int64_t sumA = 0, sumB = 0, sumC = 0;
    for (int64_t a : inst.A) {
        check(a > 0 && a % 2 == 0, "rnmts: A values must be positive and even");
        check(a <= valueCap, "rnmts: value exceeds the unary-size cap");
        check(seen.insert(a).second, "rnmts: values not pairwise distinct");
        sumA += a;
    }
    for (int64_t b : inst.B) {
        check(b > 0 && b % 2 == 1, "rnmts: B values must be positive and odd");
        check(b <= valueCap, "rnmts: value exceeds the unary-size cap");
        check(seen.insert(b).second, "rnmts: values not pairwise distinct");
        sumB += b;
    }
    for (int64_t c : inst.C) {
        check(c > 0 && c % 2 == 1, "rnmts: C values must be positive and odd");
        check(c <= valueCap, "rnmts: value exceeds the unary-size cap");
        check(seen.insert(c).second, "rnmts: values not pairwise distinct");
        sumC += c;
    }
    check(sumA + sumB == sumC, "rnmts: sum condition violated");
}

using RnmtsPartition = std::vector<std::array<int64_t, 3>>;  // (c, a, b) triples

// Exhaustive matching oracle (n <= 8): assign to each c a pair (a, b).
inline std::optional<RnmtsPartition> solve_rnmts(const RnmtsInstance& inst) {
    validate_rnmts(inst);
    const int n = inst.size();
    check(n <= 8, "solve_rnmts: oracle limited to n <= 8");
    std::vector<bool> usedA(n, false), usedB(n, false);
    RnmtsPartition triples;

    std::function<bool(int)> rec = [&](int ci) -> bool {
        if (ci == n) return true;
        for (int ai = 0; ai < n; ++ai) {
            if (usedA[ai]) continue;
            for (int bi = 0; bi < n; ++bi) {
                if (usedB[bi] || inst.A[ai] + inst.B[bi] != inst.C[ci]) continue;
                usedA[ai] = usedB[bi] = true;
                triples.push_back({inst.C[ci], inst.A[ai], inst.B[bi]});
                if (rec(ci + 1)) return true;
                triples.pop_back();
                usedA[ai] = usedB[bi] = false;
            }
        }
        return false;
    };
    if (rec(0)) return triples;
    return std::nullopt;
}

// Distinct-values NMTS -> RNMTS: double everything, add 1 to B and C.
inline RnmtsInstance restrict_nmts(const std::vector<int64_t>& A, const std::vector<int64_t>& B,
                                   const std::vector<int64_t>& C) {
    const int n = static_cast<int>(A.size());
    check(static_cast<int>(B.size()) == n && static_cast<int>(C.size()) == n,
          "restrict_nmts: set sizes differ");
    std::set<int64_t> seen;
    int64_t sumA = 0, sumB = 0, sumC = 0;
    for (int64_t a : A) {
        check(a > 0 && seen.insert(a).second, "restrict_nmts: values must be positive, distinct");
        sumA += a;
    }
    for (int64_t b : B) {
        check(b > 0 && seen.insert(b).second, "restrict_nmts: values must be positive, distinct");
        sumB += b;
    }
    for (int64_t c : C) {
        check(c > 0 && seen.insert(c).second, "restrict_nmts: values must be positive, distinct");
        sumC += c;
    }
    check(sumA + sumB == sumC, "restrict_nmts: sum condition violated");
    RnmtsInstance out;
    for (int64_t a : A) out.A.push_back(2 * a);
    for (int64_t b : B) out.B.push_back(2 * b + 1);
    for (int64_t c : C) out.C.push_back(2 * c + 1);
    validate_rnmts(out);
    return out;
}

// File format: "n", then the three lines A, B, C.
inline RnmtsInstance parse_rnmts(std::istream& in) {
    int n = -1;
    check(static_cast<bool>(in >> n) && n >= 1, "rnmts file: bad size line");
    RnmtsInstance inst;
    auto read = [&](std::vector<int64_t>& out) {
        for (int i = 0; i < n; ++i) {
            int64_t x;
            check(static_cast<bool>(in >> x), "rnmts file: missing value");
            out.push_back(x);
        }
    };
    read(inst.A);
    read(inst.B);
    read(inst.C);
    validate_rnmts(inst);
    return inst;
}

inline std::string serialize_rnmts(const RnmtsInstance& inst) {
    std::ostringstream out;
    out << inst.size() << "\n";
    auto line = [&](const std::vector<int64_t>& xs) {
        for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i];
        out << "\n";
    };
    line(inst.A);
    line(inst.B);
    line(inst.C);
    return out.str();
}

// ---------------------------------------------------------------------------
// Cactus reduction: s plus a path of c_i + 2 vertices per target (both ends
// on s) plus filler paths Q_h for the rounds not claimed by A u B.

struct CactusReduction {
    Graph g;
    int s = 0;
    int t = 0;
    // Path layout: per target index, the vertex ids of P_i in order u_i..v_i;
    // per filler h (ascending), the ids from the s-neighbor outward.
    std::vector<std::vector<int>> targetPaths;
    std::map<int, std::vector<int>> fillerPaths;
};

inline CactusReduction reduce_cactus(const RnmtsInstance& inst) {
    validate_rnmts(inst);
    const int n = inst.size();
    const int64_t t = inst.target();
    check(t <= 500, "reduce_cactus: target too large for desk scale");

    std::set<int64_t> claimed;  // rounds {t - x : x in A u B} intersected with [1, t]
    for (int64_t x : inst.A)
        if (t - x >= 1) claimed.insert(t - x);
    for (int64_t x : inst.B)
        if (t - x >= 1) claimed.insert(t - x);

    int64_t total = 1;
    for (int64_t c : inst.C) total += c + 2;
    for (int64_t h = 1; h <= t; ++h)
        if (!claimed.count(h)) total += t - h + 1;

    CactusReduction out;
    out.t = static_cast<int>(t);
    Graph g(static_cast<int>(total));
    int next = 1;
    for (int i = 0; i < n; ++i) {
        std::vector<int> path;
        for (int64_t j = 0; j < inst.C[i] + 2; ++j) path.push_back(next++);
        for (std::size_t j = 0; j + 1 < path.size(); ++j) g.add_edge(path[j], path[j + 1]);
        g.add_edge(0, path.front());
        g.add_edge(0, path.back());
        out.targetPaths.push_back(std::move(path));
    }
    for (int64_t h = 1; h <= t; ++h) {
        if (claimed.count(h)) continue;
        std::vector<int> path;
        for (int64_t j = 0; j < t - h + 1; ++j) path.push_back(next++);
        for (std::size_t j = 0; j + 1 < path.size(); ++j) g.add_edge(path[j], path[j + 1]);
        g.add_edge(0, path.front());
        out.fillerPaths[static_cast<int>(h)] = std::move(path);
    }
    g.normalize();
    out.g = std::move(g);

    // Structure assertions: G - s is a path forest and every non-s degree <= 2.
    for (int v = 1; v < out.g.n(); ++v)
        check(out.g.degree(v) <= 2, "reduce_cactus: non-source degree exceeds 2");
    int64_t maxAB = 0;
    for (int64_t x : inst.A) maxAB = std::max(maxAB, x);
    for (int64_t x : inst.B) maxAB = std::max(maxAB, x);
    if (maxAB < t)
        check(out.g.n() == 1 + static_cast<int>(t * (t + 1) / 2),
              "reduce_cactus: size identity violated");
    return out;
}

// Yes-certificate protocol: s serves fillers at their round and path endpoints
// at t - a / t - b; paths propagate inward. Exactly t rounds.
inline BroadcastProtocol cactus_yes_protocol(const RnmtsInstance& inst,
                                             const RnmtsPartition& partition) {
    auto red = reduce_cactus(inst);
    const int t = red.t;
    check(partition.size() == static_cast<std::size_t>(inst.size()),
          "cactus_yes_protocol: partition size mismatch");

    // Partition triple for each target value c_i, in instance order.
    std::map<int64_t, std::pair<int64_t, int64_t>> byTarget;
    for (const auto& tri : partition) {
        check(tri[0] == tri[1] + tri[2], "cactus_yes_protocol: triple does not sum");
        byTarget[tri[0]] = {tri[1], tri[2]};
    }

    BroadcastProtocol p = BroadcastProtocol::start(red.g.n(), VertexSet(red.g.n(), {0}), t);
    for (int i = 0; i < inst.size(); ++i) {
        auto it = byTarget.find(inst.C[i]);
        check(it != byTarget.end(), "cactus_yes_protocol: target missing from partition");
        auto [a, b] = it->second;
        const auto& path = red.targetPaths[i];
        const int L = static_cast<int>(path.size());  // c_i + 2
        // u-side: p_0..p_a informed at rounds t-a .. t.
        p.add(path[0], 0, static_cast<int>(t - a));
        for (int64_t j = 1; j <= a; ++j)
            p.add(path[j], path[j - 1], static_cast<int>(t - a + j));
        // v-side: p_{L-1}..p_{L-1-b} informed at rounds t-b .. t.
        p.add(path[L - 1], 0, static_cast<int>(t - b));
        for (int64_t j = 1; j <= b; ++j)
            p.add(path[L - 1 - j], path[L - j], static_cast<int>(t - b + j));
    }
    for (const auto& [h, path] : red.fillerPaths) {
        p.add(path[0], 0, h);
        for (std::size_t j = 1; j < path.size(); ++j)
            p.add(path[j], path[j - 1], h + static_cast<int>(j));
    }
    check(validate(red.g, p.sources, p) == t, "cactus_yes_protocol: protocol not t rounds");
    return p;
}

// ---------------------------------------------------------------------------
// Tree-depth pipeline: RNMTS -> TBMS (multi-source) -> TB, both star-based.

struct TbmsReduction {
    Graph g;
    VertexSet S;
    int t = 0;
    int s = 0;
    // Gadget layout per target i: l, r, and per j in [c_i]: l_ij, s_ij, r_ij
    // plus the star centers v_ijk (k in [t-1]).
    struct Gadget {
        int l = -1, r = -1;
        std::vector<int> lj, sj, rj;
        std::vector<std::vector<int>> starCenters;  // per j, per k
        std::vector<std::vector<std::vector<int>>> starLeaves;
    };
    std::vector<Gadget> gadgets;
    std::map<int, int> fillerCenter;               // h -> v_h
    std::map<int, std::vector<int>> fillerLeaves;  // h -> leaves
};

inline TbmsReduction reduce_tbms(const RnmtsInstance& inst) {
    validate_rnmts(inst);
    const int n = inst.size();
    const int64_t t = inst.target();
    check(t <= 40, "reduce_tbms: target too large for desk scale");

    std::set<int64_t> claimed;
    for (int64_t x : inst.A)
        if (t - x >= 1) claimed.insert(t - x);
    for (int64_t x : inst.B)
        if (t - x >= 1) claimed.insert(t - x);

    int64_t total = 1;
    for (int64_t h = 1; h <= t; ++h)
        if (!claimed.count(h)) total += 1 + (t - h);
    for (int i = 0; i < n; ++i) {
        total += 2;  // l_i, r_i
        // per j: 3 vertices plus t-1 stars with 1 + (t-k) vertices each
        int64_t per = 3;
        for (int64_t k = 1; k <= t - 1; ++k) per += 1 + (t - k);
        total += inst.C[i] * per;
    }

    TbmsReduction out;
    out.t = static_cast<int>(t);
    out.s = 0;
    Graph g(static_cast<int>(total));
    VertexSet S(static_cast<int>(total), {0});
    int next = 1;

    for (int64_t h = 1; h <= t; ++h) {
        if (claimed.count(h)) continue;
        int center = next++;
        g.add_edge(0, center);
        out.fillerCenter[static_cast<int>(h)] = center;
        auto& leaves = out.fillerLeaves[static_cast<int>(h)];
        for (int64_t j = 0; j < t - h; ++j) {
            leaves.push_back(next);
            g.add_edge(center, next++);
        }
    }
    for (int i = 0; i < n; ++i) {
        TbmsReduction::Gadget gad;
        gad.l = next++;
        gad.r = next++;
        g.add_edge(0, gad.l);
        g.add_edge(0, gad.r);
        for (int64_t j = 0; j < inst.C[i]; ++j) {
            int lj = next++, sj = next++, rj = next++;
            gad.lj.push_back(lj);
            gad.sj.push_back(sj);
            gad.rj.push_back(rj);
            S.set(sj);
            g.add_edge(gad.l, lj);
            g.add_edge(lj, sj);
            g.add_edge(sj, rj);
            g.add_edge(rj, gad.r);
            std::vector<int> centers;
            std::vector<std::vector<int>> leaves;
            for (int64_t k = 1; k <= t - 1; ++k) {
                int center = next++;
                g.add_edge(sj, center);
                centers.push_back(center);
                std::vector<int> ls;
                for (int64_t m = 0; m < t - k; ++m) {
                    ls.push_back(next);
                    g.add_edge(center, next++);
                }
                leaves.push_back(std::move(ls));
            }
            gad.starCenters.push_back(std::move(centers));
            gad.starLeaves.push_back(std::move(leaves));
        }
        out.gadgets.push_back(std::move(gad));
    }
    g.normalize();
    out.g = std::move(g);
    out.S = S;

    int64_t sumC = 0;
    for (int64_t c : inst.C) sumC += c;
    check(out.S.count() == 1 + sumC, "reduce_tbms: |S| identity violated");
    int64_t maxAB = 0;
    for (int64_t x : inst.A) maxAB = std::max(maxAB, x);
    for (int64_t x : inst.B) maxAB = std::max(maxAB, x);
    if (maxAB < t)
        check(static_cast<int64_t>(out.g.n()) ==
                  static_cast<int64_t>(out.S.count()) * (1 + t * (t + 1) / 2),
              "reduce_tbms: size identity violated");
    return out;
}

// TBMS -> TB: s' = s_0, stars forcing each further source busy, one star on z,
// t' = t + k + 1.
struct TbReduction {
    Graph g;
    int s = 0;
    int t = 0;  // t' = t + k + 1
    int k = 0;  // |S| - 1
    TbmsReduction tbms;
    std::vector<int> sources;                     // s_0 .. s_k ascending
    std::vector<std::vector<int>> forceCenters;   // per i in [k], centers v_{i,j}, j in [i+1,k+1]
    std::vector<std::vector<std::vector<int>>> forceLeaves;
    int z = -1;
    std::vector<int> zLeaves;
};

inline TbReduction tbms_to_tb(const TbmsReduction& tbms) {
    TbReduction out;
    out.tbms = tbms;
    out.sources = tbms.S.to_vector();
    const int k = static_cast<int>(out.sources.size()) - 1;
    const int t = tbms.t;
    out.k = k;
    out.t = t + k + 1;
    check(out.sources[0] == tbms.s, "tbms_to_tb: s_0 must be the primary source");

    int64_t extra = 1 + t;  // z and its leaves
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k + 1; ++j) extra += 1 + (t + k - j + 1);

    Graph g(tbms.g.n() + static_cast<int>(extra));
    for (auto [u, v] : tbms.g.edges()) g.add_edge(u, v);
    int next = tbms.g.n();

    for (int i = 1; i <= k; ++i) g.add_edge(out.sources[0], out.sources[i]);
    out.forceCenters.assign(k + 1, {});
    out.forceLeaves.assign(k + 1, {});
    for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k + 1; ++j) {
            int center = next++;
            g.add_edge(out.sources[i], center);
            out.forceCenters[i].push_back(center);
            std::vector<int> ls;
            for (int m = 0; m < t + k - j + 1; ++m) {
                ls.push_back(next);
                g.add_edge(center, next++);
            }
            out.forceLeaves[i].push_back(std::move(ls));
        }
    }
    out.z = next++;
    g.add_edge(out.sources[0], out.z);
    for (int m = 0; m < t; ++m) {
        out.zLeaves.push_back(next);
        g.add_edge(out.z, next++);
    }
    g.normalize();
    out.g = std::move(g);
    out.s = out.sources[0];
    return out;
}

// The TBMS yes-protocol of the paper's first reduction.
inline BroadcastProtocol tbms_yes_protocol(const RnmtsInstance& inst,
                                           const RnmtsPartition& partition,
                                           const TbmsReduction& red) {
    const int t = red.t;
    std::map<int64_t, std::pair<int64_t, int64_t>> byTarget;
    for (const auto& tri : partition) byTarget[tri[0]] = {tri[1], tri[2]};

    BroadcastProtocol p = BroadcastProtocol::start(red.g.n(), red.S, t);
    for (const auto& [h, center] : red.fillerCenter) {
        p.add(center, 0, h);
        const auto& leaves = red.fillerLeaves.at(h);
        for (std::size_t j = 0; j < leaves.size(); ++j)
            p.add(leaves[j], center, h + 1 + static_cast<int>(j));
    }
    for (int i = 0; i < inst.size(); ++i) {
        auto [a, b] = byTarget.at(inst.C[i]);
        const auto& gad = red.gadgets[i];
        const int64_t c = inst.C[i];
        p.add(gad.l, 0, static_cast<int>(t - a));
        p.add(gad.r, 0, static_cast<int>(t - b));
        // l serves l_{i,1}..l_{i,a}; r serves r_{i,a+1}..r_{i,a+b}.
        for (int64_t j = 1; j <= a; ++j)
            p.add(gad.lj[j - 1], gad.l, static_cast<int>(t - a + j));
        for (int64_t j = 1; j <= b; ++j)
            p.add(gad.rj[a + j - 1], gad.r, static_cast<int>(t - b + j));
        for (int64_t j = 0; j < c; ++j) {
            // s_{i,j} serves its stars at rounds 1..t-1 and the missing side
            // vertex at round t.
            for (int64_t k = 1; k <= t - 1; ++k)
                p.add(gad.starCenters[j][k - 1], gad.sj[j], static_cast<int>(k));
            if (j < a) p.add(gad.rj[j], gad.sj[j], t);
            else p.add(gad.lj[j], gad.sj[j], t);
            for (int64_t k = 1; k <= t - 1; ++k) {
                const auto& ls = gad.starLeaves[j][k - 1];
                for (std::size_t m = 0; m < ls.size(); ++m)
                    p.add(ls[m], gad.starCenters[j][k - 1], static_cast<int>(k + 1 + m));
            }
        }
    }
    check(validate(red.g, red.S, p) == t, "tbms_yes_protocol: protocol not t rounds");
    return p;
}

// Lifted single-source protocol on the tbms_to_tb output: sources chained in
// the first k+1 rounds, forcing stars busy, then the TBMS protocol shifted.
inline BroadcastProtocol lifted_yes_protocol(const RnmtsInstance& inst,
                                             const RnmtsPartition& partition,
                                             const TbReduction& red) {
    const int t = red.tbms.t;
    const int k = red.k;
    const int tPrime = red.t;
    BroadcastProtocol inner = tbms_yes_protocol(inst, partition, red.tbms);

    BroadcastProtocol p = BroadcastProtocol::start(red.g.n(), VertexSet(red.g.n(), {red.s}), tPrime);
    for (int i = 1; i <= k; ++i) p.add(red.sources[i], red.sources[0], i);
    p.add(red.z, red.sources[0], k + 1);
    for (int i = 1; i <= k; ++i) {
        for (std::size_t jj = 0; jj < red.forceCenters[i].size(); ++jj) {
            int j = i + 1 + static_cast<int>(jj);
            int center = red.forceCenters[i][jj];
            p.add(center, red.sources[i], j);
            const auto& ls = red.forceLeaves[i][jj];
            for (std::size_t m = 0; m < ls.size(); ++m)
                p.add(ls[m], center, j + 1 + static_cast<int>(m));
        }
    }
    for (std::size_t m = 0; m < red.zLeaves.size(); ++m)
        p.add(red.zLeaves[m], red.z, k + 2 + static_cast<int>(m));
    // The TBMS protocol, shifted by k+1; its sources are already informed.
    for (int v = 0; v < red.tbms.g.n(); ++v)
        if (inner.parent[v] != -1) p.add(v, inner.parent[v], inner.tau[v] + k + 1);
    check(validate(red.g, p.sources, p) == tPrime,
          "lifted_yes_protocol: protocol not t+k+1 rounds");
    (void)t;
    return p;
}

// Elimination tree of height <= 6 for the pipeline output, following the
// peeling order s_0; l_i, r_i; s_ij; star centers; leaves.
inline EliminationTree treedepth_witness(const TbReduction& red) {
    const int n = red.g.n();
    EliminationTree et;
    et.parent.assign(n, -1);
    et.root = red.s;

    auto setp = [&](int v, int parent) { et.parent[v] = parent; };

    const auto& tb = red.tbms;
    for (const auto& [h, center] : tb.fillerCenter) {
        setp(center, red.s);
        for (int leaf : tb.fillerLeaves.at(h)) setp(leaf, center);
    }
    for (const auto& gad : tb.gadgets) {
        setp(gad.l, red.s);
        setp(gad.r, gad.l);
        for (std::size_t j = 0; j < gad.sj.size(); ++j) {
            setp(gad.sj[j], gad.r);
            setp(gad.lj[j], gad.sj[j]);
            setp(gad.rj[j], gad.sj[j]);
            for (std::size_t kk = 0; kk < gad.starCenters[j].size(); ++kk) {
                setp(gad.starCenters[j][kk], gad.sj[j]);
                for (int leaf : gad.starLeaves[j][kk]) setp(leaf, gad.starCenters[j][kk]);
            }
        }
    }
    for (int i = 1; i <= red.k; ++i) {
        int src = red.sources[i];
        for (std::size_t jj = 0; jj < red.forceCenters[i].size(); ++jj) {
            setp(red.forceCenters[i][jj], src);
            for (int leaf : red.forceLeaves[i][jj]) setp(leaf, red.forceCenters[i][jj]);
        }
    }
    setp(red.z, red.s);
    for (int leaf : red.zLeaves) setp(leaf, red.z);

    int height = validate_elimination_tree(red.g, et);
    check(height <= 6, "treedepth_witness: height exceeds 6");
    return et;
}

// ---------------------------------------------------------------------------
// Random instance generators (seed-deterministic)

struct GeneratedGraph {
    Graph g;
    std::string comment;               // "# kind params seed"
    std::optional<VertexSet> planted;  // modulator / cvd set where applicable
};

inline GeneratedGraph gen_random_tree(int n, uint64_t seed) {
    check(n >= 1, "gen tree: n must be positive");
    Rng rng(seed);
    Graph g(n);
    for (int v = 1; v < n; ++v) g.add_edge(v, rng.below(v));
    g.normalize();
    return {std::move(g), "tree n=" + std::to_string(n) + " seed=" + std::to_string(seed), {}};
}

inline GeneratedGraph gen_random_cactus(int n, uint64_t seed) {
    check(n >= 1, "gen cactus: n must be positive");
    Rng rng(seed);
    Graph g(n);
    int built = 1;
    while (built < n) {
        int attach = rng.below(built);
        int remaining = n - built;
        if (remaining >= 3 && rng.coin(1, 2)) {
            // A cycle through the attachment point.
            int len = std::min(2 + rng.below(std::min(remaining - 1, 4) + 1), remaining);
            for (int i = 0; i < len; ++i) {
                int v = built++;
                g.add_edge(i == 0 ? attach : v - 1, v);
            }
            g.add_edge(attach, built - 1);
            continue;
        }
        int len = 1 + rng.below(std::min(remaining, 3));
        for (int i = 0; i < len; ++i) {
            int v = built++;
            g.add_edge(i == 0 ? attach : v - 1, v);
        }
    }
    g.normalize();
    return {std::move(g), "cactus n=" + std::to_string(n) + " seed=" + std::to_string(seed), {}};
}

inline GeneratedGraph gen_cluster_plus_modulator(int cliques, int maxCliqueSize, int k,
                                                 uint64_t seed) {
    check(cliques >= 1 && maxCliqueSize >= 1 && k >= 0, "gen cluster: bad parameters");
    check(k >= 1 || cliques == 1, "gen cluster: k=0 needs a single clique");
    Rng rng(seed);
    std::vector<int> sizes;
    int total = 0;
    for (int i = 0; i < cliques; ++i) {
        sizes.push_back(1 + rng.below(maxCliqueSize));
        total += sizes.back();
    }
    Graph g(total + k);
    int at = 0;
    std::vector<int> cliqueStart;
    for (int i = 0; i < cliques; ++i) {
        cliqueStart.push_back(at);
        for (int u = 0; u < sizes[i]; ++u)
            for (int v = u + 1; v < sizes[i]; ++v) g.add_edge(at + u, at + v);
        at += sizes[i];
    }
    VertexSet planted(total + k);
    for (int m = 0; m < k; ++m) planted.set(total + m);
    // Random attachments; connectivity is forced through the modulator so the
    // cluster property survives.
    for (int m = 0; m < k; ++m)
        for (int v = 0; v < total; ++v)
            if (rng.coin(1, 3)) g.add_edge(total + m, v);
    for (int m = 0; m < k; ++m)
        for (int m2 = m + 1; m2 < k; ++m2)
            if (rng.coin(1, 4)) g.add_edge(total + m, total + m2);
    while (k > 0) {
        auto comps = components(g);
        if (comps.size() <= 1) break;
        const auto& stray = comps[0].test(total) ? comps[1] : comps[0];
        g.add_edge(total, stray.next(0));
    }
    g.normalize();
    return {std::move(g),
            "clusterPlusModulator cliques=" + std::to_string(cliques) +
                " maxSize=" + std::to_string(maxCliqueSize) + " k=" + std::to_string(k) +
                " seed=" + std::to_string(seed),
            planted};
}

inline GeneratedGraph gen_connected_gnp(int n, uint32_t pNum, uint32_t pDen, uint64_t seed) {
    check(n >= 1 && pDen > 0 && pNum <= pDen, "gen gnp: bad parameters");
    Rng rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.coin(pNum, pDen)) g.add_edge(u, v);
        if (is_connected(g)) {
            g.normalize();
            return {std::move(g),
                    "connectedGnp n=" + std::to_string(n) + " p=" + std::to_string(pNum) + "/" +
                        std::to_string(pDen) + " seed=" + std::to_string(seed),
                    {}};
        }
    }
    fail("gen gnp: could not sample a connected graph");
}

}  // namespace tb
