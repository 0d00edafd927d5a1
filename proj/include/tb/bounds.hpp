#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tb/check.hpp"
#include "tb/decomposition.hpp"
#include "tb/exact.hpp"
#include "tb/graph.hpp"
#include "tb/rational.hpp"

namespace tb {

enum class BoundKind {
    TrivialLog,
    Eccentricity,
    SeparatorCount,
    DiameterHalf,
    SeparatorDiameter,
    TreeDepth,
    PathwidthLength,
    PathwidthN,
};

inline const char* bound_kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::TrivialLog: return "trivialLog";
        case BoundKind::Eccentricity: return "eccentricity";
        case BoundKind::SeparatorCount: return "separatorCount";
        case BoundKind::DiameterHalf: return "diameterHalf";
        case BoundKind::SeparatorDiameter: return "separatorDiameter";
        case BoundKind::TreeDepth: return "treeDepth";
        case BoundKind::PathwidthLength: return "pathwidthLength";
        case BoundKind::PathwidthN: return "pathwidthN";
    }
    return "?";
}

struct LowerBoundCertificate {
    BoundKind kind = BoundKind::TrivialLog;
    double value = 0.0;                 // the raw bound, b(G,s) >= value
    int ceiled = 0;                     // usable integral bound
    std::optional<VertexSet> witness;   // separator, when one is involved
};

// Rounds are integral, so b >= value implies b >= ceil(value). The epsilon
// guards against a float landing a hair above the true irrational value.
inline int bound_ceil(double value) {
    if (value <= 0) return 0;
    return static_cast<int>(std::ceil(value - 1e-9));
}

// |cc(G-S)| / |S|: at most |S| components become active per round.
inline Rational separator_bound(const Graph& g, const VertexSet& S) {
    check(!S.empty(), "separator_bound: empty separator");
    return Rational(static_cast<int64_t>(components(g, S).size()), S.count());
}

// diam(G) / 2: every vertex lies within b(G,s) hops of s.
inline Rational diameter_half_bound(const Graph& g) {
    check(is_connected(g), "diameter_half_bound: graph disconnected");
    return Rational(diameter(g), 2);
}

// sqrt(sum of component diameters / 2|S|).
inline double separator_diameter_bound(const Graph& g, const VertexSet& S) {
    check(!S.empty(), "separator_diameter_bound: empty separator");
    int64_t sum = 0;
    for (const auto& comp : components(g, S)) sum += diameter(g, comp);
    return std::sqrt(static_cast<double>(sum) / (2.0 * S.count()));
}

// n^(1/h) / h for a valid elimination tree of height h.
inline double treedepth_bound(const Graph& g, const EliminationTree& et) {
    check(g.n() > 1, "treedepth_bound: needs more than one vertex");
    int h = validate_elimination_tree(g, et);
    return std::pow(static_cast<double>(g.n()), 1.0 / h) / h;
}

// sqrt(length^(1/(pw+1)) / 2pw) for a standard path decomposition.
inline double pathwidth_bound(const Graph& g, const PathDecomposition& pd) {
    check(pd.standard, "pathwidth_bound: decomposition not standard");
    validate_path_decomposition(g, pd);
    check(g.n() > 1 && is_connected(g), "pathwidth_bound: needs a connected graph, n > 1");
    int pw = pd.width();
    check(pw >= 1, "pathwidth_bound: width must be at least 1");
    double l = pd.length();
    return std::sqrt(std::pow(l, 1.0 / (pw + 1)) / (2.0 * pw));
}

// sqrt((n/(pw+1))^(1/(pw+1)) / 2pw): the length-free corollary form.
inline double pathwidth_n_bound(const Graph& g, int pw) {
    check(g.n() > 1, "pathwidth_n_bound: needs more than one vertex");
    check(pw >= 1, "pathwidth_n_bound: width must be at least 1");
    double base = static_cast<double>(g.n()) / (pw + 1);
    return std::sqrt(std::pow(base, 1.0 / (pw + 1)) / (2.0 * pw));
}

struct BoundWitnesses {
    std::optional<PathDecomposition> pd;  // must be standard for pathwidth_bound
    std::optional<EliminationTree> et;
    std::vector<VertexSet> separators;
    int separatorCap = 3;  // exhaustive |S| <= cap enumeration
};

// Maximum over all computable lower bounds; deterministic argmax (value, then
// kind order, then lexicographic witness).
inline LowerBoundCertificate best_bound(const Graph& g, int s,
                                        const BoundWitnesses& witnesses = {}) {
    check(is_connected(g), "best_bound: graph disconnected");
    const int n = g.n();
    LowerBoundCertificate best;

    // Offers arrive in a fixed order (kinds, then separators lexicographic),
    // and ties on the usable integral bound keep the earliest find.
    auto offer = [&](BoundKind kind, double value, std::optional<VertexSet> witness) {
        int c = bound_ceil(value);
        if (c > best.ceiled) best = {kind, value, c, std::move(witness)};
    };

    offer(BoundKind::TrivialLog, ceil_log2(n), std::nullopt);
    offer(BoundKind::Eccentricity, eccentricity(g, s), std::nullopt);
    offer(BoundKind::DiameterHalf, diameter_half_bound(g).value(), std::nullopt);

    auto offer_separator = [&](const VertexSet& S) {
        offer(BoundKind::SeparatorCount, separator_bound(g, S).value(), S);
        offer(BoundKind::SeparatorDiameter, separator_diameter_bound(g, S), S);
    };

    // All separators up to the cap, lexicographic.
    std::vector<int> pick;
    std::function<void(int, int)> rec = [&](int from, int left) {
        if (!pick.empty()) {
            VertexSet S(n);
            for (int v : pick) S.set(v);
            offer_separator(S);
        }
        if (left == 0) return;
        for (int v = from; v < n; ++v) {
            pick.push_back(v);
            rec(v + 1, left - 1);
            pick.pop_back();
        }
    };
    rec(0, std::min(witnesses.separatorCap, n));

    for (const auto& S : witnesses.separators)
        if (!S.empty()) offer_separator(S);

    if (witnesses.et && n > 1)
        offer(BoundKind::TreeDepth, treedepth_bound(g, *witnesses.et), std::nullopt);
    if (witnesses.pd && n > 1) {
        PathDecomposition pd = *witnesses.pd;
        if (!pd.standard) pd = standardize_path_decomposition(g, pd);
        if (pd.width() >= 1) {
            offer(BoundKind::PathwidthLength, pathwidth_bound(g, pd), std::nullopt);
            offer(BoundKind::PathwidthN, pathwidth_n_bound(g, pd.width()), std::nullopt);
        }
    }
    return best;
}

}  // namespace tb
