#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "tb/check.hpp"
#include "tb/flow.hpp"
#include "tb/graph.hpp"

namespace tb {

// The paper's (T, tau): a forest rooted at the sources plus per-vertex stamps
// on the edge to the parent. rounds is the declared budget t; stamps of a
// valid protocol never exceed it.
struct BroadcastProtocol {
    VertexSet sources;
    std::vector<int> parent;  // -1 for sources and uninformed vertices
    std::vector<int> tau;     // 0 for sources and uninformed vertices
    int rounds = 0;

    static BroadcastProtocol start(int n, const VertexSet& sources, int rounds = 0) {
        BroadcastProtocol p;
        p.sources = sources;
        p.parent.assign(n, -1);
        p.tau.assign(n, 0);
        p.rounds = rounds;
        return p;
    }

    bool informed(int v) const { return sources.test(v) || parent[v] != -1; }

    int informed_count() const {
        int c = 0;
        for (std::size_t v = 0; v < parent.size(); ++v)
            if (informed(static_cast<int>(v))) c++;
        return c;
    }

    int max_stamp() const {
        int m = 0;
        for (int t : tau) m = std::max(m, t);
        return m;
    }

    void add(int v, int from, int round) {
        check(parent[v] == -1 && !sources.test(v), "protocol: vertex informed twice");
        parent[v] = from;
        tau[v] = round;
    }
};

// Transcript form: (round, sender, receiver) triples.
struct RoundSchedule {
    std::vector<std::tuple<int, int, int>> steps;
};

namespace detail {

// Shared checking core. requireAll = every vertex informed (the public op),
// otherwise uninformed vertices are fine as long as they do nothing.
inline int validate_impl(const Graph& g, const VertexSet& sources, const BroadcastProtocol& p,
                         bool requireAll) {
    const int n = g.n();
    check(!sources.empty(), "validate: empty source set");
    check(sources.universe() == n && static_cast<int>(p.parent.size()) == n &&
              static_cast<int>(p.tau.size()) == n,
          "validate: protocol size mismatch");
    check(p.sources == sources, "validate: source set mismatch");

    int maxStamp = 0;
    for (int v = 0; v < n; ++v) {
        if (sources.test(v)) {
            check(p.parent[v] == -1 && p.tau[v] == 0, "validate: source with parent or stamp");
            continue;
        }
        if (p.parent[v] == -1) {
            check(!requireAll, "validate: uninformed vertex " + std::to_string(v));
            check(p.tau[v] == 0, "validate: stamp on uninformed vertex");
            continue;
        }
        check(g.has_edge(v, p.parent[v]), "validate: parent edge not in graph");
        check(1 <= p.tau[v] && p.tau[v] <= p.rounds,
              "validate: stamp outside [1, t] at vertex " + std::to_string(v));
        maxStamp = std::max(maxStamp, p.tau[v]);
    }

    // Stamp ordering doubles as the cycle check: tau strictly decreases along
    // parent chains, so they must end at a source.
    std::vector<std::vector<int>> childStamps(n);
    for (int v = 0; v < n; ++v) {
        if (p.parent[v] == -1) continue;
        int u = p.parent[v];
        check(p.informed(u), "validate: parent is uninformed");
        check(p.tau[u] < p.tau[v], "validate: child stamped before parent");
        childStamps[u].push_back(p.tau[v]);
    }
    for (int v = 0; v < n; ++v) {
        auto& s = childStamps[v];
        std::sort(s.begin(), s.end());
        check(std::adjacent_find(s.begin(), s.end()) == s.end(),
              "validate: double send in one round by vertex " + std::to_string(v));
    }
    return maxStamp;
}

}  // namespace detail

// The single arbiter: returns the number of rounds used iff the protocol is
// valid and informs every vertex of g. Throws Error otherwise.
inline int validate(const Graph& g, const VertexSet& sources, const BroadcastProtocol& p) {
    return detail::validate_impl(g, sources, p, /*requireAll=*/true);
}

// Validity of a partial protocol (uninformed vertices permitted but inert).
inline int validate_partial(const Graph& g, const VertexSet& sources,
                            const BroadcastProtocol& p) {
    return detail::validate_impl(g, sources, p, /*requireAll=*/false);
}

inline BroadcastProtocol from_schedule(const Graph& g, const VertexSet& sources,
                                       const RoundSchedule& sched) {
    auto steps = sched.steps;
    std::stable_sort(steps.begin(), steps.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    BroadcastProtocol p = BroadcastProtocol::start(g.n(), sources);
    for (auto [round, sender, receiver] : steps) {
        check(round >= 1, "from_schedule: round must be positive");
        check(g.has_edge(sender, receiver), "from_schedule: non-edge transmission");
        check(p.informed(sender) && p.tau[sender] < round,
              "from_schedule: sender uninformed at its round");
        p.add(receiver, sender, round);
        p.rounds = std::max(p.rounds, round);
    }
    // Re-check send/receive collisions through the arbiter.
    detail::validate_impl(g, sources, p, /*requireAll=*/false);
    return p;
}

inline RoundSchedule to_schedule(const BroadcastProtocol& p) {
    RoundSchedule s;
    for (std::size_t v = 0; v < p.parent.size(); ++v)
        if (p.parent[v] != -1)
            s.steps.emplace_back(p.tau[v], p.parent[v], static_cast<int>(v));
    std::sort(s.steps.begin(), s.steps.end());
    return s;
}

// Extends a partial protocol round by round: idle informed vertices are
// matched to uninformed neighbors by maximum bipartite matching (receivers
// scanned ascending, senders ascending, so output is deterministic). Returns
// nullopt when the budget runs out with vertices left uninformed.
// allowedSenders, when given, restricts who may transmit in the extension.
inline std::optional<BroadcastProtocol> greedy_complete(
    const Graph& g, const BroadcastProtocol& partial, int budget,
    const std::optional<VertexSet>& allowedSenders = std::nullopt) {
    const int n = g.n();
    detail::validate_impl(g, partial.sources, partial, /*requireAll=*/false);
    BroadcastProtocol p = partial;
    p.rounds = std::max(p.rounds, budget);

    std::vector<std::vector<int>> busy(n);  // vertex -> sorted send rounds
    for (int v = 0; v < n; ++v)
        if (p.parent[v] != -1) busy[p.parent[v]].push_back(p.tau[v]);

    auto is_busy = [&](int v, int round) {
        return std::find(busy[v].begin(), busy[v].end(), round) != busy[v].end();
    };

    for (int round = 1; round <= budget; ++round) {
        if (p.informed_count() == n) break;
        std::vector<int> senders, receivers;
        for (int v = 0; v < n; ++v) {
            if (p.informed(v) && p.tau[v] < round && !is_busy(v, round) &&
                (!allowedSenders || allowedSenders->test(v)))
                senders.push_back(v);
            else if (!p.informed(v))
                receivers.push_back(v);
        }
        if (senders.empty() || receivers.empty()) continue;
        std::vector<int> recvIndex(n, -1);
        for (std::size_t i = 0; i < receivers.size(); ++i) recvIndex[receivers[i]] = static_cast<int>(i);
        std::vector<std::pair<int, int>> edges;
        for (std::size_t si = 0; si < senders.size(); ++si)
            for (int u : g.neighbors(senders[si]))
                if (recvIndex[u] != -1) edges.emplace_back(static_cast<int>(si), recvIndex[u]);
        auto match = b_matching(std::vector<int>(senders.size(), 1),
                                static_cast<int>(receivers.size()), edges);
        for (std::size_t ri = 0; ri < receivers.size(); ++ri) {
            if (match.rightMatch[ri] == -1) continue;
            int sender = senders[match.rightMatch[ri]];
            p.add(receivers[ri], sender, round);
            busy[sender].push_back(round);
        }
    }
    if (p.informed_count() != n) return std::nullopt;
    return p;
}

// Per component of g - S: the first round at which a vertex of the component
// receives the message from a vertex of S. Keys are component indices in the
// deterministic components() order; silent components are absent.
inline std::map<int, int> arrival_times(const Graph& g, const VertexSet& S,
                                        const BroadcastProtocol& p) {
    detail::validate_impl(g, p.sources, p, /*requireAll=*/false);
    auto comps = components(g, S);
    std::map<int, int> arrivals;
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        int best = kUnreachable;
        for (int v = comps[ci].next(0); v != -1; v = comps[ci].next(v + 1))
            if (p.parent[v] != -1 && S.test(p.parent[v])) best = std::min(best, p.tau[v]);
        if (best != kUnreachable) arrivals[static_cast<int>(ci)] = best;
    }
    return arrivals;
}

// File format: "t k", one line of source ids, then "v parent round" per
// informed non-source vertex, ascending v. Round-trips byte-identically.
inline std::string serialize_protocol(const BroadcastProtocol& p) {
    std::ostringstream out;
    auto src = p.sources.to_vector();
    out << p.rounds << " " << src.size() << "\n";
    for (std::size_t i = 0; i < src.size(); ++i) out << (i ? " " : "") << src[i];
    out << "\n";
    for (std::size_t v = 0; v < p.parent.size(); ++v)
        if (p.parent[v] != -1) out << v << " " << p.parent[v] << " " << p.tau[v] << "\n";
    return out.str();
}

inline BroadcastProtocol parse_protocol(std::istream& in, int n) {
    int t = -1, k = -1;
    check(static_cast<bool>(in >> t >> k), "parse_protocol: malformed header");
    check(t >= 0 && k >= 1, "parse_protocol: bad rounds or source count");
    VertexSet sources(n);
    for (int i = 0; i < k; ++i) {
        int s = -1;
        check(static_cast<bool>(in >> s), "parse_protocol: missing source id");
        check(0 <= s && s < n, "parse_protocol: source out of range");
        sources.set(s);
    }
    BroadcastProtocol p = BroadcastProtocol::start(n, sources, t);
    int v, par, round;
    while (in >> v >> par >> round) {
        check(0 <= v && v < n && 0 <= par && par < n, "parse_protocol: vertex out of range");
        p.add(v, par, round);
    }
    return p;
}

inline BroadcastProtocol parse_protocol(const std::string& text, int n) {
    std::istringstream in(text);
    return parse_protocol(in, n);
}

}  // namespace tb
