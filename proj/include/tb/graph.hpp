#pragma once

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tb/bitset.hpp"
#include "tb/check.hpp"

namespace tb {

constexpr int kUnreachable = std::numeric_limits<int>::max();

// Simple undirected graph on dense 0-based ids. No loops, no parallel edges.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : n_(n), adj_(n) {}

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }

    void add_edge(int u, int v) {
        check(0 <= u && u < n_ && 0 <= v && v < n_, "add_edge: vertex out of range");
        check(u != v, "add_edge: loop rejected");
        if (u > v) std::swap(u, v);
        check(!has_edge(u, v), "add_edge: duplicate edge rejected");
        edges_.emplace_back(u, v);
        adj_[u].push_back(v);
        adj_[v].push_back(u);
        sorted_ = false;
    }

    bool has_edge(int u, int v) const {
        if (adj_[u].size() > adj_[v].size()) std::swap(u, v);
        return std::find(adj_[u].begin(), adj_[u].end(), v) != adj_[u].end();
    }

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // Sorts adjacency and edge lists; call once after construction when
    // deterministic iteration order matters.
    void normalize() {
        if (sorted_) return;
        for (auto& a : adj_) std::sort(a.begin(), a.end());
        std::sort(edges_.begin(), edges_.end());
        sorted_ = true;
    }

    VertexSet neighbor_set(int v) const {
        VertexSet s(n_);
        for (int u : adj_[v]) s.set(u);
        return s;
    }

    Graph induced(const VertexSet& keep, std::vector<int>* origIds = nullptr) const {
        std::vector<int> ids = keep.to_vector();
        std::vector<int> pos(n_, -1);
        for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = static_cast<int>(i);
        Graph h(static_cast<int>(ids.size()));
        for (auto [u, v] : edges_)
            if (pos[u] != -1 && pos[v] != -1) h.add_edge(pos[u], pos[v]);
        h.normalize();
        if (origIds) *origIds = std::move(ids);
        return h;
    }

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    bool sorted_ = true;
};

// Edge-list format: optional '#'-comment lines, then "n m", then m lines "u v".
inline Graph parse_graph(std::istream& in) {
    std::string line;
    auto next_data_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            std::size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            if (line[i] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string head;
    check(next_data_line(head), "parse_graph: empty input");
    std::istringstream hs(head);
    long long n = -1, m = -1;
    hs >> n >> m;
    check(!hs.fail() && n >= 0 && m >= 0, "parse_graph: malformed header line");

    Graph g(static_cast<int>(n));
    for (long long i = 0; i < m; ++i) {
        std::string e;
        check(next_data_line(e), "parse_graph: missing edge line");
        std::istringstream es(e);
        long long u = -1, v = -1;
        es >> u >> v;
        std::string rest;
        check(!es.fail() && !(es >> rest), "parse_graph: malformed edge line: " + e);
        check(0 <= u && u < n && 0 <= v && v < n, "parse_graph: vertex id out of range: " + e);
        g.add_edge(static_cast<int>(u), static_cast<int>(v));
    }
    g.normalize();
    return g;
}

inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

inline std::string serialize_graph(const Graph& g, const std::string& comment = "") {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << "\n";
    out << g.n() << " " << g.m() << "\n";
    auto edges = g.edges();
    std::sort(edges.begin(), edges.end());
    for (auto [u, v] : edges) out << u << " " << v << "\n";
    return out.str();
}

// Connected components of g - removed, ordered by minimum contained id.
inline std::vector<VertexSet> components(const Graph& g, const VertexSet& removed) {
    const int n = g.n();
    std::vector<VertexSet> out;
    std::vector<bool> seen(n, false);
    for (int v = 0; v < n; ++v) {
        if (seen[v] || removed.test(v)) continue;
        VertexSet comp(n);
        std::deque<int> queue{v};
        seen[v] = true;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            comp.set(u);
            for (int w : g.neighbors(u)) {
                if (seen[w] || removed.test(w)) continue;
                seen[w] = true;
                queue.push_back(w);
            }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

inline std::vector<VertexSet> components(const Graph& g) {
    return components(g, VertexSet(g.n()));
}

inline bool is_connected(const Graph& g) {
    return g.n() == 0 || components(g).size() == 1;
}

// Breadth-first hop counts from a source; kUnreachable where disconnected.
inline std::vector<int> distances(const Graph& g, int from) {
    check(0 <= from && from < g.n(), "distances: source out of range");
    std::vector<int> dist(g.n(), kUnreachable);
    std::deque<int> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.neighbors(u)) {
            if (dist[v] != kUnreachable) continue;
            dist[v] = dist[u] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

// Restricted BFS inside an induced vertex set.
inline std::vector<int> distances_within(const Graph& g, int from, const VertexSet& within) {
    check(within.test(from), "distances_within: source not in set");
    std::vector<int> dist(g.n(), kUnreachable);
    std::deque<int> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.neighbors(u)) {
            if (!within.test(v) || dist[v] != kUnreachable) continue;
            dist[v] = dist[u] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

inline int eccentricity(const Graph& g, int from) {
    auto d = distances(g, from);
    int ecc = 0;
    for (int x : d) {
        check(x != kUnreachable, "eccentricity: graph disconnected");
        ecc = std::max(ecc, x);
    }
    return ecc;
}

// Max pairwise distance inside the subgraph induced by `within`.
inline int diameter(const Graph& g, const VertexSet& within) {
    int best = 0;
    for (int v = within.next(0); v != -1; v = within.next(v + 1)) {
        auto d = distances_within(g, v, within);
        for (int u = within.next(0); u != -1; u = within.next(u + 1)) {
            check(d[u] != kUnreachable, "diameter: induced subgraph disconnected");
            best = std::max(best, d[u]);
        }
    }
    return best;
}

inline int diameter(const Graph& g) { return diameter(g, VertexSet::all(g.n())); }

// Convenience builders used all over the tests.
inline Graph path_graph(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    g.normalize();
    return g;
}

inline Graph cycle_graph(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    if (n > 2) g.add_edge(0, n - 1);
    g.normalize();
    return g;
}

inline Graph complete_graph(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    g.normalize();
    return g;
}

inline Graph star_graph(int leaves) {
    Graph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
    g.normalize();
    return g;
}

}  // namespace tb
