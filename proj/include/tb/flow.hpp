#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "tb/check.hpp"

namespace tb {

// Dinic max-flow with integral capacities. Node count fixed at construction;
// arcs keep insertion order so runs are reproducible.
class FlowNetwork {
public:
    explicit FlowNetwork(int nodes) : head_(nodes, -1) {}

    int add_arc(int from, int to, int64_t cap) {
        check(cap >= 0, "add_arc: negative capacity");
        int id = static_cast<int>(arcs_.size());
        arcs_.push_back({to, head_[from], cap});
        head_[from] = id;
        arcs_.push_back({from, head_[to], 0});
        head_[to] = id + 1;
        return id;
    }

    int64_t flow_on(int arcId) const { return arcs_[arcId ^ 1].cap; }

    int64_t max_flow(int source, int sink) {
        int64_t total = 0;
        while (bfs(source, sink)) {
            iter_ = head_;
            while (int64_t pushed = dfs(source, sink, INT64_MAX)) total += pushed;
        }
        return total;
    }

private:
    struct Arc {
        int to;
        int next;
        int64_t cap;
    };

    bool bfs(int source, int sink) {
        level_.assign(head_.size(), -1);
        std::queue<int> queue;
        queue.push(source);
        level_[source] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop();
            for (int id = head_[u]; id != -1; id = arcs_[id].next) {
                const Arc& a = arcs_[id];
                if (a.cap > 0 && level_[a.to] == -1) {
                    level_[a.to] = level_[u] + 1;
                    queue.push(a.to);
                }
            }
        }
        return level_[sink] != -1;
    }

    int64_t dfs(int u, int sink, int64_t limit) {
        if (u == sink) return limit;
        for (int& id = iter_[u]; id != -1; id = arcs_[id].next) {
            Arc& a = arcs_[id];
            if (a.cap <= 0 || level_[a.to] != level_[u] + 1) continue;
            int64_t pushed = dfs(a.to, sink, std::min(limit, a.cap));
            if (pushed > 0) {
                a.cap -= pushed;
                arcs_[id ^ 1].cap += pushed;
                return pushed;
            }
        }
        return 0;
    }

    std::vector<int> head_;
    std::vector<int> iter_;
    std::vector<int> level_;
    std::vector<Arc> arcs_;
};

struct BMatchingResult {
    int size = 0;
    bool saturated = false;       // every right vertex matched
    std::vector<int> rightMatch;  // right index -> left index, -1 unmatched
};

namespace detail {

// Kuhn-style augmentation for capacitated left side; `visited` marks left
// vertices so a rerouted right cannot fall back onto the slot being freed.
struct BMatchState {
    const std::vector<std::vector<int>>& adj;  // right -> left candidates
    const std::vector<int>& cap;
    std::vector<int> used;                     // per-left slots taken
    std::vector<std::vector<int>> taken;       // left -> matched rights
    std::vector<int> rightMatch;
    std::vector<bool> visited;

    BMatchState(const std::vector<std::vector<int>>& a, const std::vector<int>& c, int rights)
        : adj(a), cap(c), used(c.size(), 0), taken(c.size()), rightMatch(rights, -1),
          visited(c.size(), false) {}

    bool augment(int r) {
        for (int l : adj[r]) {
            if (visited[l]) continue;
            visited[l] = true;
            if (used[l] < cap[l]) {
                used[l]++;
                taken[l].push_back(r);
                rightMatch[r] = l;
                return true;
            }
            for (std::size_t i = 0; i < taken[l].size(); ++i) {
                int other = taken[l][i];
                if (augment(other)) {
                    taken[l][i] = r;
                    rightMatch[r] = l;
                    return true;
                }
            }
        }
        return false;
    }
};

}  // namespace detail

// Maximum bipartite b-matching: left vertex i incident to at most leftCap[i]
// chosen edges, right vertices to at most one. Independent code path from the
// Dinic solver above (the two are cross-checked in tests).
inline BMatchingResult b_matching(const std::vector<int>& leftCap, int rightCount,
                                  const std::vector<std::pair<int, int>>& edges) {
    const int L = static_cast<int>(leftCap.size());
    std::vector<std::vector<int>> adj(rightCount);
    for (auto [l, r] : edges) {
        check(0 <= l && l < L && 0 <= r && r < rightCount, "b_matching: edge out of range");
        adj[r].push_back(l);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }

    detail::BMatchState st(adj, leftCap, rightCount);
    BMatchingResult res;
    for (int r = 0; r < rightCount; ++r) {
        std::fill(st.visited.begin(), st.visited.end(), false);
        if (st.augment(r)) res.size++;
    }
    res.rightMatch = st.rightMatch;
    res.saturated = (res.size == rightCount);
    return res;
}

// Unit bipartite matching over adjacency masks, for the subset DP inner loop:
// can every listed target bit be matched to a distinct sender? senderMasks[i]
// holds the target bits sender i may serve.
class MaskMatcher {
public:
    static bool saturates(const std::vector<uint64_t>& senderMasks,
                          const std::vector<int>& targets) {
        std::vector<int> ignored;
        return assign(senderMasks, targets, ignored);
    }

    // Returns true iff all targets matched; matchSender[i] = sender index for
    // targets[i]. Deterministic: senders scanned in index order.
    static bool assign(const std::vector<uint64_t>& senderMasks, const std::vector<int>& targets,
                       std::vector<int>& matchSender) {
        const int t = static_cast<int>(targets.size());
        matchSender.assign(t, -1);
        if (t == 0) return true;
        if (t > static_cast<int>(senderMasks.size())) return false;
        std::vector<int> senderTaken(senderMasks.size(), -1);
        std::vector<bool> visited(senderMasks.size());
        for (int i = 0; i < t; ++i) {
            std::fill(visited.begin(), visited.end(), false);
            if (!augment(i, senderMasks, targets, matchSender, senderTaken, visited)) return false;
        }
        return true;
    }

private:
    static bool augment(int ti, const std::vector<uint64_t>& senderMasks,
                        const std::vector<int>& targets, std::vector<int>& matchSender,
                        std::vector<int>& senderTaken, std::vector<bool>& visited) {
        for (std::size_t s = 0; s < senderMasks.size(); ++s) {
            if (visited[s] || !((senderMasks[s] >> targets[ti]) & 1ULL)) continue;
            visited[s] = true;
            if (senderTaken[s] == -1 ||
                augment(senderTaken[s], senderMasks, targets, matchSender, senderTaken, visited)) {
                senderTaken[s] = ti;
                matchSender[ti] = static_cast<int>(s);
                return true;
            }
        }
        return false;
    }
};

}  // namespace tb
