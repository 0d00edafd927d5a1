#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tb/check.hpp"
#include "tb/graph.hpp"

namespace tb {

// ---------------------------------------------------------------------------
// Path decompositions

struct PathDecomposition {
    std::vector<VertexSet> bags;
    bool standard = false;

    int length() const { return static_cast<int>(bags.size()); }
    int width() const {
        int w = 0;
        for (const auto& b : bags) w = std::max(w, b.count());
        return w - 1;
    }
};

inline void validate_path_decomposition(const Graph& g, const PathDecomposition& pd) {
    const int n = g.n();
    check(!pd.bags.empty(), "path decomposition: no bags");
    std::vector<int> first(n, -1), last(n, -1), cnt(n, 0);
    for (int i = 0; i < pd.length(); ++i) {
        check(pd.bags[i].universe() == n, "path decomposition: bag universe mismatch");
        for (int v = pd.bags[i].next(0); v != -1; v = pd.bags[i].next(v + 1)) {
            if (first[v] == -1) first[v] = i;
            last[v] = i;
            cnt[v]++;
        }
    }
    for (int v = 0; v < n; ++v) {
        check(cnt[v] > 0, "path decomposition: vertex missing from all bags");
        check(cnt[v] == last[v] - first[v] + 1, "path decomposition: occurrence not contiguous");
    }
    for (auto [u, v] : g.edges()) {
        bool covered = false;
        for (const auto& b : pd.bags)
            if (b.test(u) && b.test(v)) { covered = true; break; }
        check(covered, "path decomposition: edge not covered");
    }
    if (pd.standard) {
        for (int i = 0; i + 1 < pd.length(); ++i) {
            check(!pd.bags[i].is_subset_of(pd.bags[i + 1]) &&
                      !pd.bags[i + 1].is_subset_of(pd.bags[i]),
                  "path decomposition: adjacent subset bag in standard decomposition");
        }
    }
}

// Discards bags that are subsets of a neighboring bag until none remain;
// leftmost removable bag goes first, so the result is deterministic.
inline PathDecomposition standardize_path_decomposition(const Graph& g, PathDecomposition pd) {
    pd.standard = false;
    validate_path_decomposition(g, pd);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < pd.bags.size() && pd.bags.size() > 1; ++i) {
            bool drop = (i + 1 < pd.bags.size() && pd.bags[i].is_subset_of(pd.bags[i + 1])) ||
                        (i > 0 && pd.bags[i].is_subset_of(pd.bags[i - 1]));
            if (drop) {
                pd.bags.erase(pd.bags.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
    }
    pd.standard = true;
    validate_path_decomposition(g, pd);
    return pd;
}

// ---------------------------------------------------------------------------
// Tree decompositions

struct TreeDecomposition {
    std::vector<VertexSet> bags;
    std::vector<std::pair<int, int>> treeEdges;

    int width() const {
        int w = 0;
        for (const auto& b : bags) w = std::max(w, b.count());
        return w - 1;
    }
};

inline void validate_tree_decomposition(const Graph& g, const TreeDecomposition& td) {
    const int b = static_cast<int>(td.bags.size());
    check(b > 0, "tree decomposition: no bags");
    Graph tree(b);
    for (auto [x, y] : td.treeEdges) tree.add_edge(x, y);
    check(tree.m() == b - 1 && is_connected(tree), "tree decomposition: bag graph is not a tree");

    std::vector<int> cover(g.n(), 0);
    for (const auto& bag : td.bags)
        for (int v = bag.next(0); v != -1; v = bag.next(v + 1)) cover[v]++;
    for (int v = 0; v < g.n(); ++v) check(cover[v] > 0, "tree decomposition: vertex missing");

    for (auto [u, v] : g.edges()) {
        bool covered = false;
        for (const auto& bag : td.bags)
            if (bag.test(u) && bag.test(v)) { covered = true; break; }
        check(covered, "tree decomposition: edge not covered");
    }
    // Connectivity of each vertex's occurrence set.
    for (int v = 0; v < g.n(); ++v) {
        int start = -1;
        for (int i = 0; i < b; ++i)
            if (td.bags[i].test(v)) { start = i; break; }
        std::vector<bool> seen(b, false);
        std::vector<int> stack{start};
        seen[start] = true;
        int reached = 0;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            reached++;
            for (int y : tree.neighbors(x))
                if (!seen[y] && td.bags[y].test(v)) {
                    seen[y] = true;
                    stack.push_back(y);
                }
        }
        check(reached == cover[v], "tree decomposition: vertex occurrences not connected");
    }
}

enum class NodeKind { Leaf, Introduce, Forget, Join };

struct NiceNode {
    NodeKind kind = NodeKind::Leaf;
    int vertex = -1;  // for Introduce / Forget
    VertexSet bag;
    int left = -1, right = -1;  // children
};

struct NiceTreeDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;

    int width() const {
        int w = 0;
        for (const auto& nd : nodes) w = std::max(w, nd.bag.count());
        return w - 1;
    }

    // Children precede parents.
    std::vector<int> postorder() const {
        std::vector<int> order;
        std::vector<std::pair<int, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto [x, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                order.push_back(x);
                continue;
            }
            stack.emplace_back(x, true);
            if (nodes[x].right != -1) stack.emplace_back(nodes[x].right, false);
            if (nodes[x].left != -1) stack.emplace_back(nodes[x].left, false);
        }
        return order;
    }
};

inline void validate_nice_tree_decomposition(const Graph& g, const NiceTreeDecomposition& ntd) {
    check(ntd.root >= 0 && ntd.root < static_cast<int>(ntd.nodes.size()),
          "nice decomposition: bad root");
    check(ntd.nodes[ntd.root].bag.empty(), "nice decomposition: root bag not empty");
    TreeDecomposition td;
    for (const auto& nd : ntd.nodes) td.bags.push_back(nd.bag);
    for (std::size_t i = 0; i < ntd.nodes.size(); ++i) {
        const auto& nd = ntd.nodes[i];
        if (nd.left != -1) td.treeEdges.emplace_back(static_cast<int>(i), nd.left);
        if (nd.right != -1) td.treeEdges.emplace_back(static_cast<int>(i), nd.right);
        switch (nd.kind) {
            case NodeKind::Leaf:
                check(nd.left == -1 && nd.right == -1 && nd.bag.empty(),
                      "nice decomposition: malformed leaf");
                break;
            case NodeKind::Introduce: {
                check(nd.left != -1 && nd.right == -1 && nd.vertex >= 0,
                      "nice decomposition: malformed introduce");
                VertexSet expect = ntd.nodes[nd.left].bag;
                check(!expect.test(nd.vertex), "nice decomposition: introduce of present vertex");
                expect.set(nd.vertex);
                check(expect == nd.bag, "nice decomposition: introduce bag mismatch");
                break;
            }
            case NodeKind::Forget: {
                check(nd.left != -1 && nd.right == -1 && nd.vertex >= 0,
                      "nice decomposition: malformed forget");
                VertexSet expect = ntd.nodes[nd.left].bag;
                check(expect.test(nd.vertex), "nice decomposition: forget of absent vertex");
                expect.reset(nd.vertex);
                check(expect == nd.bag, "nice decomposition: forget bag mismatch");
                break;
            }
            case NodeKind::Join:
                check(nd.left != -1 && nd.right != -1, "nice decomposition: malformed join");
                check(ntd.nodes[nd.left].bag == nd.bag && ntd.nodes[nd.right].bag == nd.bag,
                      "nice decomposition: join bags differ");
                break;
        }
    }
    validate_tree_decomposition(g, td);
}

// Standard transformation; width preserved, O(width * n) nodes per branch.
inline NiceTreeDecomposition to_nice(const Graph& g, const TreeDecomposition& td) {
    validate_tree_decomposition(g, td);
    const int b = static_cast<int>(td.bags.size());
    Graph tree(b);
    for (auto [x, y] : td.treeEdges) tree.add_edge(x, y);
    tree.normalize();

    NiceTreeDecomposition out;
    auto add_node = [&](NodeKind kind, int vertex, VertexSet bag, int left, int right) {
        out.nodes.push_back({kind, vertex, std::move(bag), left, right});
        return static_cast<int>(out.nodes.size()) - 1;
    };

    // Chain of introduces/forgets transforming bag `from` into bag `to`,
    // starting at nice node `below` whose bag is `from`.
    auto morph = [&](int below, const VertexSet& from, const VertexSet& to) {
        int cur = below;
        VertexSet bag = from;
        for (int v = bag.next(0); v != -1; v = bag.next(v + 1)) {
            if (to.test(v)) continue;
            VertexSet nb = bag;
            nb.reset(v);
            cur = add_node(NodeKind::Forget, v, nb, cur, -1);
            bag = nb;
        }
        for (int v = to.next(0); v != -1; v = to.next(v + 1)) {
            if (bag.test(v)) continue;
            VertexSet nb = bag;
            nb.set(v);
            cur = add_node(NodeKind::Introduce, v, nb, cur, -1);
            bag = nb;
        }
        return cur;
    };

    const int n = g.n();
    // Recursive build over the rooted bag tree (root bag 0).
    std::vector<int> parent(b, -2);
    std::vector<int> order;  // preorder
    parent[0] = -1;
    order.push_back(0);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        int x = order[qi];
        for (int y : tree.neighbors(x))
            if (parent[y] == -2) {
                parent[y] = x;
                order.push_back(y);
            }
    }
    std::vector<std::vector<int>> children(b);
    for (int x = 1; x < b; ++x) children[parent[x]].push_back(x);

    // Build bottom-up: nice subtree whose top node has bag td.bags[x].
    std::vector<int> topOf(b, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int x = *it;
        int cur;
        if (children[x].empty()) {
            int leaf = add_node(NodeKind::Leaf, -1, VertexSet(n), -1, -1);
            cur = morph(leaf, VertexSet(n), td.bags[x]);
        } else {
            std::vector<int> branches;
            for (int c : children[x])
                branches.push_back(morph(topOf[c], td.bags[c], td.bags[x]));
            cur = branches[0];
            for (std::size_t i = 1; i < branches.size(); ++i)
                cur = add_node(NodeKind::Join, -1, td.bags[x], cur, branches[i]);
        }
        topOf[x] = cur;
    }
    out.root = morph(topOf[0], td.bags[0], VertexSet(n));
    validate_nice_tree_decomposition(g, out);
    return out;
}

inline NiceTreeDecomposition to_nice(const Graph& g, const PathDecomposition& pd) {
    TreeDecomposition td;
    td.bags = pd.bags;
    for (int i = 0; i + 1 < pd.length(); ++i) td.treeEdges.emplace_back(i, i + 1);
    return to_nice(g, td);
}

// ---------------------------------------------------------------------------
// Elimination trees (tree-depth witnesses)

struct EliminationTree {
    std::vector<int> parent;  // -1 at the root
    int root = -1;
};

// Returns the height (vertices on the longest root-to-leaf path) iff every
// graph edge joins an ancestor/descendant pair.
inline int validate_elimination_tree(const Graph& g, const EliminationTree& et) {
    const int n = g.n();
    check(static_cast<int>(et.parent.size()) == n, "elimination tree: size mismatch");
    check(et.root >= 0 && et.root < n && et.parent[et.root] == -1,
          "elimination tree: bad root");
    std::vector<int> depth(n, -1);
    depth[et.root] = 1;
    // Resolve depths iteratively; a cycle or second root leaves depth unset.
    for (int pass = 0; pass < n; ++pass) {
        bool progress = false;
        for (int v = 0; v < n; ++v) {
            if (depth[v] != -1 || et.parent[v] < 0) continue;
            if (depth[et.parent[v]] != -1) {
                depth[v] = depth[et.parent[v]] + 1;
                progress = true;
            }
        }
        if (!progress) break;
    }
    int height = 0;
    for (int v = 0; v < n; ++v) {
        check(depth[v] != -1, "elimination tree: not a rooted tree over V");
        height = std::max(height, depth[v]);
    }
    for (auto [u, v] : g.edges()) {
        // Ancestor test by walking up from the deeper endpoint.
        int a = u, c = v;
        if (depth[a] > depth[c]) std::swap(a, c);
        int walk = c;
        while (depth[walk] > depth[a]) walk = et.parent[walk];
        check(walk == a, "elimination tree: edge between incomparable vertices");
    }
    return height;
}

// ---------------------------------------------------------------------------
// Clique covers

struct CliqueCover {
    std::vector<VertexSet> parts;
};

inline void validate_clique_cover(const Graph& g, const CliqueCover& cover) {
    VertexSet seen(g.n());
    for (const auto& part : cover.parts) {
        check(!part.empty(), "clique cover: empty part");
        check(!seen.intersects(part), "clique cover: overlapping parts");
        seen |= part;
        auto ids = part.to_vector();
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                check(g.has_edge(ids[i], ids[j]), "clique cover: part is not a clique");
    }
    check(seen == VertexSet::all(g.n()), "clique cover: parts do not cover V");
}

// ---------------------------------------------------------------------------
// Heuristic witness providers (convenience only; never used where a stated
// width matters)

// Min-degree elimination tree decomposition.
inline TreeDecomposition min_degree_tree_decomposition(const Graph& g) {
    const int n = g.n();
    TreeDecomposition td;
    if (n == 0) {
        td.bags.emplace_back(0);
        return td;
    }
    std::vector<VertexSet> work(n, VertexSet(n));
    for (auto [u, v] : g.edges()) {
        work[u].set(v);
        work[v].set(u);
    }
    std::vector<bool> gone(n, false);
    std::vector<int> elimOrder;
    std::vector<VertexSet> elimBag;
    for (int step = 0; step < n; ++step) {
        int best = -1, bestDeg = n + 1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            int d = work[v].count();
            if (d < bestDeg) {
                bestDeg = d;
                best = v;
            }
        }
        VertexSet bag = work[best];
        bag.set(best);
        elimOrder.push_back(best);
        elimBag.push_back(bag);
        auto nb = work[best].to_vector();
        for (int a : nb) {
            work[a].reset(best);
            for (int b : nb)
                if (a != b) work[a].set(b);
        }
        gone[best] = true;
        work[best] = VertexSet(n);
    }
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[elimOrder[i]] = i;
    td.bags = elimBag;
    for (int i = 0; i < n; ++i) {
        // Parent bag: first-eliminated member of the bag other than the pivot.
        int parent = -1;
        for (int v = elimBag[i].next(0); v != -1; v = elimBag[i].next(v + 1))
            if (v != elimOrder[i] && (parent == -1 || pos[v] < pos[parent])) parent = v;
        if (parent != -1) td.treeEdges.emplace_back(i, pos[parent]);
    }
    // Isolated pieces: chain bag trees together (bags may be disjoint when g
    // is disconnected; callers pass connected graphs).
    Graph tree(n);
    for (auto [x, y] : td.treeEdges) tree.add_edge(x, y);
    auto comps = components(tree);
    for (std::size_t i = 1; i < comps.size(); ++i)
        td.treeEdges.emplace_back(comps[0].next(0), comps[i].next(0));
    validate_tree_decomposition(g, td);
    return td;
}

// Boundary path decomposition over the identity order: bag i holds vertex i
// plus earlier vertices with a neighbor at or beyond i.
inline PathDecomposition boundary_path_decomposition(const Graph& g) {
    const int n = g.n();
    PathDecomposition pd;
    check(n > 0, "boundary_path_decomposition: empty graph");
    std::vector<int> lastNeighbor(n);
    for (int v = 0; v < n; ++v) {
        lastNeighbor[v] = v;
        for (int u : g.neighbors(v)) lastNeighbor[v] = std::max(lastNeighbor[v], u);
    }
    for (int i = 0; i < n; ++i) {
        VertexSet bag(n);
        bag.set(i);
        for (int v = 0; v < i; ++v)
            if (lastNeighbor[v] >= i) bag.set(v);
        pd.bags.push_back(bag);
    }
    validate_path_decomposition(g, pd);
    return pd;
}

// DFS spanning tree rooted at `root`; on undirected graphs all non-tree edges
// connect ancestors, so this is always a valid elimination tree.
inline EliminationTree dfs_elimination_tree(const Graph& g, int root = 0) {
    const int n = g.n();
    EliminationTree et;
    et.parent.assign(n, -1);
    et.root = root;
    std::vector<bool> seen(n, false);
    std::vector<int> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : g.neighbors(u)) {
            if (seen[v]) continue;
            seen[v] = true;
            et.parent[v] = u;
            stack.push_back(v);
        }
    }
    for (int v = 0; v < n; ++v)
        check(seen[v], "dfs_elimination_tree: graph disconnected");
    return et;
}

// Greedy clique cover: repeatedly grow a clique from the smallest uncovered id.
inline CliqueCover greedy_clique_cover(const Graph& g) {
    const int n = g.n();
    CliqueCover cover;
    std::vector<bool> used(n, false);
    for (int v = 0; v < n; ++v) {
        if (used[v]) continue;
        VertexSet part(n);
        part.set(v);
        used[v] = true;
        for (int u = v + 1; u < n; ++u) {
            if (used[u]) continue;
            bool ok = true;
            for (int w = part.next(0); w != -1; w = part.next(w + 1))
                if (!g.has_edge(u, w)) { ok = false; break; }
            if (ok) {
                part.set(u);
                used[u] = true;
            }
        }
        cover.parts.push_back(part);
    }
    return cover;
}

// ---------------------------------------------------------------------------
// File formats

// "bags width" header, then one line of vertex ids per bag.
inline PathDecomposition parse_path_decomposition(std::istream& in, int n) {
    int bags = -1, width = -1;
    check(static_cast<bool>(in >> bags >> width), "pd file: malformed header");
    std::string rest;
    std::getline(in, rest);
    PathDecomposition pd;
    for (int i = 0; i < bags; ++i) {
        std::string line;
        check(static_cast<bool>(std::getline(in, line)), "pd file: missing bag line");
        std::istringstream ls(line);
        VertexSet bag(n);
        int v;
        while (ls >> v) {
            check(0 <= v && v < n, "pd file: vertex out of range");
            bag.set(v);
        }
        pd.bags.push_back(bag);
    }
    check(pd.width() == width, "pd file: declared width mismatch");
    return pd;
}

inline std::string serialize_path_decomposition(const PathDecomposition& pd) {
    std::ostringstream out;
    out << pd.length() << " " << pd.width() << "\n";
    for (const auto& bag : pd.bags) {
        auto ids = bag.to_vector();
        for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
        out << "\n";
    }
    return out.str();
}

// PACE-2017 .td layout; vertex ids are 1-based there.
inline TreeDecomposition parse_td(std::istream& in, int n) {
    TreeDecomposition td;
    std::string line;
    int declaredBags = -1;
    std::vector<bool> seenBag;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (tag == "s") {
            std::string kind;
            int bags, maxBag, verts;
            check(static_cast<bool>(ls >> kind >> bags >> maxBag >> verts) && kind == "td",
                  "td file: malformed solution line");
            check(verts == n, "td file: vertex count mismatch");
            declaredBags = bags;
            td.bags.assign(bags, VertexSet(n));
            seenBag.assign(bags, false);
        } else if (tag == "b") {
            int id;
            check(declaredBags > 0 && static_cast<bool>(ls >> id) && 1 <= id && id <= declaredBags,
                  "td file: bad bag id");
            int v;
            while (ls >> v) {
                check(1 <= v && v <= n, "td file: vertex out of range");
                td.bags[id - 1].set(v - 1);
            }
            seenBag[id - 1] = true;
        } else {
            int x = std::stoi(tag), y;
            check(static_cast<bool>(ls >> y), "td file: malformed tree edge");
            check(1 <= x && x <= declaredBags && 1 <= y && y <= declaredBags,
                  "td file: tree edge out of range");
            td.treeEdges.emplace_back(x - 1, y - 1);
        }
    }
    check(declaredBags > 0, "td file: missing solution line");
    return td;
}

// n lines "vertex parent", parent -1 at the root.
inline EliminationTree parse_elimination_tree(std::istream& in, int n) {
    EliminationTree et;
    et.parent.assign(n, -2);
    for (int i = 0; i < n; ++i) {
        int v, p;
        check(static_cast<bool>(in >> v >> p), "et file: missing line");
        check(0 <= v && v < n && -1 <= p && p < n, "et file: id out of range");
        check(et.parent[v] == -2, "et file: duplicate vertex");
        et.parent[v] = p;
        if (p == -1) et.root = v;
    }
    check(et.root != -1, "et file: no root");
    return et;
}

inline std::string serialize_elimination_tree(const EliminationTree& et) {
    std::ostringstream out;
    for (std::size_t v = 0; v < et.parent.size(); ++v)
        out << v << " " << et.parent[v] << "\n";
    return out.str();
}

// One line of vertex ids per clique.
inline CliqueCover parse_clique_cover(std::istream& in, int n) {
    CliqueCover cover;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        VertexSet part(n);
        int v;
        bool any = false;
        while (ls >> v) {
            check(0 <= v && v < n, "cover file: vertex out of range");
            part.set(v);
            any = true;
        }
        if (any) cover.parts.push_back(part);
    }
    return cover;
}

// Single line of vertex ids (separators, modulators, cvd sets, source sets).
inline VertexSet parse_vertex_set(std::istream& in, int n) {
    VertexSet s(n);
    int v;
    while (in >> v) {
        check(0 <= v && v < n, "vertex set file: id out of range");
        s.set(v);
    }
    return s;
}

}  // namespace tb
