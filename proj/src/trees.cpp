#include "verlinde/trees.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace verlinde {

namespace {

// Union-find over vertices 1..r with minimum-element representatives.
struct Blocks {
    std::vector<int> parent;
    explicit Blocks(int r) : parent(r + 1) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[b] = a;  // keep the smaller label as representative
        return true;
    }
};

// Path between a and b in the tree; returns edge positions along the path.
std::vector<int> tree_path_edges(const OrderedTree& t, int a, int b) {
    const int r = t.r;
    std::vector<std::vector<std::pair<int, int>>> adj(r + 1);  // vertex -> (neighbor, edge idx)
    for (std::size_t e = 0; e < t.roots.size(); ++e) {
        adj[t.roots[e].i].push_back({t.roots[e].j, static_cast<int>(e)});
        adj[t.roots[e].j].push_back({t.roots[e].i, static_cast<int>(e)});
    }
    std::vector<int> prev_vertex(r + 1, 0), prev_edge(r + 1, -1);
    std::vector<int> stack{a};
    prev_vertex[a] = a;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == b) break;
        for (auto [w, e] : adj[v])
            if (prev_vertex[w] == 0) {
                prev_vertex[w] = v;
                prev_edge[w] = e;
                stack.push_back(w);
            }
    }
    std::vector<int> path;
    for (int v = b; v != a; v = prev_vertex[v]) path.push_back(prev_edge[v]);
    return path;
}

// True iff the min-B-edge-index map over B2's edges is a bijection,
// i.e. iRes_{B1}(omega_{B2}) would be nonzero.
bool residue_pair_nonzero(const OrderedTree& B1, const OrderedTree& B2) {
    const int n = B1.r - 1;
    std::vector<bool> seen(n, false);
    for (int m = 0; m < n; ++m) {
        std::vector<int> path = tree_path_edges(B1, B2.roots[m].i, B2.roots[m].j);
        int idx = *std::min_element(path.begin(), path.end());
        if (seen[idx]) return false;
        seen[idx] = true;
    }
    return true;
}

long factorial(int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

bool is_spanning_tree(const OrderedTree& t) {
    if (t.r < 2 || static_cast<int>(t.roots.size()) != t.r - 1) return false;
    Blocks b(t.r);
    for (const Root& e : t.roots) {
        if (e.i < 1 || e.j < 1 || e.i > t.r || e.j > t.r || e.i == e.j) return false;
        if (!b.unite(e.i, e.j)) return false;
    }
    return true;
}

PartitionSequence partition_sequence(const OrderedTree& t, const std::vector<int>& ordering) {
    if (!is_spanning_tree(t)) throw std::invalid_argument("partition_sequence: not a tree");
    const int r = t.r;
    if (static_cast<int>(ordering.size()) != r - 1)
        throw std::invalid_argument("partition_sequence: bad ordering");
    Blocks b(r);
    PartitionSequence seq;
    auto snapshot = [&]() {
        std::vector<int> labels(r);
        for (int v = 1; v <= r; ++v) labels[v - 1] = b.find(v);
        seq.partitions.push_back(std::move(labels));
    };
    snapshot();
    for (int pos : ordering) {
        const Root& e = t.roots[pos];
        b.unite(e.i, e.j);
        snapshot();
    }
    return seq;
}

bool is_diagonal(const std::vector<OrderedTree>& candidate) {
    if (candidate.empty()) return false;
    const int r = candidate.front().r;
    for (const OrderedTree& t : candidate)
        if (t.r != r || !is_spanning_tree(t)) return false;
    if (static_cast<long>(candidate.size()) != factorial(r - 1)) return false;
    for (std::size_t a = 0; a < candidate.size(); ++a)
        for (std::size_t b = 0; b < candidate.size(); ++b)
            if (a != b && residue_pair_nonzero(candidate[a], candidate[b])) return false;
    return true;
}

std::vector<OrderedTree> canonical_diagonal(int r) {
    if (r < 2) throw std::invalid_argument("canonical_diagonal: rank must be at least 2");
    std::vector<int> rest(r - 1);
    std::iota(rest.begin(), rest.end(), 2);
    std::vector<OrderedTree> out;
    do {
        // Path 1 - rest[0] - ... - rest[r-2]; edge j counts from the far end.
        std::vector<int> path{1};
        path.insert(path.end(), rest.begin(), rest.end());
        std::vector<Root> edges;
        for (int j = 1; j <= r - 1; ++j) edges.emplace_back(path[r - 1 - j], path[r - j]);
        out.emplace_back(r, std::move(edges));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

namespace {

// All ordered signed spanning trees of K_r in lexicographic edge order.
void gen_trees(int r, std::vector<Root>& acc, std::vector<OrderedTree>& out) {
    if (static_cast<int>(acc.size()) == r - 1) {
        OrderedTree t(r, acc);
        if (is_spanning_tree(t)) out.push_back(std::move(t));
        return;
    }
    for (int i = 1; i <= r; ++i)
        for (int j = 1; j <= r; ++j) {
            if (i == j) continue;
            bool dup = false;
            for (const Root& e : acc)
                if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) dup = true;
            if (dup) continue;
            acc.emplace_back(i, j);
            // Prune: the partial edge set must stay acyclic.
            Blocks b(r);
            bool ok = true;
            for (const Root& e : acc)
                if (!b.unite(e.i, e.j)) {
                    ok = false;
                    break;
                }
            if (ok) gen_trees(r, acc, out);
            acc.pop_back();
        }
}

bool extend_diagonal(const std::vector<OrderedTree>& pool, std::size_t from, long need,
                     std::vector<OrderedTree>& chosen) {
    if (need == 0) return true;
    for (std::size_t p = from; p + need <= pool.size() + 1 && p < pool.size(); ++p) {
        bool ok = true;
        for (const OrderedTree& c : chosen)
            if (residue_pair_nonzero(c, pool[p]) || residue_pair_nonzero(pool[p], c)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        chosen.push_back(pool[p]);
        if (extend_diagonal(pool, p + 1, need - 1, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace

std::vector<OrderedTree> enumerate_diagonal(int r) {
    if (r < 2 || r > 5) throw std::invalid_argument("enumerate_diagonal: rank out of range [2,5]");
    std::vector<OrderedTree> pool;
    std::vector<Root> acc;
    gen_trees(r, acc, pool);
    std::vector<OrderedTree> chosen;
    if (!extend_diagonal(pool, 0, factorial(r - 1), chosen))
        throw std::runtime_error("enumerate_diagonal: search exhausted");
    return chosen;
}

std::vector<WallTree> restrict_to_wall(const std::vector<OrderedTree>& D, const WallSpec& wall) {
    std::vector<WallTree> out;
    for (const OrderedTree& t : D) {
        std::vector<bool> in_prime(t.r + 1, false);
        for (int v : wall.pi_prime) in_prime[v] = true;
        int link = -1, crossings = 0;
        for (std::size_t e = 0; e < t.roots.size(); ++e)
            if (in_prime[t.roots[e].i] != in_prime[t.roots[e].j]) {
                ++crossings;
                link = static_cast<int>(e);
            }
        if (crossings == 1) out.push_back(WallTree{t, link});
    }
    return out;
}

}  // namespace verlinde
