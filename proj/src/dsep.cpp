#include "dbnci/dsep.hpp"

#include <deque>

#include "dbnci/errors.hpp"

namespace dbnci {

namespace {

void check_nodes(const BNTemplate& bn, const std::vector<int>& nodes, const char* which) {
    for (int v : nodes)
        if (v < 0 || v >= static_cast<int>(bn.nodes.size()))
            throw ValidationError(std::string("d-separation query: unknown node in ") + which);
}

}  // namespace

bool d_separated(const BNTemplate& bn, const DSepQuery& query) {
    const int n = static_cast<int>(bn.nodes.size());
    check_nodes(bn, query.x, "X");
    check_nodes(bn, query.y, "Y");
    check_nodes(bn, query.z, "Z");

    std::vector<char> in_z(n, 0);
    for (int v : query.z) in_z[v] = 1;
    std::vector<char> in_y(n, 0);
    for (int v : query.y) in_y[v] = 1;
    for (int v : query.x)
        if (in_y[v] || in_z[v]) throw ValidationError("d-separation query sets must be disjoint");
    for (int v : query.y)
        if (in_z[v]) throw ValidationError("d-separation query sets must be disjoint");

    // anc_z[v]: v has a descendant in Z (v itself included), i.e. a collider
    // at v is opened by the conditioning set.
    std::vector<char> anc_z(n, 0);
    {
        std::deque<int> work(query.z.begin(), query.z.end());
        for (int v : query.z) anc_z[v] = 1;
        while (!work.empty()) {
            int v = work.front();
            work.pop_front();
            for (int p : bn.parents[v])
                if (!anc_z[p]) {
                    anc_z[p] = 1;
                    work.push_back(p);
                }
        }
    }

    // State (v, dir): the walk arrived at v moving up (from a child, against
    // the arrow) or down (from a parent, along the arrow). From an up-arrival
    // v is a non-collider however the walk leaves, so v must avoid Z; from a
    // down-arrival, leaving downward keeps v a non-collider while turning
    // upward makes it a collider needing anc_z.
    enum { kUp = 0, kDown = 1 };
    std::vector<char> visited(static_cast<std::size_t>(n) * 2, 0);
    std::deque<std::pair<int, int>> work;
    auto push = [&](int v, int dir) {
        if (!visited[static_cast<std::size_t>(v) * 2 + dir]) {
            visited[static_cast<std::size_t>(v) * 2 + dir] = 1;
            work.emplace_back(v, dir);
        }
    };
    for (int v : query.x) push(v, kUp);

    while (!work.empty()) {
        auto [v, dir] = work.front();
        work.pop_front();
        if (in_y[v]) return false;
        if (dir == kUp) {
            if (in_z[v]) continue;
            for (int p : bn.parents[v]) push(p, kUp);
            for (int c : bn.children[v]) push(c, kDown);
        } else {
            if (!in_z[v])
                for (int c : bn.children[v]) push(c, kDown);
            if (anc_z[v])
                for (int p : bn.parents[v]) push(p, kUp);
        }
    }
    return true;
}

bool has_collision_free_path(const BNTemplate& bn, int a, int b,
                             const std::vector<int>& forbidden) {
    const int n = static_cast<int>(bn.nodes.size());
    check_nodes(bn, {a, b}, "endpoints");
    check_nodes(bn, forbidden, "forbidden set");
    if (a == b) throw ValidationError("collision-free path query needs distinct endpoints");

    std::vector<char> blocked(n, 0);
    for (int v : forbidden) blocked[v] = 1;
    if (blocked[a] || blocked[b])
        throw ValidationError("collision-free path endpoints may not be forbidden");

    // Ancestors of a along non-forbidden interiors, then forward closure; the
    // path a <-* s ->* b has only interior nodes subject to the forbidden set.
    std::vector<char> reach(n, 0);
    std::deque<int> work;
    reach[a] = 1;
    work.push_back(a);
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        for (int p : bn.parents[v])
            if (!reach[p] && !blocked[p]) {
                reach[p] = 1;
                work.push_back(p);
            }
    }
    std::vector<char> fwd = reach;
    for (int v = 0; v < n; ++v)
        if (fwd[v]) work.push_back(v);
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        if (v == b) return true;
        for (int c : bn.children[v])
            if (!fwd[c] && !blocked[c]) {
                fwd[c] = 1;
                work.push_back(c);
            }
    }
    return fwd[b];
}

}  // namespace dbnci
