#ifndef DYNREACH_REACH_TREE_HPP
#define DYNREACH_REACH_TREE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ranges>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynreach/types.hpp"

namespace dynreach {

// Vertices that left a tree during one deletion batch, ascending.
struct DeltaReport {
    std::vector<VertexId> removed;

    [[nodiscard]] bool empty() const noexcept { return removed.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return removed.size(); }
};

// Decremental reachability tree rooted at one vertex.
//
// The tree is built once over a fixed edge view and afterwards only loses
// edges. An In tree is an Out tree of the reversed view: the caller passes
// reversed edges both to build() and to delete_edges(), and `direction` is
// only a label.
//
// Internally the reachable region is kept as its SCC condensation. Every
// component carries
//   - a forward and a backward spanning arborescence around a
//     representative vertex, certifying strong connectivity, and
//   - in_count: live edges entering it from other in-tree components.
// Since the condensation is a DAG, a non-root component is reachable iff
// in_count > 0. Deleting a non-certificate edge inside a component is O(1);
// deleting a certificate edge re-attaches the orphaned subtree locally and
// only the vertices that cannot be re-attached are re-condensed. Components
// whose in_count drops to zero are removed and their out-edges cascade.
class ReachTree {
    using Local = std::uint32_t;
    static constexpr Local kNone = std::numeric_limits<Local>::max();

public:
    template <std::ranges::input_range View>
        requires std::convertible_to<std::ranges::range_reference_t<View>, Edge>
    static ReachTree build(View&& view, std::size_t n, VertexId root, Direction direction,
                           Version version = 0) {
        require_vertex(root, n, "ReachTree::build root");
        ReachTree t;
        t.n_ = n;
        t.root_ = root;
        t.direction_ = direction;
        t.version_ = version;
        std::vector<Edge> edges;
        for (Edge e : view) {
            require_vertex(e.src, n, "ReachTree::build edge");
            require_vertex(e.dst, n, "ReachTree::build edge");
            edges.push_back(e);
        }
        t.initialize(edges);
        return t;
    }

    // Removes `killed` (oriented like the build view) and reports the
    // vertices that stopped being reachable. Edges the tree does not hold,
    // or already dropped, are skipped.
    DeltaReport delete_edges(std::span<const Edge> killed);

    [[nodiscard]] bool reaches(VertexId v) const noexcept {
        if (v < 1 || v > n_) {
            return false;
        }
        const Local x = local_[v];
        return x != kNone && in_tree_[x] != 0;
    }

    [[nodiscard]] std::vector<VertexId> members() const {
        std::vector<VertexId> out;
        out.reserve(size_);
        for (Local x = 0; x < global_.size(); ++x) {
            if (in_tree_[x]) {
                out.push_back(global_[x]);
            }
        }
        return out;
    }

    // Live condensation nodes, each sorted, ordered by smallest member.
    [[nodiscard]] std::vector<std::vector<VertexId>> scc_nodes() const {
        std::vector<std::vector<VertexId>> out;
        for (Local c = 0; c < comps_.size(); ++c) {
            if (!comps_[c].alive) {
                continue;
            }
            std::vector<VertexId> m;
            for (Local x = comps_[c].head; x != kNone; x = next_[x]) {
                m.push_back(global_[x]);
            }
            std::sort(m.begin(), m.end());
            out.push_back(std::move(m));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] VertexId root() const noexcept { return root_; }
    [[nodiscard]] Direction direction() const noexcept { return direction_; }
    [[nodiscard]] Version version() const noexcept { return version_; }
    [[nodiscard]] std::uint64_t work() const noexcept { return work_; }

    // Recomputes every internal invariant from scratch; throws
    // InvariantViolation on the first inconsistency. Test support only.
    void verify_internal_state() const;

private:
    struct TreeEdge {
        Local src;
        Local dst;
        bool alive;
    };

    struct Component {
        Local rep = kNone;
        Local head = kNone;
        std::uint32_t size = 0;
        std::uint64_t in_count = 0;
        bool alive = true;
    };

    ReachTree() = default;

    void initialize(const std::vector<Edge>& view_edges);
    std::vector<std::vector<Local>> condense(std::span<const Local> scope);
    Local make_component(std::span<const Local> verts);
    void grow_certificates(Local c);
    void unlink(Local x);
    void repair(Local c, std::span<const Local> f_roots, std::span<const Local> b_roots,
                std::vector<Local>& zero);
    void cascade(std::vector<Local>& zero, std::vector<VertexId>& removed);

    [[nodiscard]] std::span<const std::uint32_t> out_edges(Local x) const {
        return {out_ids_.data() + out_begin_[x], out_ids_.data() + out_begin_[x + 1]};
    }
    [[nodiscard]] std::span<const std::uint32_t> in_edges(Local x) const {
        return {in_ids_.data() + in_begin_[x], in_ids_.data() + in_begin_[x + 1]};
    }

    std::uint32_t next_stamp() {
        if (++stamp_ == 0) {
            std::fill(mark_.begin(), mark_.end(), 0U);
            std::fill(mark2_.begin(), mark2_.end(), 0U);
            stamp_ = 1;
        }
        return stamp_;
    }

    std::size_t n_ = 0;
    VertexId root_ = 0;
    Direction direction_ = Direction::Out;
    Version version_ = 0;
    std::uint64_t work_ = 0;
    std::size_t size_ = 0;

    // Vertex ids <-> dense local ids, assigned in ascending vertex order.
    std::vector<Local> local_;
    std::vector<VertexId> global_;
    std::vector<char> in_tree_;

    std::vector<TreeEdge> edges_;
    std::unordered_map<Edge, std::uint32_t> edge_index_;
    std::vector<std::uint32_t> out_begin_, out_ids_, in_begin_, in_ids_;

    std::vector<Component> comps_;
    std::vector<Local> comp_;
    std::vector<Local> next_, prev_;

    // Certificate arborescences: parent edge id per vertex (kNone at the
    // representative) plus lazily cleaned child lists.
    std::vector<std::uint32_t> fparent_, bparent_;
    std::vector<std::vector<Local>> fchildren_, bchildren_;

    std::vector<std::uint32_t> mark_, mark2_;
    std::uint32_t stamp_ = 0;
};

inline void ReachTree::initialize(const std::vector<Edge>& view_edges) {
    // Plain BFS over the full view to find the reachable region.
    std::vector<std::uint32_t> deg(n_ + 2, 0);
    for (const Edge& e : view_edges) {
        ++deg[e.src + 1];
    }
    for (std::size_t v = 1; v <= n_ + 1; ++v) {
        deg[v] += deg[v - 1];
    }
    std::vector<VertexId> adj(view_edges.size());
    {
        std::vector<std::uint32_t> pos(deg.begin(), deg.end() - 1);
        for (const Edge& e : view_edges) {
            adj[pos[e.src]++] = e.dst;
        }
    }
    std::vector<char> seen(n_ + 1, 0);
    std::vector<VertexId> queue{root_};
    seen[root_] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId v = queue[head];
        ++work_;
        for (std::uint32_t i = deg[v]; i < deg[v + 1]; ++i) {
            ++work_;
            if (!seen[adj[i]]) {
                seen[adj[i]] = 1;
                queue.push_back(adj[i]);
            }
        }
    }

    local_.assign(n_ + 1, kNone);
    for (VertexId v = 1; v <= n_; ++v) {
        if (seen[v]) {
            local_[v] = static_cast<Local>(global_.size());
            global_.push_back(v);
        }
    }
    const std::size_t k = global_.size();
    size_ = k;
    in_tree_.assign(k, 1);

    for (const Edge& e : view_edges) {
        if (!seen[e.src] || !seen[e.dst] || edge_index_.contains(e)) {
            continue;
        }
        edge_index_.emplace(e, static_cast<std::uint32_t>(edges_.size()));
        edges_.push_back({local_[e.src], local_[e.dst], true});
    }
    out_begin_.assign(k + 1, 0);
    in_begin_.assign(k + 1, 0);
    for (const TreeEdge& e : edges_) {
        ++out_begin_[e.src + 1];
        ++in_begin_[e.dst + 1];
    }
    for (std::size_t x = 0; x < k; ++x) {
        out_begin_[x + 1] += out_begin_[x];
        in_begin_[x + 1] += in_begin_[x];
    }
    out_ids_.resize(edges_.size());
    in_ids_.resize(edges_.size());
    {
        std::vector<std::uint32_t> op(out_begin_.begin(), out_begin_.end() - 1);
        std::vector<std::uint32_t> ip(in_begin_.begin(), in_begin_.end() - 1);
        for (std::uint32_t id = 0; id < edges_.size(); ++id) {
            out_ids_[op[edges_[id].src]++] = id;
            in_ids_[ip[edges_[id].dst]++] = id;
        }
    }

    comp_.assign(k, kNone);
    next_.assign(k, kNone);
    prev_.assign(k, kNone);
    fparent_.assign(k, kNone);
    bparent_.assign(k, kNone);
    fchildren_.assign(k, {});
    bchildren_.assign(k, {});
    mark_.assign(k, 0);
    mark2_.assign(k, 0);

    std::vector<Local> all(k);
    for (Local x = 0; x < k; ++x) {
        all[x] = x;
    }
    for (const auto& scc : condense(all)) {
        make_component(scc);
    }
    for (const TreeEdge& e : edges_) {
        if (comp_[e.src] != comp_[e.dst]) {
            ++comps_[comp_[e.dst]].in_count;
        }
    }
}

// Iterative Tarjan restricted to `scope` and alive edges inside it.
inline std::vector<std::vector<ReachTree::Local>> ReachTree::condense(
    std::span<const Local> scope) {
    const std::uint32_t in_scope = next_stamp();
    for (Local x : scope) {
        mark_[x] = in_scope;
    }
    std::unordered_map<Local, std::pair<std::uint32_t, std::uint32_t>> idx;  // index, lowlink
    idx.reserve(scope.size() * 2);
    std::vector<Local> stack;
    std::vector<char> on_stack(scope.size(), 0);
    std::unordered_map<Local, std::uint32_t> slot;
    slot.reserve(scope.size() * 2);
    for (std::uint32_t i = 0; i < scope.size(); ++i) {
        slot.emplace(scope[i], i);
    }
    std::vector<std::vector<Local>> result;
    std::uint32_t counter = 0;

    struct Frame {
        Local v;
        std::uint32_t next;
    };
    std::vector<Frame> call;
    for (Local start : scope) {
        if (idx.contains(start)) {
            continue;
        }
        call.push_back({start, out_begin_[start]});
        idx[start] = {counter, counter};
        ++counter;
        stack.push_back(start);
        on_stack[slot[start]] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            const Local v = f.v;
            if (f.next < out_begin_[v + 1]) {
                const TreeEdge& e = edges_[out_ids_[f.next++]];
                ++work_;
                if (!e.alive || mark_[e.dst] != in_scope) {
                    continue;
                }
                const Local w = e.dst;
                auto it = idx.find(w);
                if (it == idx.end()) {
                    idx[w] = {counter, counter};
                    ++counter;
                    stack.push_back(w);
                    on_stack[slot[w]] = 1;
                    call.push_back({w, out_begin_[w]});
                } else if (on_stack[slot[w]]) {
                    auto& lv = idx[v].second;
                    lv = std::min(lv, it->second.first);
                }
                continue;
            }
            const auto [vi, vl] = idx[v];
            call.pop_back();
            if (!call.empty()) {
                auto& pl = idx[call.back().v].second;
                pl = std::min(pl, vl);
            }
            if (vi == vl) {
                std::vector<Local> scc;
                Local w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[slot[w]] = 0;
                    scc.push_back(w);
                } while (w != v);
                std::sort(scc.begin(), scc.end());
                result.push_back(std::move(scc));
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

inline ReachTree::Local ReachTree::make_component(std::span<const Local> verts) {
    const Local c = static_cast<Local>(comps_.size());
    Component comp;
    comp.size = static_cast<std::uint32_t>(verts.size());
    comp.rep = verts.front();
    const Local root_local = local_[root_];
    for (Local x : verts) {
        if (x == root_local) {
            comp.rep = x;
        }
    }
    comps_.push_back(comp);
    Local prev = kNone;
    for (Local x : verts) {
        comp_[x] = c;
        prev_[x] = prev;
        next_[x] = kNone;
        if (prev == kNone) {
            comps_[c].head = x;
        } else {
            next_[prev] = x;
        }
        prev = x;
    }
    grow_certificates(c);
    return c;
}

// Fresh forward/backward BFS arborescences inside component c.
inline void ReachTree::grow_certificates(Local c) {
    const Local rep = comps_[c].rep;
    for (Local x = comps_[c].head; x != kNone; x = next_[x]) {
        fparent_[x] = kNone;
        bparent_[x] = kNone;
        fchildren_[x].clear();
        bchildren_[x].clear();
    }
    std::vector<Local> queue;
    auto grow = [&](bool forward) {
        const std::uint32_t seen = next_stamp();
        mark_[rep] = seen;
        queue.assign(1, rep);
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const Local x = queue[h];
            ++work_;
            for (std::uint32_t id : forward ? out_edges(x) : in_edges(x)) {
                ++work_;
                const TreeEdge& e = edges_[id];
                const Local y = forward ? e.dst : e.src;
                if (!e.alive || comp_[y] != c || mark_[y] == seen) {
                    continue;
                }
                mark_[y] = seen;
                if (forward) {
                    fparent_[y] = id;
                    fchildren_[x].push_back(y);
                } else {
                    bparent_[y] = id;
                    bchildren_[x].push_back(y);
                }
                queue.push_back(y);
            }
        }
        if (queue.size() != comps_[c].size) {
            throw InvariantViolation("ReachTree: component is not strongly connected");
        }
    };
    grow(true);
    grow(false);
}

inline void ReachTree::unlink(Local x) {
    Component& comp = comps_[comp_[x]];
    if (prev_[x] == kNone) {
        comp.head = next_[x];
    } else {
        next_[prev_[x]] = next_[x];
    }
    if (next_[x] != kNone) {
        prev_[next_[x]] = prev_[x];
    }
    prev_[x] = next_[x] = kNone;
    --comp.size;
}

// Re-attaches the certificate subtrees hanging below dead parent edges
// inside component c. Vertices that cannot be re-attached either lost
// their path from the representative or their path to it; they are split
// off and re-condensed. All other members keep valid certificates.
inline void ReachTree::repair(Local c, std::span<const Local> f_roots,
                              std::span<const Local> b_roots, std::vector<Local>& zero) {
    // forward == true works on the out-arborescence, false on the in-one.
    auto fix = [&](bool forward, std::span<const Local> roots) {
        auto& parent = forward ? fparent_ : bparent_;
        auto& children = forward ? fchildren_ : bchildren_;
        // The endpoint of a certificate edge that is the parent side.
        auto parent_of = [&](std::uint32_t id) {
            return forward ? edges_[id].src : edges_[id].dst;
        };
        const std::uint32_t orphan = next_stamp();
        std::vector<Local> orphans;
        for (Local r : roots) {
            if (mark_[r] == orphan || comp_[r] != c) {
                continue;
            }
            mark_[r] = orphan;
            orphans.push_back(r);
        }
        for (std::size_t h = 0; h < orphans.size(); ++h) {
            const Local x = orphans[h];
            ++work_;
            auto& kids = children[x];
            std::size_t keep = 0;
            for (Local y : kids) {
                ++work_;
                if (comp_[y] != c || parent[y] == kNone || parent_of(parent[y]) != x) {
                    continue;  // stale entry
                }
                kids[keep++] = y;
                if (mark_[y] != orphan) {
                    mark_[y] = orphan;
                    orphans.push_back(y);
                }
            }
            kids.resize(keep);
        }
        for (Local x : orphans) {
            parent[x] = kNone;
        }

        // mark2_: orphan re-attached in this pass.
        const std::uint32_t attached = orphan;
        auto is_attached = [&](Local y) {
            return comp_[y] == c && (mark_[y] != orphan || mark2_[y] == attached);
        };
        std::vector<Local> queue;
        auto attach = [&](Local x, std::uint32_t id) {
            parent[x] = id;
            children[parent_of(id)].push_back(x);
            mark2_[x] = attached;
            queue.push_back(x);
        };
        for (Local x : orphans) {
            if (mark2_[x] == attached) {
                continue;
            }
            for (std::uint32_t id : forward ? in_edges(x) : out_edges(x)) {
                ++work_;
                const TreeEdge& e = edges_[id];
                if (e.alive && is_attached(forward ? e.src : e.dst)) {
                    attach(x, id);
                    break;
                }
            }
            // Spread along the opposite direction from everything attached so far.
            for (std::size_t h = 0; h < queue.size(); ++h) {
                const Local y = queue[h];
                for (std::uint32_t id : forward ? out_edges(y) : in_edges(y)) {
                    ++work_;
                    const TreeEdge& e = edges_[id];
                    const Local z = forward ? e.dst : e.src;
                    if (e.alive && comp_[z] == c && mark_[z] == orphan && mark2_[z] != attached) {
                        attach(z, id);
                    }
                }
            }
            queue.clear();
        }
        std::vector<Local> lost;
        for (Local x : orphans) {
            if (mark2_[x] != attached) {
                lost.push_back(x);
            }
        }
        return lost;
    };

    std::vector<Local> split = fix(true, f_roots);
    {
        std::vector<Local> lost_b = fix(false, b_roots);
        split.insert(split.end(), lost_b.begin(), lost_b.end());
    }
    if (split.empty()) {
        return;
    }
    std::sort(split.begin(), split.end());
    split.erase(std::unique(split.begin(), split.end()), split.end());

    // Edges from outside c into the split-off vertices no longer enter c.
    for (Local x : split) {
        for (std::uint32_t id : in_edges(x)) {
            ++work_;
            const TreeEdge& e = edges_[id];
            if (e.alive && in_tree_[e.src] && comp_[e.src] != c) {
                --comps_[c].in_count;
            }
        }
    }
    for (Local x : split) {
        unlink(x);
    }
    std::vector<Local> pieces;
    for (const auto& scc : condense(split)) {
        pieces.push_back(make_component(scc));
    }
    for (Local x : split) {
        for (std::uint32_t id : in_edges(x)) {
            ++work_;
            const TreeEdge& e = edges_[id];
            if (e.alive && in_tree_[e.src] && comp_[e.src] != comp_[x]) {
                ++comps_[comp_[x]].in_count;
            }
        }
        for (std::uint32_t id : out_edges(x)) {
            ++work_;
            const TreeEdge& e = edges_[id];
            if (e.alive && in_tree_[e.dst] && comp_[e.dst] == c) {
                ++comps_[c].in_count;
            }
        }
    }
    zero.push_back(c);
    zero.insert(zero.end(), pieces.begin(), pieces.end());
}

inline void ReachTree::cascade(std::vector<Local>& zero, std::vector<VertexId>& removed) {
    const Local root_comp = comp_[local_[root_]];
    while (!zero.empty()) {
        const Local c = zero.back();
        zero.pop_back();
        if (c == root_comp || !comps_[c].alive || comps_[c].in_count != 0) {
            continue;
        }
        comps_[c].alive = false;
        for (Local x = comps_[c].head; x != kNone; x = next_[x]) {
            ++work_;
            in_tree_[x] = 0;
            --size_;
            removed.push_back(global_[x]);
        }
        for (Local x = comps_[c].head; x != kNone; x = next_[x]) {
            for (std::uint32_t id : out_edges(x)) {
                ++work_;
                const TreeEdge& e = edges_[id];
                if (!e.alive || !in_tree_[e.dst]) {
                    continue;
                }
                const Local d = comp_[e.dst];
                if (--comps_[d].in_count == 0) {
                    zero.push_back(d);
                }
            }
        }
    }
}

inline DeltaReport ReachTree::delete_edges(std::span<const Edge> killed) {
    std::vector<Local> zero;
    std::vector<Local> dirty;
    // Orphan roots per dirty component, keyed by component id.
    std::unordered_map<Local, std::pair<std::vector<Local>, std::vector<Local>>> roots;

    for (const Edge& k : killed) {
        ++work_;
        auto it = edge_index_.find(k);
        if (it == edge_index_.end()) {
            continue;
        }
        const std::uint32_t id = it->second;
        TreeEdge& e = edges_[id];
        if (!e.alive) {
            continue;
        }
        e.alive = false;
        if (!in_tree_[e.src] || !in_tree_[e.dst]) {
            continue;
        }
        const Local cs = comp_[e.src];
        const Local cd = comp_[e.dst];
        if (cs != cd) {
            if (--comps_[cd].in_count == 0) {
                zero.push_back(cd);
            }
            continue;
        }
        auto [slot, fresh] = roots.try_emplace(cs);
        if (fresh) {
            dirty.push_back(cs);
        }
        if (fparent_[e.dst] == id) {
            slot->second.first.push_back(e.dst);
        }
        if (bparent_[e.src] == id) {
            slot->second.second.push_back(e.src);
        }
    }
    for (Local c : dirty) {
        const auto& [f_roots, b_roots] = roots[c];
        if (!f_roots.empty() || !b_roots.empty()) {
            repair(c, f_roots, b_roots, zero);
        }
    }

    DeltaReport report;
    cascade(zero, report.removed);
    std::sort(report.removed.begin(), report.removed.end());
    return report;
}

inline void ReachTree::verify_internal_state() const {
    auto fail = [](const std::string& what) { throw InvariantViolation("ReachTree: " + what); };
    const std::size_t k = global_.size();
    std::size_t live_members = 0;
    std::vector<std::uint64_t> expected_in(comps_.size(), 0);
    std::vector<std::uint32_t> seen_size(comps_.size(), 0);
    for (Local c = 0; c < comps_.size(); ++c) {
        if (!comps_[c].alive) {
            continue;
        }
        for (Local x = comps_[c].head; x != kNone; x = next_[x]) {
            if (comp_[x] != c) {
                fail("linked member has a different component");
            }
            if (!in_tree_[x]) {
                fail("live component holds a removed vertex");
            }
            ++seen_size[c];
        }
        if (seen_size[c] != comps_[c].size || comps_[c].size == 0) {
            fail("component size mismatch");
        }
        live_members += comps_[c].size;
    }
    if (live_members != size_) {
        fail("member count mismatch");
    }
    for (Local x = 0; x < k; ++x) {
        if (in_tree_[x] && !comps_[comp_[x]].alive) {
            fail("member in a dead component");
        }
    }
    if (!in_tree_[local_[root_]]) {
        fail("root left the tree");
    }
    for (const TreeEdge& e : edges_) {
        if (e.alive && in_tree_[e.src] && !in_tree_[e.dst]) {
            fail("live edge leaves the tree");
        }
        if (e.alive && in_tree_[e.src] && in_tree_[e.dst] && comp_[e.src] != comp_[e.dst]) {
            ++expected_in[comp_[e.dst]];
        }
    }
    const Local root_comp = comp_[local_[root_]];
    for (Local c = 0; c < comps_.size(); ++c) {
        if (!comps_[c].alive) {
            continue;
        }
        if (comps_[c].in_count != expected_in[c]) {
            fail("in_count mismatch");
        }
        if (c != root_comp && expected_in[c] == 0) {
            fail("unreachable component kept");
        }
        // Both certificates must reach the representative over live edges.
        for (Local x = comps_[c].head; x != kNone; x = next_[x]) {
            for (int pass = 0; pass < 2; ++pass) {
                const auto& parent = pass == 0 ? fparent_ : bparent_;
                Local y = x;
                std::size_t steps = 0;
                while (y != comps_[c].rep) {
                    const std::uint32_t id = parent[y];
                    if (id == kNone || !edges_[id].alive || ++steps > k) {
                        fail("broken certificate");
                    }
                    y = pass == 0 ? edges_[id].src : edges_[id].dst;
                    if (comp_[y] != c) {
                        fail("certificate leaves its component");
                    }
                }
            }
        }
    }
}

}  // namespace dynreach

#endif  // DYNREACH_REACH_TREE_HPP
