#ifndef DYNREACH_DYNAMIC_ORACLE_HPP
#define DYNREACH_DYNAMIC_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dynreach/graph_store.hpp"
#include "dynreach/reach_tree.hpp"
#include "dynreach/types.hpp"
#include "dynreach/witness_matrix.hpp"

namespace dynreach {

// One insertion center: the In/Out trees built on the version its latest
// extended insert created.
struct CenterRecord {
    VertexId vertex;
    Version version;
    ReachTree in_tree;
    ReachTree out_tree;
    // |In| * |Out| when the trees were built; caps the deletion-driven
    // decrements this record can ever cause.
    std::uint64_t build_pairs = 0;
    std::uint64_t lifetime_decrements = 0;
};

struct CenterCounters {
    VertexId vertex;
    Version version;
    std::uint64_t build_pairs;
    std::uint64_t lifetime_decrements;

    friend bool operator==(const CenterCounters&, const CenterCounters&) = default;
};

struct CounterReport {
    std::uint64_t ins = 0;
    std::uint64_t del = 0;
    std::uint64_t timeline = 0;
    std::uint64_t tcm_cell_updates = 0;
    std::uint64_t tree_work = 0;
    std::vector<CenterCounters> centers;

    friend bool operator==(const CounterReport&, const CounterReport&) = default;
};

// Fully dynamic reachability: extended inserts centered at a vertex,
// arbitrary edge-set deletions, constant-time queries from the witness
// matrix.
class DynamicReachability {
public:
    // Called once per tree per deletion batch that touched it.
    using DeltaObserver =
        std::function<void(VertexId center, Direction direction, const DeltaReport& delta)>;

    explicit DynamicReachability(std::size_t n) : store_(n), tcm_(n), centers_(n + 1) {}

    [[nodiscard]] std::size_t vertex_count() const noexcept { return store_.vertex_count(); }
    [[nodiscard]] const VersionedEdgeStore& store() const noexcept { return store_; }
    [[nodiscard]] const WitnessMatrix& tcm() const noexcept { return tcm_; }

    void set_delta_observer(DeltaObserver observer) { observer_ = std::move(observer); }

    void insert(VertexId center, std::span<const Edge> edge_set) {
        // The store validates the batch before anything else is touched.
        const Version t = store_.record_insertion(center, edge_set);
        auto& slot = centers_[center];
        if (slot) {
            const auto in = slot->in_tree.members();
            const auto out = slot->out_tree.members();
            tcm_.apply_center_decrement(in, out);
            slot.reset();
        }
        const std::size_t n = vertex_count();
        ReachTree in_tree =
            ReachTree::build(store_.version_view(t, Orientation::Reversed), n, center,
                             Direction::In, t);
        ReachTree out_tree =
            ReachTree::build(store_.version_view(t, Orientation::Forward), n, center,
                             Direction::Out, t);
        tree_work_ += in_tree.work() + out_tree.work();
        const auto in = in_tree.members();
        const auto out = out_tree.members();
        tcm_.apply_center_increment(in, out);
        slot.emplace(CenterRecord{center, t, std::move(in_tree), std::move(out_tree),
                                  std::uint64_t{in.size()} * out.size(), 0});
        ++ins_;
    }

    // Deletes an arbitrary edge set. Every tree delta of the batch is taken
    // against the pre-batch trees before any witness count changes.
    void remove(std::span<const Edge> edge_set) {
        const std::vector<EdgeRecord> killed = store_.record_deletion(edge_set);
        ++del_;
        if (killed.empty()) {
            return;
        }

        struct Pending {
            CenterRecord* rec;
            std::vector<VertexId> in_delete;
            std::vector<VertexId> out_before;
            std::vector<VertexId> in_after;
            std::vector<VertexId> out_delete;
        };
        std::vector<Pending> pending;
        std::vector<Edge> fwd;
        std::vector<Edge> rev;
        for (auto& slot : centers_) {
            if (!slot) {
                continue;
            }
            CenterRecord& rec = *slot;
            fwd.clear();
            rev.clear();
            for (const EdgeRecord& k : killed) {
                if (k.insert_version <= rec.version) {
                    fwd.push_back(k.edge);
                    rev.push_back(k.edge.reversed());
                }
            }
            if (fwd.empty()) {
                continue;
            }
            const std::uint64_t work_before = rec.in_tree.work() + rec.out_tree.work();
            DeltaReport in_delta = rec.in_tree.delete_edges(rev);
            Pending p{&rec, std::move(in_delta.removed), {}, {}, {}};
            if (!p.in_delete.empty()) {
                p.out_before = rec.out_tree.members();
            }
            DeltaReport out_delta = rec.out_tree.delete_edges(fwd);
            p.out_delete = std::move(out_delta.removed);
            if (!p.out_delete.empty()) {
                p.in_after = rec.in_tree.members();
            }
            tree_work_ += rec.in_tree.work() + rec.out_tree.work() - work_before;
            if (observer_) {
                observer_(rec.vertex, Direction::In, DeltaReport{p.in_delete});
                observer_(rec.vertex, Direction::Out, DeltaReport{p.out_delete});
            }
            if (!p.in_delete.empty() || !p.out_delete.empty()) {
                pending.push_back(std::move(p));
            }
        }
        for (const Pending& p : pending) {
            p.rec->lifetime_decrements +=
                tcm_.apply_deletion_delta(p.in_delete, p.out_before, p.in_after, p.out_delete);
        }
    }

    // Reflexive by convention; otherwise a single witness-count lookup.
    [[nodiscard]] bool query(VertexId v, VertexId u) const {
        require_vertex(v, vertex_count(), "query");
        require_vertex(u, vertex_count(), "query");
        return v == u || tcm_.query_cell(v, u);
    }

    [[nodiscard]] const CenterRecord* center(VertexId v) const {
        require_vertex(v, vertex_count(), "center");
        return centers_[v] ? &*centers_[v] : nullptr;
    }

    [[nodiscard]] std::size_t center_count() const noexcept {
        std::size_t c = 0;
        for (const auto& slot : centers_) {
            c += slot.has_value();
        }
        return c;
    }

    // Active centers in ascending vertex order.
    template <typename Fn>
    void for_each_center(Fn&& fn) const {
        for (const auto& slot : centers_) {
            if (slot) {
                fn(*slot);
            }
        }
    }

    [[nodiscard]] std::uint64_t timeline() const noexcept { return ins_ + del_; }
    [[nodiscard]] std::uint64_t tree_work() const noexcept { return tree_work_; }

    [[nodiscard]] CounterReport snapshot_counters() const {
        CounterReport r{ins_, del_, ins_ + del_, tcm_.cell_updates(), tree_work_, {}};
        for_each_center([&](const CenterRecord& rec) {
            r.centers.push_back({rec.vertex, rec.version, rec.build_pairs, rec.lifetime_decrements});
        });
        return r;
    }

private:
    VersionedEdgeStore store_;
    WitnessMatrix tcm_;
    std::vector<std::optional<CenterRecord>> centers_;
    DeltaObserver observer_;
    std::uint64_t ins_ = 0;
    std::uint64_t del_ = 0;
    std::uint64_t tree_work_ = 0;
};

}  // namespace dynreach

#endif  // DYNREACH_DYNAMIC_ORACLE_HPP
