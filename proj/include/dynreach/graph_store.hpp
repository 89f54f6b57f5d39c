#ifndef DYNREACH_GRAPH_STORE_HPP
#define DYNREACH_GRAPH_STORE_HPP

#include <algorithm>
#include <cstddef>
#include <ranges>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynreach/types.hpp"

namespace dynreach {

struct EdgeRecord {
    Edge edge;
    Version insert_version = 0;
    bool alive = true;
};

enum class Orientation { Forward, Reversed };

// The versioned edge sequence. Version i holds every alive edge whose
// insert_version is <= i, so deleting an edge removes it from every
// version at once. Dead records are kept as tombstones.
class VersionedEdgeStore {
public:
    explicit VersionedEdgeStore(std::size_t n) : n_(n) {
        if (n == 0) {
            throw InvalidArgument("VersionedEdgeStore: vertex count must be >= 1");
        }
    }

    [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] Version current_version() const noexcept { return current_; }
    [[nodiscard]] std::span<const EdgeRecord> records() const noexcept { return records_; }
    [[nodiscard]] std::size_t alive_count() const noexcept { return alive_.size(); }

    [[nodiscard]] bool is_alive(Edge e) const { return alive_.contains(e); }

    // Record returned for a currently alive edge, or nullptr.
    [[nodiscard]] const EdgeRecord* find_alive(Edge e) const {
        auto it = alive_.find(e);
        return it == alive_.end() ? nullptr : &records_[it->second];
    }

    // Creates version t+1 from an extended insert centered at `center`.
    // Duplicate edges inside the batch are collapsed.
    Version record_insertion(VertexId center, std::span<const Edge> edge_set) {
        require_vertex(center, n_, "record_insertion center");
        if (edge_set.empty()) {
            throw InvalidArgument("record_insertion: edge set is empty");
        }
        std::vector<Edge> batch;
        batch.reserve(edge_set.size());
        for (const Edge& e : edge_set) {
            require_vertex(e.src, n_, "record_insertion edge");
            require_vertex(e.dst, n_, "record_insertion edge");
            if (e.src != center && e.dst != center) {
                throw CenterViolation("record_insertion: edge (" + std::to_string(e.src) + "," +
                                      std::to_string(e.dst) + ") does not touch center " +
                                      std::to_string(center));
            }
            if (alive_.contains(e)) {
                throw InvalidArgument("record_insertion: edge (" + std::to_string(e.src) + "," +
                                      std::to_string(e.dst) + ") is already present");
            }
            if (std::find(batch.begin(), batch.end(), e) == batch.end()) {
                batch.push_back(e);
            }
        }
        ++current_;
        for (const Edge& e : batch) {
            alive_.emplace(e, records_.size());
            records_.push_back({e, current_, true});
        }
        return current_;
    }

    // Tombstones every alive edge named in edge_set. Absent edges are
    // skipped. Returns the records actually killed, in input order.
    std::vector<EdgeRecord> record_deletion(std::span<const Edge> edge_set) {
        for (const Edge& e : edge_set) {
            require_vertex(e.src, n_, "record_deletion edge");
            require_vertex(e.dst, n_, "record_deletion edge");
        }
        std::vector<EdgeRecord> killed;
        for (const Edge& e : edge_set) {
            auto it = alive_.find(e);
            if (it == alive_.end()) {
                continue;
            }
            EdgeRecord& rec = records_[it->second];
            rec.alive = false;
            killed.push_back(rec);
            alive_.erase(it);
        }
        return killed;
    }

    // Lazily filtered view of version i: alive edges with insert_version <= i.
    [[nodiscard]] auto version_view(Version i, Orientation orient = Orientation::Forward) const {
        if (i > current_) {
            throw InvalidArgument("version_view: version " + std::to_string(i) +
                                  " is beyond current version " + std::to_string(current_));
        }
        return records_ | std::views::filter([i](const EdgeRecord& r) {
                   return r.alive && r.insert_version <= i;
               }) |
               std::views::transform([orient](const EdgeRecord& r) {
                   return orient == Orientation::Forward ? r.edge : r.edge.reversed();
               });
    }

    [[nodiscard]] std::vector<Edge> materialize(Version i,
                                                Orientation orient = Orientation::Forward) const {
        std::vector<Edge> out;
        for (Edge e : version_view(i, orient)) {
            out.push_back(e);
        }
        return out;
    }

private:
    std::size_t n_;
    Version current_ = 0;
    std::vector<EdgeRecord> records_;
    std::unordered_map<Edge, std::size_t> alive_;
};

}  // namespace dynreach

#endif  // DYNREACH_GRAPH_STORE_HPP
