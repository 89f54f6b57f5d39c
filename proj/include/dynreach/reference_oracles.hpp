#ifndef DYNREACH_REFERENCE_ORACLES_HPP
#define DYNREACH_REFERENCE_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <ranges>
#include <vector>

#include "dynreach/dynamic_oracle.hpp"
#include "dynreach/graph_store.hpp"
#include "dynreach/types.hpp"

// Brute-force oracles for differential testing. Nothing here shares
// traversal code with the maintained structures.
namespace dynreach::reference {

using BoolMatrix = std::vector<std::vector<bool>>;
using CountMatrix = std::vector<std::vector<std::uint32_t>>;

namespace detail {

template <std::ranges::input_range View>
std::vector<std::vector<VertexId>> adjacency(View&& view, std::size_t n) {
    std::vector<std::vector<VertexId>> adj(n + 1);
    for (Edge e : view) {
        adj[e.src].push_back(e.dst);
    }
    return adj;
}

// Depth-first search with an explicit stack; `visits` counts vertex pops
// plus edge scans.
inline std::vector<bool> search(const std::vector<std::vector<VertexId>>& adj, VertexId from,
                                std::uint64_t* visits = nullptr) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<VertexId> stack{from};
    seen[from] = true;
    std::uint64_t count = 0;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        ++count;
        for (VertexId w : adj[v]) {
            ++count;
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    if (visits) {
        *visits += count;
    }
    return seen;
}

}  // namespace detail

template <std::ranges::input_range View>
bool reachable_bruteforce(View&& view, std::size_t n, VertexId v, VertexId u) {
    require_vertex(v, n, "reachable_bruteforce");
    require_vertex(u, n, "reachable_bruteforce");
    if (v == u) {
        return true;
    }
    return detail::search(detail::adjacency(view, n), v)[u];
}

// closure[v][u] for 1-based v, u (row/column 0 unused). Reflexive.
template <std::ranges::input_range View>
BoolMatrix transitive_closure_bruteforce(View&& view, std::size_t n,
                                         std::uint64_t* visits = nullptr) {
    const auto adj = detail::adjacency(view, n);
    BoolMatrix closure(n + 1, std::vector<bool>(n + 1, false));
    for (VertexId v = 1; v <= n; ++v) {
        closure[v] = detail::search(adj, v, visits);
        closure[v][0] = false;
    }
    return closure;
}

// Recomputes every active center's In/Out sets on its own version view and
// counts, per cell, the centers witnessing it.
inline CountMatrix witness_count_oracle(const DynamicReachability& state) {
    const std::size_t n = state.vertex_count();
    CountMatrix counts(n + 1, std::vector<std::uint32_t>(n + 1, 0));
    state.for_each_center([&](const CenterRecord& rec) {
        const auto& store = state.store();
        const auto out = detail::search(
            detail::adjacency(store.version_view(rec.version, Orientation::Forward), n), rec.vertex);
        const auto in = detail::search(
            detail::adjacency(store.version_view(rec.version, Orientation::Reversed), n),
            rec.vertex);
        for (VertexId u = 1; u <= n; ++u) {
            if (!in[u]) {
                continue;
            }
            for (VertexId z = 1; z <= n; ++z) {
                if (out[z]) {
                    ++counts[u][z];
                }
            }
        }
    });
    return counts;
}

// True iff the live matrix equals the oracle cell for cell.
inline bool matches(const WitnessMatrix& live, const CountMatrix& expected) {
    const std::size_t n = live.vertex_count();
    for (VertexId u = 1; u <= n; ++u) {
        for (VertexId z = 1; z <= n; ++z) {
            if (live.count(u, z) != expected[u][z]) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace dynreach::reference

#endif  // DYNREACH_REFERENCE_ORACLES_HPP
