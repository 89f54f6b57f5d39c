#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "dynreach/reach_tree.hpp"
#include "dynreach/reference_oracles.hpp"

using dynreach::Direction;
using dynreach::Edge;
using dynreach::ReachTree;
using dynreach::VertexId;
using Vertices = std::vector<VertexId>;

namespace {

const std::vector<Edge> kCycleWithTail{{1, 2}, {2, 3}, {3, 1}, {3, 4}};

std::vector<Edge> reversed(const std::vector<Edge>& es) {
    std::vector<Edge> out;
    for (Edge e : es) {
        out.push_back(e.reversed());
    }
    return out;
}

// Members by fresh search from the reference oracles.
Vertices reachable_from(const std::vector<Edge>& es, std::size_t n, VertexId root) {
    Vertices out;
    for (VertexId v = 1; v <= n; ++v) {
        if (dynreach::reference::reachable_bruteforce(es, n, root, v)) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace

TEST(ReachTree, EmptyViewHoldsOnlyRoot) {
    const auto t = ReachTree::build(std::vector<Edge>{}, 3, 1, Direction::Out);
    EXPECT_EQ(t.members(), Vertices{1});
    EXPECT_TRUE(t.reaches(1));
    EXPECT_FALSE(t.reaches(2));
}

TEST(ReachTree, CondensesCycle) {
    const auto t = ReachTree::build(kCycleWithTail, 4, 1, Direction::Out);
    EXPECT_EQ(t.members(), (Vertices{1, 2, 3, 4}));
    EXPECT_EQ(t.scc_nodes(), (std::vector<Vertices>{{1, 2, 3}, {4}}));
    t.verify_internal_state();
}

TEST(ReachTree, InTreeIsOutTreeOfReversedView) {
    const auto t = ReachTree::build(reversed(kCycleWithTail), 4, 4, Direction::In);
    EXPECT_EQ(t.members(), (Vertices{1, 2, 3, 4}));
    EXPECT_EQ(t.direction(), Direction::In);
}

TEST(ReachTree, PathTruncation) {
    auto t = ReachTree::build(std::vector<Edge>{{1, 2}, {2, 3}}, 3, 1, Direction::Out);
    EXPECT_EQ(t.members(), (Vertices{1, 2, 3}));
    const auto d = t.delete_edges(std::vector<Edge>{{2, 3}});
    EXPECT_EQ(d.removed, Vertices{3});
    EXPECT_FALSE(t.reaches(3));
    EXPECT_TRUE(t.reaches(1));
}

TEST(ReachTree, SccSplitKeepsReachability) {
    auto t = ReachTree::build(kCycleWithTail, 4, 1, Direction::Out);
    auto d = t.delete_edges(std::vector<Edge>{{3, 1}});
    EXPECT_TRUE(d.empty());
    EXPECT_EQ(t.scc_nodes(), (std::vector<Vertices>{{1}, {2}, {3}, {4}}));
    t.verify_internal_state();
    d = t.delete_edges(std::vector<Edge>{{1, 2}});
    EXPECT_EQ(d.removed, (Vertices{2, 3, 4}));
    EXPECT_EQ(t.members(), Vertices{1});
    t.verify_internal_state();
}

TEST(ReachTree, EdgesOutsideTreeAreSkipped) {
    auto t = ReachTree::build(std::vector<Edge>{{1, 2}, {3, 1}}, 3, 1, Direction::Out);
    EXPECT_TRUE(t.delete_edges(std::vector<Edge>{{3, 1}}).empty());
    EXPECT_TRUE(t.delete_edges(std::vector<Edge>{{2, 3}}).empty());
    EXPECT_TRUE(t.delete_edges(std::vector<Edge>{{1, 2}, {1, 2}}).removed == Vertices{2});
    EXPECT_TRUE(t.delete_edges(std::vector<Edge>{{1, 2}}).empty());
}

TEST(ReachTree, RemovingEverythingLeavesRoot) {
    auto t = ReachTree::build(kCycleWithTail, 4, 2, Direction::Out);
    t.delete_edges(kCycleWithTail);
    EXPECT_EQ(t.members(), Vertices{2});
}

TEST(ReachTree, ReachesIsConstantWork) {
    const auto t = ReachTree::build(kCycleWithTail, 4, 1, Direction::Out);
    const auto before = t.work();
    for (VertexId v = 0; v <= 5; ++v) {
        (void)t.reaches(v);
    }
    EXPECT_EQ(t.work(), before);
}

TEST(ReachTree, InvalidRootRejected) {
    EXPECT_THROW(ReachTree::build(std::vector<Edge>{}, 3, 4, Direction::Out),
                 dynreach::InvalidArgument);
}

TEST(ReachTree, BatchSplitsAcrossSeveralComponents) {
    // Two 3-cycles joined by a bridge, plus a chord; one batch cuts both.
    const std::vector<Edge> es{{1, 2}, {2, 3}, {3, 1}, {3, 4}, {4, 5}, {5, 6}, {6, 4}, {2, 1}};
    auto t = ReachTree::build(es, 6, 1, Direction::Out);
    EXPECT_EQ(t.scc_nodes(), (std::vector<Vertices>{{1, 2, 3}, {4, 5, 6}}));
    const auto d = t.delete_edges(std::vector<Edge>{{3, 1}, {6, 4}, {4, 5}});
    EXPECT_EQ(d.removed, (Vertices{5, 6}));
    EXPECT_EQ(t.scc_nodes(), (std::vector<Vertices>{{1, 2}, {3}, {4}}));
    t.verify_internal_state();
}

// Randomized deletion sequences against a fresh search after every batch,
// plus one-shot removal, conservation, root persistence and determinism.
TEST(ReachTree, RandomDeletionsMatchFreshSearch) {
    for (unsigned seed = 0; seed < 300; ++seed) {
        std::mt19937 rng(seed);
        const std::size_t n = 2 + rng() % 30;
        const std::size_t m = rng() % (4 * n);
        std::set<Edge> unique;
        for (std::size_t i = 0; i < m; ++i) {
            unique.insert({static_cast<VertexId>(1 + rng() % n),
                           static_cast<VertexId>(1 + rng() % n)});
        }
        std::vector<Edge> live(unique.begin(), unique.end());
        std::shuffle(live.begin(), live.end(), rng);
        const VertexId root = 1 + rng() % n;
        const Direction dir = seed % 2 ? Direction::In : Direction::Out;

        auto run = [&](std::vector<Edge> edges) {
            std::vector<Vertices> deltas;
            auto t = ReachTree::build(edges, n, root, dir);
            const Vertices initial = t.members();
            EXPECT_EQ(initial, reachable_from(edges, n, root));
            std::set<VertexId> gone;
            while (!edges.empty()) {
                const std::size_t batch = 1 + rng() % 3;
                std::vector<Edge> killed;
                for (std::size_t i = 0; i < batch && !edges.empty(); ++i) {
                    const std::size_t at = rng() % edges.size();
                    killed.push_back(edges[at]);
                    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(at));
                }
                const Vertices before = t.members();
                const auto d = t.delete_edges(killed);
                const Vertices after = t.members();
                EXPECT_EQ(after, reachable_from(edges, n, root)) << "seed " << seed;
                Vertices diff;
                std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                                    std::back_inserter(diff));
                EXPECT_EQ(d.removed, diff);
                EXPECT_EQ(std::count(d.removed.begin(), d.removed.end(), root), 0);
                for (VertexId v : d.removed) {
                    EXPECT_TRUE(gone.insert(v).second) << "vertex removed twice";
                }
                t.verify_internal_state();
                deltas.push_back(d.removed);
            }
            Vertices all(gone.begin(), gone.end());
            const Vertices final_members = t.members();
            all.insert(all.end(), final_members.begin(), final_members.end());
            std::sort(all.begin(), all.end());
            EXPECT_EQ(all, initial);
            return deltas;
        };
        const auto state = rng;
        const auto first = run(live);
        rng = state;
        EXPECT_EQ(run(live), first) << "non-deterministic deltas, seed " << seed;
    }
}

// Dense strongly connected graphs exercise certificate repair and splits.
TEST(ReachTree, DenseGraphsWithManySplits) {
    for (unsigned seed = 0; seed < 60; ++seed) {
        std::mt19937 rng(1000 + seed);
        const std::size_t n = 10 + rng() % 40;
        std::vector<Edge> edges;
        for (VertexId v = 1; v <= n; ++v) {
            edges.push_back({v, static_cast<VertexId>(v % n + 1)});
            for (int k = 0; k < 2; ++k) {
                const Edge e{v, static_cast<VertexId>(1 + rng() % n)};
                if (std::find(edges.begin(), edges.end(), e) == edges.end()) {
                    edges.push_back(e);
                }
            }
        }
        auto t = ReachTree::build(edges, n, 1, Direction::Out);
        ASSERT_EQ(t.scc_nodes().size(), 1U);
        std::shuffle(edges.begin(), edges.end(), rng);
        while (!edges.empty()) {
            const Edge e = edges.back();
            edges.pop_back();
            t.delete_edges(std::vector<Edge>{e});
            ASSERT_EQ(t.members(), reachable_from(edges, n, 1)) << "seed " << seed;
            t.verify_internal_state();
        }
    }
}
