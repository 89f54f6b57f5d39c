#include <gtest/gtest.h>

#include <vector>

#include "dynreach/dynamic_oracle.hpp"
#include "dynreach/reference_oracles.hpp"

using dynreach::Edge;
using dynreach::VertexId;
using Edges = std::vector<Edge>;

namespace ref = dynreach::reference;

TEST(ReferenceOracles, EmptyViewOnlyReflexive) {
    EXPECT_FALSE(ref::reachable_bruteforce(Edges{}, 3, 1, 2));
    EXPECT_TRUE(ref::reachable_bruteforce(Edges{}, 3, 2, 2));
    const auto c = ref::transitive_closure_bruteforce(Edges{}, 3);
    for (VertexId v = 1; v <= 3; ++v) {
        for (VertexId u = 1; u <= 3; ++u) {
            EXPECT_EQ(c[v][u], v == u);
        }
    }
}

TEST(ReferenceOracles, PathAndCycle) {
    const Edges path{{1, 2}, {2, 3}};
    EXPECT_TRUE(ref::reachable_bruteforce(path, 3, 1, 3));
    EXPECT_FALSE(ref::reachable_bruteforce(path, 3, 3, 1));
    EXPECT_TRUE(ref::reachable_bruteforce(Edges{{1, 2}, {2, 1}}, 2, 2, 1));

    const auto c = ref::transitive_closure_bruteforce(path, 3);
    EXPECT_TRUE(c[1][2] && c[1][3] && c[2][3]);
    EXPECT_FALSE(c[2][1] || c[3][1] || c[3][2]);

    const auto cyc = ref::transitive_closure_bruteforce(Edges{{1, 2}, {2, 3}, {3, 1}}, 3);
    for (VertexId v = 1; v <= 3; ++v) {
        for (VertexId u = 1; u <= 3; ++u) {
            EXPECT_TRUE(cyc[v][u]);
        }
    }
}

TEST(ReferenceOracles, ClosureCountsVisits) {
    std::uint64_t visits = 0;
    (void)ref::transitive_closure_bruteforce(Edges{{1, 2}, {2, 3}}, 3, &visits);
    // From 1: 3 pops + 2 scans, from 2: 2 + 1, from 3: 1 + 0.
    EXPECT_EQ(visits, 9U);
}

TEST(ReferenceOracles, WitnessCountNoCenters) {
    dynreach::DynamicReachability g(3);
    const auto w = ref::witness_count_oracle(g);
    for (const auto& row : w) {
        for (auto c : row) {
            EXPECT_EQ(c, 0U);
        }
    }
}

TEST(ReferenceOracles, WitnessCountSingleCenter) {
    dynreach::DynamicReachability g(3);
    g.insert(2, Edges{{1, 2}, {2, 3}});
    const auto w = ref::witness_count_oracle(g);
    EXPECT_EQ(w[1][2], 1U);
    EXPECT_EQ(w[1][3], 1U);
    EXPECT_EQ(w[2][2], 1U);
    EXPECT_EQ(w[2][3], 1U);
    std::uint32_t total = 0;
    for (const auto& row : w) {
        for (auto c : row) {
            total += c;
        }
    }
    EXPECT_EQ(total, 4U);
}

// A positive witness count always certifies a real path.
TEST(ReferenceOracles, WitnessImpliesReachability) {
    dynreach::DynamicReachability g(5);
    g.insert(2, Edges{{1, 2}, {2, 3}});
    g.insert(4, Edges{{3, 4}, {4, 5}});
    g.insert(3, Edges{{3, 1}});
    g.remove(Edges{{2, 3}});
    const auto w = ref::witness_count_oracle(g);
    const auto view = g.store().materialize(g.store().current_version());
    for (VertexId v = 1; v <= 5; ++v) {
        for (VertexId u = 1; u <= 5; ++u) {
            if (w[v][u] > 0) {
                EXPECT_TRUE(ref::reachable_bruteforce(view, 5, v, u));
            }
        }
    }
}
