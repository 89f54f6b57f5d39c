#include <gtest/gtest.h>

#include <sstream>
#include <random>
#include <vector>

#include "dynreach/witness_matrix.hpp"

using dynreach::VertexId;
using dynreach::WitnessMatrix;
using Vertices = std::vector<VertexId>;

TEST(WitnessMatrix, ZeroMatrixAnswersFalse) {
    WitnessMatrix m(3);
    EXPECT_FALSE(m.query_cell(1, 2));
    EXPECT_EQ(m.total(), 0U);
}

TEST(WitnessMatrix, OutOfRangeRejected) {
    WitnessMatrix m(3);
    EXPECT_THROW((void)m.query_cell(0, 1), dynreach::InvalidArgument);
    EXPECT_THROW((void)m.query_cell(1, 4), dynreach::InvalidArgument);
    EXPECT_THROW(WitnessMatrix(0), dynreach::InvalidArgument);
}

TEST(WitnessMatrix, PositiveCountAnswersTrue) {
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1}, Vertices{3});
    m.apply_center_increment(Vertices{1}, Vertices{3});
    EXPECT_EQ(m.count(1, 3), 2U);
    EXPECT_TRUE(m.query_cell(1, 3));
}

TEST(WitnessMatrix, IsolatedCenterTouchesDiagonalOnly) {
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{2}, Vertices{2});
    EXPECT_EQ(m.count(2, 2), 1U);
    EXPECT_EQ(m.total(), 1U);
    EXPECT_EQ(m.cell_updates(), 1U);
}

TEST(WitnessMatrix, CrossProductIncrement) {
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    std::ostringstream os;
    m.dump(os);
    EXPECT_EQ(os.str(), "0 1 1\n0 1 1\n0 0 0\n");
    EXPECT_EQ(m.cell_updates(), 4U);
    EXPECT_TRUE(m.query_cell(1, 3));
}

TEST(WitnessMatrix, DecrementInvertsIncrement) {
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    EXPECT_EQ(m.apply_center_decrement(Vertices{1, 2}, Vertices{2, 3}), 4U);
    EXPECT_EQ(m.total(), 0U);
    EXPECT_EQ(m.cell_updates(), 8U);
}

TEST(WitnessMatrix, NegativeCellIsInvariantViolation) {
    WitnessMatrix m(3);
    EXPECT_THROW(m.apply_center_decrement(Vertices{1}, Vertices{2}),
                 dynreach::InvariantViolation);
    // Nothing was applied.
    m.apply_center_increment(Vertices{1}, Vertices{1});
    EXPECT_THROW(m.apply_center_decrement(Vertices{1}, Vertices{1, 2}),
                 dynreach::InvariantViolation);
    EXPECT_EQ(m.count(1, 1), 1U);
}

TEST(WitnessMatrix, RebuildLeavesOverlapUnchanged) {
    // Old In x Out = {1,2} x {2,3}; new = {1,2} x {1,2,3}.
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    m.apply_center_decrement(Vertices{1, 2}, Vertices{2, 3});
    m.apply_center_increment(Vertices{1, 2}, Vertices{1, 2, 3});
    for (VertexId u = 1; u <= 2; ++u) {
        for (VertexId z = 1; z <= 3; ++z) {
            EXPECT_EQ(m.count(u, z), 1U);
        }
    }
    EXPECT_EQ(m.cell_updates(), 4U + 4U + 6U);
}

TEST(WitnessMatrix, DeletionDeltaNoopWhenNothingRemoved) {
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    EXPECT_EQ(m.apply_deletion_delta({}, Vertices{2, 3}, Vertices{1, 2}, {}), 0U);
    EXPECT_EQ(m.total(), 4U);
}

TEST(WitnessMatrix, DeletionDeltaOutSideOnly) {
    // Center 2, In={1,2}, Out={2,3}; killing (2,3) drops 3 from Out.
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    EXPECT_EQ(m.apply_deletion_delta({}, Vertices{2, 3}, Vertices{1, 2}, Vertices{3}), 2U);
    EXPECT_EQ(m.count(1, 3), 0U);
    EXPECT_EQ(m.count(2, 3), 0U);
    EXPECT_EQ(m.count(1, 2), 1U);
    EXPECT_EQ(m.count(2, 2), 1U);
}

TEST(WitnessMatrix, DeletionDeltaCountsOverlapOnce) {
    // Killing (1,2) and (2,3) together: In_delete={1}, Out_delete={3}.
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    EXPECT_EQ(m.apply_deletion_delta(Vertices{1}, Vertices{2, 3}, Vertices{2}, Vertices{3}), 3U);
    EXPECT_EQ(m.count(1, 2), 0U);
    EXPECT_EQ(m.count(1, 3), 0U);
    EXPECT_EQ(m.count(2, 3), 0U);
    EXPECT_EQ(m.count(2, 2), 1U);
}

TEST(WitnessMatrix, OverlapDoubleCountedByPreDeletionRectangles) {
    // Using the pre-deletion In set for the second rectangle hits (1,3) twice.
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    m.apply_center_decrement(Vertices{1}, Vertices{2, 3});
    EXPECT_THROW(m.apply_center_decrement(Vertices{1, 2}, Vertices{3}),
                 dynreach::InvariantViolation);
}

TEST(WitnessMatrix, DeletionDeltaRejectsOverlappingInSets) {
    WitnessMatrix m(3);
    m.apply_center_increment(Vertices{1, 2}, Vertices{2, 3});
    EXPECT_THROW(m.apply_deletion_delta(Vertices{1}, Vertices{2, 3}, Vertices{1, 2}, Vertices{3}),
                 dynreach::InvariantViolation);
}

TEST(WitnessMatrix, QueryBitTracksCountsUnderRandomRectangles) {
    std::mt19937_64 rng(17);
    for (std::size_t n : {1U, 7U, 64U, 65U, 130U}) {
        WitnessMatrix m(n);
        std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>> live;
        auto pick = [&] {
            std::vector<VertexId> s;
            for (VertexId v = 1; v <= n; ++v) {
                if (rng() % 3 == 0) {
                    s.push_back(v);
                }
            }
            return s;
        };
        for (int step = 0; step < 200; ++step) {
            if (!live.empty() && rng() % 2 == 0) {
                const std::size_t k = rng() % live.size();
                m.apply_center_decrement(live[k].first, live[k].second);
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
            } else {
                live.emplace_back(pick(), pick());
                m.apply_center_increment(live.back().first, live.back().second);
            }
            for (VertexId v = 1; v <= n; ++v) {
                for (VertexId u = 1; u <= n; ++u) {
                    ASSERT_EQ(m.query_cell(v, u), m.count(v, u) > 0);
                }
            }
        }
    }
}
