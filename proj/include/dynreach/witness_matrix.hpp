#ifndef DYNREACH_WITNESS_MATRIX_HPP
#define DYNREACH_WITNESS_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dynreach/types.hpp"

namespace dynreach {

// Dense n x n matrix of witness counts: cell (u, z) holds the number of
// active insertion centers r with u in In[r] and z in Out[r].
class WitnessMatrix {
public:
    using Count = std::uint32_t;

    explicit WitnessMatrix(std::size_t n)
        : n_(n), words_((n + 63) / 64), cells_(n * n, 0), positive_(n * words_, 0) {
        if (n == 0) {
            throw InvalidArgument("WitnessMatrix: vertex count must be >= 1");
        }
    }

    [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t cell_updates() const noexcept { return cell_updates_; }

    [[nodiscard]] Count count(VertexId v, VertexId u) const {
        require_vertex(v, n_, "WitnessMatrix::count");
        require_vertex(u, n_, "WitnessMatrix::count");
        return cells_[index(v, u)];
    }

    // Reads only the positive-cell bitmap, which stays cache resident far
    // longer than the counts.
    [[nodiscard]] bool query_cell(VertexId v, VertexId u) const {
        require_vertex(v, n_, "WitnessMatrix::query_cell");
        require_vertex(u, n_, "WitnessMatrix::query_cell");
        return (positive_[bit_word(v, u)] >> ((u - 1) & 63)) & 1U;
    }

    // +1 on every cell of in_set x out_set.
    void apply_center_increment(std::span<const VertexId> in_set,
                                std::span<const VertexId> out_set) {
        for (VertexId u : in_set) {
            Count* row = &cells_[index(u, 1)];
            for (VertexId z : out_set) {
                if (row[z - 1]++ == 0) {
                    positive_[bit_word(u, z)] |= std::uint64_t{1} << ((z - 1) & 63);
                }
            }
        }
        cell_updates_ += std::uint64_t{in_set.size()} * out_set.size();
    }

    // -1 on every cell of in_set x out_set. Returns the number of cells touched.
    std::uint64_t apply_center_decrement(std::span<const VertexId> in_set,
                                         std::span<const VertexId> out_set) {
        for (VertexId u : in_set) {
            const Count* row = &cells_[index(u, 1)];
            for (VertexId z : out_set) {
                if (row[z - 1] == 0) {
                    throw InvariantViolation("WitnessMatrix: count (" + std::to_string(u) + "," +
                                             std::to_string(z) + ") would become negative");
                }
            }
        }
        for (VertexId u : in_set) {
            Count* row = &cells_[index(u, 1)];
            for (VertexId z : out_set) {
                if (--row[z - 1] == 0) {
                    positive_[bit_word(u, z)] &= ~(std::uint64_t{1} << ((z - 1) & 63));
                }
            }
        }
        const std::uint64_t touched = std::uint64_t{in_set.size()} * out_set.size();
        cell_updates_ += touched;
        return touched;
    }

    // Withdraws the witness pairs one center lost in a deletion batch:
    //   (in_delete x out_before) and (in_after x out_delete).
    // in_delete and in_after are disjoint, so the rectangles never overlap
    // and every ceased pair is decremented exactly once.
    std::uint64_t apply_deletion_delta(std::span<const VertexId> in_delete,
                                       std::span<const VertexId> out_before,
                                       std::span<const VertexId> in_after,
                                       std::span<const VertexId> out_delete) {
        std::vector<char> later(n_ + 1, 0);
        for (VertexId u : in_after) {
            later[u] = 1;
        }
        for (VertexId u : in_delete) {
            if (later[u]) {
                throw InvariantViolation("WitnessMatrix: vertex " + std::to_string(u) +
                                         " is both deleted from and kept in an In tree");
            }
        }
        return apply_center_decrement(in_delete, out_before) +
               apply_center_decrement(in_after, out_delete);
    }

    // Row-major dump, one row per line, space separated.
    void dump(std::ostream& os) const {
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t c = 0; c < n_; ++c) {
                if (c != 0) {
                    os << ' ';
                }
                os << cells_[r * n_ + c];
            }
            os << '\n';
        }
    }

    [[nodiscard]] std::span<const Count> cells() const noexcept { return cells_; }

    [[nodiscard]] std::uint64_t total() const noexcept {
        std::uint64_t s = 0;
        for (Count c : cells_) {
            s += c;
        }
        return s;
    }

private:
    [[nodiscard]] std::size_t index(VertexId v, VertexId u) const noexcept {
        return std::size_t{v - 1} * n_ + (u - 1);
    }
    [[nodiscard]] std::size_t bit_word(VertexId v, VertexId u) const noexcept {
        return std::size_t{v - 1} * words_ + ((u - 1) >> 6);
    }

    std::size_t n_;
    std::size_t words_;
    std::vector<Count> cells_;
    // Bit (v, u) set iff cells_(v, u) > 0.
    std::vector<std::uint64_t> positive_;
    std::uint64_t cell_updates_ = 0;
};

}  // namespace dynreach

#endif  // DYNREACH_WITNESS_MATRIX_HPP
