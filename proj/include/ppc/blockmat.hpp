#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ppc/ffield.hpp"

namespace ppc {

// Dense row-major matrix over F_p. Blocks produced by the partition helpers
// are copies, never views, so values stay immutable once handed around.
class BlockMatrix {
  public:
    BlockMatrix(Field field, std::size_t rows, std::size_t cols);
    BlockMatrix(Field field, std::size_t rows, std::size_t cols,
                std::vector<FieldElement> entries);

    // Ingestion of signed integers, reduced mod p.
    static BlockMatrix from_ints(const Field& field, std::size_t rows,
                                 std::size_t cols,
                                 const std::vector<std::int64_t>& values);
    static BlockMatrix identity(const Field& field, std::size_t n);
    static BlockMatrix random(const Field& field, std::size_t rows,
                              std::size_t cols, Rng& rng);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    FieldElement at(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }
    void set(std::size_t r, std::size_t c, FieldElement v) {
        entries_[r * cols_ + c] = v;
    }

    const std::vector<FieldElement>& entries() const { return entries_; }

    bool is_zero() const;

    bool operator==(const BlockMatrix& other) const;
    bool operator!=(const BlockMatrix& other) const {
        return !(*this == other);
    }

  private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<FieldElement> entries_;
};

// Exact schoolbook product; this is the correctness oracle for the decoder.
BlockMatrix matmul(const BlockMatrix& a, const BlockMatrix& b);

BlockMatrix add(const BlockMatrix& a, const BlockMatrix& b);

BlockMatrix scale(const BlockMatrix& a, FieldElement s);

// Split into `m` row bands, top to bottom. m must divide a.rows().
std::vector<BlockMatrix> partition_rows(const BlockMatrix& a, std::size_t m);

// Split into `blocks` column bands, left to right.
std::vector<BlockMatrix> partition_cols(const BlockMatrix& b,
                                        std::size_t blocks);

// Reassemble a rectangular grid of equally shaped blocks; grid[l][r] lands in
// row band l, column band r.
BlockMatrix assemble_product(
    const std::vector<std::vector<BlockMatrix>>& grid);

// Fixture text format: "rows cols p" on the first line, then one line of
// space-separated decimal residues per row.
void write_matrix(std::ostream& os, const BlockMatrix& m);
BlockMatrix read_matrix(std::istream& is);

// Session geometry. m row blocks of A, n worker groups (each B_k splits into
// n-1 column blocks), M library matrices, N workers, L sub-computations per
// worker.
struct PartitionSpec {
    std::size_t m = 1;
    std::size_t n = 2;
    std::size_t M = 1;
    std::size_t N = 2;
    std::size_t L = 1;

    std::size_t recovery_threshold() const { return m * n; }
    std::size_t group_size() const { return N / n; }

    // Throws SpecError naming the violated constraint.
    void validate() const;
};

} // namespace ppc
