#include "ppc/blockmat.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ppc {

namespace {

void require_same_field(const BlockMatrix& a, const BlockMatrix& b) {
    if (a.field() != b.field())
        throw FieldError("field mismatch between operands");
}

} // namespace

BlockMatrix::BlockMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
    if (rows == 0 || cols == 0)
        throw ShapeError("matrix dimensions must be positive");
}

BlockMatrix::BlockMatrix(Field field, std::size_t rows, std::size_t cols,
                         std::vector<FieldElement> entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0)
        throw ShapeError("matrix dimensions must be positive");
    if (entries_.size() != rows * cols)
        throw ShapeError("entry count does not match dimensions");
    for (auto& e : entries_)
        e = field_.reduce(e);
}

BlockMatrix BlockMatrix::from_ints(const Field& field, std::size_t rows,
                                   std::size_t cols,
                                   const std::vector<std::int64_t>& values) {
    if (values.size() != rows * cols)
        throw ShapeError("entry count does not match dimensions");
    std::vector<FieldElement> entries(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        entries[i] = field.from_int(values[i]);
    return BlockMatrix(field, rows, cols, std::move(entries));
}

BlockMatrix BlockMatrix::identity(const Field& field, std::size_t n) {
    BlockMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, 1 % field.prime());
    return m;
}

BlockMatrix BlockMatrix::random(const Field& field, std::size_t rows,
                                std::size_t cols, Rng& rng) {
    std::vector<FieldElement> entries(rows * cols);
    for (auto& e : entries)
        e = rng.below(field.prime());
    return BlockMatrix(field, rows, cols, std::move(entries));
}

bool BlockMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](FieldElement e) { return e == 0; });
}

bool BlockMatrix::operator==(const BlockMatrix& other) const {
    return field_ == other.field_ && rows_ == other.rows_ &&
           cols_ == other.cols_ && entries_ == other.entries_;
}

BlockMatrix matmul(const BlockMatrix& a, const BlockMatrix& b) {
    require_same_field(a, b);
    if (a.cols() != b.rows())
        throw ShapeError("shape mismatch in matmul: " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
    const Field& f = a.field();
    BlockMatrix out(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const FieldElement aik = a.at(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out.set(i, j, f.add(out.at(i, j), f.mul(aik, b.at(k, j))));
            }
        }
    }
    return out;
}

BlockMatrix add(const BlockMatrix& a, const BlockMatrix& b) {
    require_same_field(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("shape mismatch in add");
    const Field& f = a.field();
    std::vector<FieldElement> entries(a.entries().size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        entries[i] = f.add(a.entries()[i], b.entries()[i]);
    return BlockMatrix(f, a.rows(), a.cols(), std::move(entries));
}

BlockMatrix scale(const BlockMatrix& a, FieldElement s) {
    const Field& f = a.field();
    std::vector<FieldElement> entries(a.entries().size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        entries[i] = f.mul(a.entries()[i], s);
    return BlockMatrix(f, a.rows(), a.cols(), std::move(entries));
}

std::vector<BlockMatrix> partition_rows(const BlockMatrix& a, std::size_t m) {
    if (m == 0 || a.rows() % m != 0)
        throw PartitionError("partition: " + std::to_string(m) +
                             " row blocks do not divide " +
                             std::to_string(a.rows()) + " rows");
    const std::size_t band = a.rows() / m;
    std::vector<BlockMatrix> blocks;
    blocks.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        BlockMatrix blk(a.field(), band, a.cols());
        for (std::size_t r = 0; r < band; ++r)
            for (std::size_t c = 0; c < a.cols(); ++c)
                blk.set(r, c, a.at(i * band + r, c));
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

std::vector<BlockMatrix> partition_cols(const BlockMatrix& b,
                                        std::size_t blocks) {
    if (blocks == 0 || b.cols() % blocks != 0)
        throw PartitionError("partition: " + std::to_string(blocks) +
                             " column blocks do not divide " +
                             std::to_string(b.cols()) + " columns");
    const std::size_t band = b.cols() / blocks;
    std::vector<BlockMatrix> out;
    out.reserve(blocks);
    for (std::size_t l = 0; l < blocks; ++l) {
        BlockMatrix blk(b.field(), b.rows(), band);
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < band; ++c)
                blk.set(r, c, b.at(r, l * band + c));
        out.push_back(std::move(blk));
    }
    return out;
}

BlockMatrix assemble_product(
    const std::vector<std::vector<BlockMatrix>>& grid) {
    if (grid.empty() || grid.front().empty())
        throw ShapeError("assemble: empty grid");
    const std::size_t block_rows = grid.front().front().rows();
    const std::size_t block_cols = grid.front().front().cols();
    const std::size_t cols_count = grid.front().size();
    const Field& f = grid.front().front().field();
    for (const auto& row : grid) {
        if (row.size() != cols_count)
            throw ShapeError("assemble: ragged grid");
        for (const auto& blk : row) {
            if (blk.rows() != block_rows || blk.cols() != block_cols)
                throw ShapeError("assemble: blocks differ in shape");
            if (blk.field() != f)
                throw FieldError("field mismatch between blocks");
        }
    }
    BlockMatrix out(f, block_rows * grid.size(), block_cols * cols_count);
    for (std::size_t l = 0; l < grid.size(); ++l)
        for (std::size_t r = 0; r < cols_count; ++r)
            for (std::size_t i = 0; i < block_rows; ++i)
                for (std::size_t j = 0; j < block_cols; ++j)
                    out.set(l * block_rows + i, r * block_cols + j,
                            grid[l][r].at(i, j));
    return out;
}

void write_matrix(std::ostream& os, const BlockMatrix& m) {
    os << m.rows() << ' ' << m.cols() << ' ' << m.field().prime() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c != 0)
                os << ' ';
            os << m.at(r, c);
        }
        os << '\n';
    }
}

BlockMatrix read_matrix(std::istream& is) {
    std::size_t rows = 0, cols = 0;
    std::uint64_t prime = 0;
    if (!(is >> rows >> cols >> prime))
        throw ParseError("matrix header must be: rows cols p");
    Field field(prime);
    std::vector<FieldElement> entries(rows * cols);
    for (auto& e : entries) {
        if (!(is >> e))
            throw ParseError("matrix body ended early");
    }
    return BlockMatrix(field, rows, cols, std::move(entries));
}

void PartitionSpec::validate() const {
    if (m == 0)
        throw SpecError("invalid spec: m >= 1 required");
    if (M == 0)
        throw SpecError("invalid spec: M >= 1 required");
    if (L == 0)
        throw SpecError("invalid spec: L >= 1 required");
    if (n < 2)
        throw SpecError("invalid spec: n >= 2 required");
    if (N == 0 || N % n != 0)
        throw SpecError("invalid spec: n must divide N (n=" +
                        std::to_string(n) + ", N=" + std::to_string(N) + ")");
    if (L > m)
        throw SpecError("invalid spec: L <= m violated (L=" +
                        std::to_string(L) + ", m=" + std::to_string(m) + ")");
    if (L * (N / n) < m)
        throw SpecError("invalid spec: L*N/n >= m violated (L=" +
                        std::to_string(L) + ", N=" + std::to_string(N) +
                        ", n=" + std::to_string(n) +
                        ", m=" + std::to_string(m) + ")");
}

} // namespace ppc
