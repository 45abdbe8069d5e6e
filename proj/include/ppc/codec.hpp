#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ppc/poly.hpp"

namespace ppc {

// What the master ships to one worker: L evaluations of the row-block
// polynomial of A. Independent of the desired library index by construction.
struct EncodedShareA {
    int worker_rank = 0; // 1-based
    std::vector<FieldElement> x_points;
    std::vector<BlockMatrix> evaluations;
};

// Session-wide evaluation points for the library polynomials: one point per
// worker group (used for the desired matrix) and one shared point per
// undesired matrix, all distinct and nonzero.
struct PointAssignment {
    std::vector<FieldElement> group_points;  // size n
    std::vector<FieldElement> shared_points; // size M-1

    // The M points a worker in `group_index` evaluates the library at when
    // the desired matrix is `desired`. Slot `desired` carries the group
    // point, every other slot the shared point for that matrix. 1-based
    // indices.
    std::vector<FieldElement> per_matrix_points(std::size_t group_index,
                                                std::size_t desired,
                                                std::size_t library_size) const;
};

// One worker-produced evaluation, already mapped by the master to its group.
struct SubResult {
    std::size_t group_index = 0; // 1-based
    FieldElement x_point = 0;
    BlockMatrix value;
};

// Evaluations of A~(x) = sum_l A_l x^l at the given points, where A_0..A_m-1
// are the m row blocks of a.
std::vector<BlockMatrix> encode_a(const BlockMatrix& a, std::size_t m,
                                  const std::vector<FieldElement>& x_points);

// sum_k B~_k(per_matrix_point[k]) with B~_k(y) = sum_{l=1}^{n-1} B_{k,l} y^l;
// every library matrix enters the sum symmetrically.
BlockMatrix encode_library(const std::vector<BlockMatrix>& library,
                           std::size_t n,
                           const std::vector<FieldElement>& per_matrix_point);

// One sub-computation: A~(x_p) times the worker's encoded library.
BlockMatrix worker_subcompute(const BlockMatrix& a_evaluation,
                              const BlockMatrix& encoded_b);

// First decoding stage: interpolate the degree m-1 polynomial in x from m
// results of a single group; coefficient l is Z_{group,l}.
PolyCoeffs decode_stage1(std::span<const SubResult> group_results,
                         std::size_t m);

struct Stage2Result {
    // Constant term: the undesired-library noise, discarded by recovery but
    // returned so callers can cross-check it (zero when M = 1).
    BlockMatrix noise_constant;
    // Coefficients of y^1..y^{n-1}: the products A_l * B_{D,r}.
    std::vector<BlockMatrix> block_products;
};

// Second stage: interpolate across groups in y and split off the constant.
Stage2Result decode_stage2(const std::vector<BlockMatrix>& coeff_per_group,
                           const std::vector<FieldElement>& group_points);

struct RecoveredProduct {
    BlockMatrix product;
    // Positions (into the arrival stream) of the mn consumed results.
    std::vector<std::size_t> consumed;
    // How far the stream was read before every group was satisfied.
    std::size_t read_count = 0;
    // Stage-2 constant terms, one per row block of A.
    std::vector<BlockMatrix> noise_constants;
};

// Twofold decoding over an arrival-ordered stream: consume the earliest m
// results of each of the n groups (exactly mn total), interpolate per group
// in x, then across groups in y, and reassemble A*B_D. Throws DecodeError
// naming the first starved group if the stream ends early.
RecoveredProduct recover_product(std::span<const SubResult> arrivals,
                                 const PartitionSpec& spec,
                                 const std::vector<FieldElement>& group_points);

} // namespace ppc
