#include "ppc/codec.hpp"

#include <optional>
#include <string>

namespace ppc {

std::vector<FieldElement> PointAssignment::per_matrix_points(
    std::size_t group_index, std::size_t desired,
    std::size_t library_size) const {
    if (group_index == 0 || group_index > group_points.size())
        throw SpecError("group index out of range: " +
                        std::to_string(group_index));
    if (desired == 0 || desired > library_size)
        throw SpecError("desired index out of range: " +
                        std::to_string(desired));
    if (shared_points.size() + 1 < library_size)
        throw SpecError("not enough shared points for library size " +
                        std::to_string(library_size));
    std::vector<FieldElement> points(library_size);
    std::size_t next_shared = 0;
    for (std::size_t k = 1; k <= library_size; ++k) {
        points[k - 1] = (k == desired) ? group_points[group_index - 1]
                                       : shared_points[next_shared++];
    }
    return points;
}

std::vector<BlockMatrix> encode_a(const BlockMatrix& a, std::size_t m,
                                  const std::vector<FieldElement>& x_points) {
    const PolyCoeffs poly(partition_rows(a, m));
    std::vector<BlockMatrix> evaluations;
    evaluations.reserve(x_points.size());
    for (FieldElement x : x_points)
        evaluations.push_back(eval_poly(poly, x));
    return evaluations;
}

BlockMatrix encode_library(const std::vector<BlockMatrix>& library,
                           std::size_t n,
                           const std::vector<FieldElement>& per_matrix_point) {
    if (library.empty())
        throw SpecError("library is empty");
    if (per_matrix_point.size() != library.size())
        throw SpecError("need one evaluation point per library matrix");
    if (n < 2)
        throw SpecError("invalid spec: n >= 2 required");

    std::optional<BlockMatrix> acc;
    for (std::size_t k = 0; k < library.size(); ++k) {
        const auto blocks = partition_cols(library[k], n - 1);
        const FieldElement y = per_matrix_point[k];
        // B~_k(y) = B_{k,1} y + ... + B_{k,n-1} y^{n-1}, Horner from the top
        BlockMatrix value = blocks.back();
        for (std::size_t l = n - 1; l-- > 1;)
            value = add(scale(value, y), blocks[l - 1]);
        value = scale(value, y);
        acc = acc ? add(*acc, value) : value;
    }
    return *acc;
}

BlockMatrix worker_subcompute(const BlockMatrix& a_evaluation,
                              const BlockMatrix& encoded_b) {
    return matmul(a_evaluation, encoded_b);
}

PolyCoeffs decode_stage1(std::span<const SubResult> group_results,
                         std::size_t m) {
    if (group_results.size() < m)
        throw DecodeError("insufficient results: got " +
                          std::to_string(group_results.size()) + ", need " +
                          std::to_string(m));
    for (std::size_t i = 1; i < group_results.size(); ++i) {
        if (group_results[i].group_index != group_results[0].group_index)
            throw SpecError("stage-1 results span multiple groups");
    }
    std::vector<FieldElement> xs;
    std::vector<BlockMatrix> values;
    xs.reserve(m);
    values.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs.push_back(group_results[i].x_point);
        values.push_back(group_results[i].value);
    }
    return interpolate(xs, values);
}

Stage2Result decode_stage2(const std::vector<BlockMatrix>& coeff_per_group,
                           const std::vector<FieldElement>& group_points) {
    if (coeff_per_group.size() != group_points.size())
        throw ShapeError("stage-2: one coefficient per group point required");
    const PolyCoeffs poly = interpolate(group_points, coeff_per_group);
    Stage2Result out{poly.coeff(0), {}};
    out.block_products.reserve(poly.size() - 1);
    for (std::size_t r = 1; r < poly.size(); ++r)
        out.block_products.push_back(poly.coeff(r));
    return out;
}

RecoveredProduct recover_product(
    std::span<const SubResult> arrivals, const PartitionSpec& spec,
    const std::vector<FieldElement>& group_points) {
    spec.validate();
    if (group_points.size() != spec.n)
        throw SpecError("need one evaluation point per group");

    const std::size_t m = spec.m;
    const std::size_t n = spec.n;
    std::vector<std::vector<SubResult>> per_group(n);
    std::vector<std::size_t> consumed;
    consumed.reserve(m * n);
    std::size_t full_groups = 0;
    std::size_t read = 0;
    for (; read < arrivals.size() && full_groups < n; ++read) {
        const SubResult& r = arrivals[read];
        if (r.group_index == 0 || r.group_index > n)
            throw SpecError("result group index out of range: " +
                            std::to_string(r.group_index));
        auto& bucket = per_group[r.group_index - 1];
        if (bucket.size() >= m)
            continue; // group already satisfied, result ignored
        bucket.push_back(r);
        consumed.push_back(read);
        if (bucket.size() == m)
            ++full_groups;
    }
    if (full_groups < n) {
        for (std::size_t t = 0; t < n; ++t) {
            if (per_group[t].size() < m)
                throw DecodeError("insufficient results for group " +
                                  std::to_string(t + 1) + ": got " +
                                  std::to_string(per_group[t].size()) +
                                  ", need " + std::to_string(m));
        }
    }

    // Stage 1: per group, coefficients Z_{t,0..m-1} of the polynomial in x.
    std::vector<PolyCoeffs> stage1;
    stage1.reserve(n);
    for (std::size_t t = 0; t < n; ++t)
        stage1.push_back(decode_stage1(per_group[t], m));

    // Stage 2: for each l, interpolate {Z_{t,l}} across groups in y.
    std::vector<std::vector<BlockMatrix>> grid;
    std::vector<BlockMatrix> noise;
    grid.reserve(m);
    noise.reserve(m);
    for (std::size_t l = 0; l < m; ++l) {
        std::vector<BlockMatrix> coeff_l;
        coeff_l.reserve(n);
        for (std::size_t t = 0; t < n; ++t)
            coeff_l.push_back(stage1[t].coeff(l));
        Stage2Result s2 = decode_stage2(coeff_l, group_points);
        noise.push_back(std::move(s2.noise_constant));
        grid.push_back(std::move(s2.block_products));
    }
    return RecoveredProduct{assemble_product(grid), std::move(consumed), read,
                            std::move(noise)};
}

} // namespace ppc
