#include "ppc/poly.hpp"

#include <string>

namespace ppc {

PolyCoeffs::PolyCoeffs(std::vector<BlockMatrix> coeffs)
    : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty())
        throw ShapeError("polynomial needs at least one coefficient");
    for (const auto& c : coeffs_) {
        if (c.rows() != coeffs_.front().rows() ||
            c.cols() != coeffs_.front().cols())
            throw ShapeError("coefficient matrices differ in shape");
        if (c.field() != coeffs_.front().field())
            throw FieldError("field mismatch between coefficients");
    }
}

BlockMatrix eval_poly(const PolyCoeffs& poly, FieldElement point) {
    BlockMatrix acc = poly.coeff(poly.size() - 1);
    for (std::size_t l = poly.size() - 1; l-- > 0;)
        acc = add(scale(acc, point), poly.coeff(l));
    return acc;
}

std::vector<std::vector<FieldElement>> lagrange_basis_coeffs(
    const Field& field, const std::vector<FieldElement>& points) {
    const std::size_t k = points.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (points[i] == points[j])
                throw SingularError("singular system: duplicate point " +
                                    std::to_string(points[i]));

    // master(x) = prod_i (x - points[i]), low-order first
    std::vector<FieldElement> master(k + 1, 0);
    master[0] = field.reduce(1);
    std::size_t deg = 0;
    for (FieldElement pt : points) {
        const FieldElement neg_pt = field.neg(pt);
        master[deg + 1] = master[deg];
        for (std::size_t j = deg; j > 0; --j)
            master[j] = field.add(field.mul(master[j], neg_pt), master[j - 1]);
        master[0] = field.mul(master[0], neg_pt);
        ++deg;
    }

    std::vector<std::vector<FieldElement>> weights(k);
    for (std::size_t i = 0; i < k; ++i) {
        // quotient(x) = master(x) / (x - points[i]) by synthetic division
        std::vector<FieldElement> quotient(k, 0);
        FieldElement carry = master[k];
        for (std::size_t j = k; j-- > 0;) {
            quotient[j] = carry;
            carry = field.add(master[j], field.mul(carry, points[i]));
        }
        // denominator = prod_{j != i} (points[i] - points[j]) = quotient(points[i])
        FieldElement denom = 0;
        for (std::size_t j = k; j-- > 0;)
            denom = field.add(field.mul(denom, points[i]), quotient[j]);
        const FieldElement w = field.inv(denom);
        for (auto& q : quotient)
            q = field.mul(q, w);
        weights[i] = std::move(quotient);
    }
    return weights;
}

PolyCoeffs interpolate(const std::vector<FieldElement>& points,
                       const std::vector<BlockMatrix>& values) {
    if (points.empty() || points.size() != values.size())
        throw ShapeError("interpolate: point and value counts differ");
    const Field& field = values.front().field();
    const std::size_t rows = values.front().rows();
    const std::size_t cols = values.front().cols();
    for (const auto& v : values) {
        if (v.rows() != rows || v.cols() != cols)
            throw ShapeError("interpolate: value matrices differ in shape");
        if (v.field() != field)
            throw FieldError("field mismatch between values");
    }

    const auto weights = lagrange_basis_coeffs(field, points);
    const std::size_t k = points.size();
    std::vector<BlockMatrix> coeffs(k, BlockMatrix(field, rows, cols));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const FieldElement w = weights[i][j];
            if (w == 0)
                continue;
            coeffs[j] = add(coeffs[j], scale(values[i], w));
        }
    }
    return PolyCoeffs(std::move(coeffs));
}

} // namespace ppc
