#pragma once

#include <vector>

#include "ppc/blockmat.hpp"

namespace ppc {

// Polynomial with matrix coefficients; coeffs[l] multiplies x^l.
class PolyCoeffs {
  public:
    explicit PolyCoeffs(std::vector<BlockMatrix> coeffs);

    std::size_t size() const { return coeffs_.size(); }
    const BlockMatrix& coeff(std::size_t l) const { return coeffs_[l]; }
    const std::vector<BlockMatrix>& coeffs() const { return coeffs_; }

  private:
    std::vector<BlockMatrix> coeffs_;
};

// Horner evaluation of sum_l coeffs[l] * point^l.
BlockMatrix eval_poly(const PolyCoeffs& poly, FieldElement point);

// For each input point i, the coefficient vector of its Lagrange basis
// polynomial L_i(x): weights[i][j] is the x^j coefficient. Computed once per
// point set and applied linearly to matrix values.
std::vector<std::vector<FieldElement>> lagrange_basis_coeffs(
    const Field& field, const std::vector<FieldElement>& points);

// Unique polynomial of degree < |points| with eval_poly(result, points[i]) ==
// values[i]. Throws SingularError on duplicate points, ShapeError on
// mismatched value shapes.
PolyCoeffs interpolate(const std::vector<FieldElement>& points,
                       const std::vector<BlockMatrix>& values);

} // namespace ppc
