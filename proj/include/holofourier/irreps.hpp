#pragma once

#include "holofourier/group.hpp"

#include <Eigen/Dense>

namespace hf {

using MatX = Eigen::MatrixXcd;

/// Holomorphic irreducible representation of the product group: an integer
/// weight per factor. Torus factor n in Z is the character z -> z^n; SL2
/// factor m >= 0 is the m-th symmetric power of the standard representation.
struct IrrepLabel {
    std::vector<int> weights;

    bool operator==(const IrrepLabel& o) const { return weights == o.weights; }
    bool operator<(const IrrepLabel& o) const { return weights < o.weights; }
};

int irrep_dim(const GroupSpec& spec, const IrrepLabel& label);

/// All labels with |n| <= cutoff (torus) and 0 <= m <= cutoff (SL2).
/// Order: odometer over factors with the last factor varying fastest; torus
/// weights ascend from -cutoff, SL2 weights ascend from 0.
std::vector<IrrepLabel> enumerate_irreps(const GroupSpec& spec, int cutoff);

/// Matrix of the representation in the fixed orthonormal basis. For an SL2
/// factor of weight m the basis is the monomials x^(m-j) y^j, j = 0..m,
/// scaled by sqrt(binom(m,j)) so the SU(2) restriction is unitary; the
/// weight-1 matrix is the group element itself. Factors combine by Kronecker
/// product in factor order (row-major index convention).
MatX rep_matrix(const GroupSpec& spec, const IrrepLabel& label, const GroupElement& g);

/// Contragredient: transpose of rep_matrix at the inverse element.
MatX contragredient_matrix(const GroupSpec& spec, const IrrepLabel& label, const GroupElement& g);

cplx character(const GroupSpec& spec, const IrrepLabel& label, const GroupElement& g);

/// Derived representation: d/dt rep_matrix(label, exp(tX)) at t = 0.
MatX rep_lie(const GroupSpec& spec, const IrrepLabel& label, const LieAlgElement& X);

/// Left- or right-invariant differential operator as an element of the
/// universal enveloping algebra: a sum of coefficient * ordered monomials in
/// the lie_basis generators (empty monomial = identity).
struct InvariantOperator {
    enum class Side { Left, Right };
    struct Term {
        cplx coeff;
        std::vector<int> monomial;  // indices into lie_basis(spec)
    };
    Side side = Side::Left;
    std::vector<Term> terms;
};

/// Image of the operator under the representation: sum of coeff times the
/// product of rep_lie matrices in monomial (left-to-right) order.
MatX rep_operator(const GroupSpec& spec, const IrrepLabel& label, const InvariantOperator& op);

/// Symmetric-power matrix of a single 2x2 coordinate (weight m), in the
/// orthonormal monomial basis described at rep_matrix.
MatX sym_power(int m, const Mat2& g);

}  // namespace hf
