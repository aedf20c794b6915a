#pragma once

#include "holofourier/common.hpp"

#include <Eigen/Dense>

#include <memory>
#include <utility>
#include <vector>

namespace hf {

using Mat2 = Eigen::Matrix2cd;

enum class FactorKind { Torus, SL2 };

/// A finite product of C* and SL(2,C) factors. Immutable; copies share the
/// factor list, so elements can carry their spec by value cheaply.
class GroupSpec {
public:
    GroupSpec() = default;
    explicit GroupSpec(std::vector<FactorKind> factors);

    static GroupSpec torus(int rank);
    static GroupSpec sl2(int copies = 1);

    const std::vector<FactorKind>& factors() const { return *factors_; }
    std::size_t n_factors() const { return factors_ ? factors_->size() : 0; }
    int complex_dim() const;
    /// Index of factor f within the coordinate vector of its kind.
    int slot(std::size_t f) const { return (*slots_)[f]; }
    int n_torus() const { return n_torus_; }
    int n_sl2() const { return n_sl2_; }

    bool operator==(const GroupSpec& o) const;
    bool operator!=(const GroupSpec& o) const { return !(*this == o); }

private:
    std::shared_ptr<const std::vector<FactorKind>> factors_;
    std::shared_ptr<const std::vector<int>> slots_;
    int n_torus_ = 0;
    int n_sl2_ = 0;
};

/// Element of the product group. Torus coordinates are nonzero complex
/// numbers; SL2 coordinates are renormalized to det 1 on construction.
struct GroupElement {
    GroupSpec spec;
    std::vector<cplx> torus;  // in torus-slot order
    std::vector<Mat2> sl2;    // in sl2-slot order

    const cplx& z(std::size_t factor) const { return torus[static_cast<std::size_t>(spec.slot(factor))]; }
    const Mat2& m(std::size_t factor) const { return sl2[static_cast<std::size_t>(spec.slot(factor))]; }
};

/// Tangent vector at the identity: per torus factor the coefficient of the
/// invariant field z d/dz, per SL2 factor a traceless 2x2 matrix.
struct LieAlgElement {
    GroupSpec spec;
    std::vector<cplx> torus;
    std::vector<Mat2> sl2;
};

/// Per-factor nonnegative radii: |log|z|| for torus factors, log of the
/// largest singular value for SL2 factors. K-bi-invariant and subadditive.
struct RadialPart {
    std::vector<double> s;
    double total() const {
        double t = 0;
        for (double v : s) t += v;
        return t;
    }
    double max() const {
        double t = 0;
        for (double v : s) t = v > t ? v : t;
        return t;
    }
};

GroupElement identity(const GroupSpec& spec);

/// Validating constructor: checks torus coordinates are nonzero and finite,
/// renormalizes SL2 coordinates to det 1 (rejects det ~ 0 or non-finite).
GroupElement make_element(const GroupSpec& spec, std::vector<cplx> torus, std::vector<Mat2> sl2);

GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);
RadialPart radial(const GroupElement& g);

/// g = k * p with k in the maximal compact (|z|=1 resp. SU(2)) and p the
/// positive part (positive real resp. positive-definite Hermitian, det 1).
std::pair<GroupElement, GroupElement> polar_split(const GroupElement& g);

/// Deterministic pseudo-random element with radial(g) <= radius in every
/// component. radius = 0 yields a random element of the maximal compact.
GroupElement sample_element(const GroupSpec& spec, std::uint64_t seed, double radius);

/// exp(t X) per factor.
GroupElement exp_lie(const LieAlgElement& X, double t);

/// Generators in the documented order: one per torus factor (coefficient 1),
/// then H, E, F per SL2 factor, factors in spec order.
std::vector<LieAlgElement> lie_basis(const GroupSpec& spec);

/// SU(2) from ZYZ Euler angles: exp(-i a s3/2) exp(-i b s2/2) exp(-i c s3/2).
Mat2 su2_euler(double alpha, double beta, double gamma);

/// diag(e^s, e^-s), the positive Cartan element of SL(2,C).
Mat2 cartan_a(double s);

}  // namespace hf
