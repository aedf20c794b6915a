#pragma once

#include "holofourier/transform.hpp"

namespace hf {

/// Matrix exponential by scaling-and-squaring with a Taylor core; intended
/// for the small d_pi x d_pi matrices of this library.
MatX expm(const MatX& A);

struct ClassCheck {
    bool pass = false;
    double max_residual = 0;
};

/// Checks |f(gh) - f(hg)| <= tol on deterministic random pairs.
ClassCheck is_class_function(const HoloFn& f, const GroupSpec& spec, int samples, double tol,
                             std::uint64_t seed = 4242);

/// Character expansion of a holomorphic class function:
/// a_pi = (d_pi / C_pi) int f conj(chi_pi) dmu = d_pi tr fhat(pi).
struct ClassExpansion {
    GroupSpec spec;
    int cutoff = 0;
    struct Entry {
        IrrepLabel label;
        cplx a;
    };
    std::vector<Entry> entries;
    double class_residual = 0;        // from the is_class_function gate
    double reconstruction_residual = 0;  // max |sum a chi - f| at sample points
};

ClassExpansion class_expand(const HoloFn& f, const MeasureSpec& measure, int cutoff,
                            const QuadratureGrid& grid, double class_tol = 1e-6);

/// Spectral solution state of d/dt f_t = D f_t: per label the matrix
/// pi(D) and the propagated e^{t pi(D)} fhat0(pi) for the requested times.
struct EvolutionState {
    GroupSpec spec;
    InvariantOperator op;
    FourierData initial;
    std::vector<double> times;
    std::vector<MatX> op_matrices;               // per label, pi(D)
    std::vector<std::vector<MatX>> propagated;   // [time][label]

    /// f_t(g) at a stored time index.
    cplx eval(std::size_t time_index, const GroupElement& g) const;
    /// f_t(g) at an arbitrary time (exponentials computed on the fly).
    cplx eval_at(double t, const GroupElement& g) const;
};

/// Left-invariant evolution via the transform; rejects right-invariant
/// operators. Throws numeric_error naming the label on exponential overflow.
EvolutionState evolve(const HoloFn& f0, const InvariantOperator& D,
                      const std::vector<double>& times, const MeasureSpec& measure, int cutoff,
                      const QuadratureGrid& grid);

/// |d/dt f_t - D f_t| at (t, g), both sides by central differences
/// (dt in time, h along the one-parameter subgroups).
double evolve_check(const EvolutionState& state, double t, const GroupElement& g,
                    double dt = 1e-4, double h = 1e-3);

/// Finite-difference application of an invariant operator: left-invariant
/// monomials displace g on the right (g exp(hX)), right-invariant ones on
/// the left.
cplx apply_operator_fd(const std::function<cplx(const GroupElement&)>& f, const GroupSpec& spec,
                       const InvariantOperator& D, const GroupElement& g, double h = 1e-3);

}  // namespace hf
