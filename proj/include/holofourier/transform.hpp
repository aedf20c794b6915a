#pragma once

#include "holofourier/expr.hpp"
#include "holofourier/irreps.hpp"
#include "holofourier/measures.hpp"
#include "holofourier/quadrature.hpp"

namespace hf {

/// The holomorphic Fourier transform of f up to a weight cutoff:
/// fhat(pi) = (1/C_pi) int f(g) pi(g)* dmu(g), one matrix per label.
///
/// norm_constant is the grid-consistent C (the same radial nodes used for
/// the numerator), i.e. the transform is taken against the grid-truncated
/// measure -- itself K-bi-invariant and admissible, so by measure
/// independence the coefficients agree with the ideal ones whenever f's
/// mass beyond the cut is negligible.
struct FourierData {
    struct Entry {
        IrrepLabel label;
        MatX fhat;
        double norm_constant = 0;
        double tail_estimate = 0;
    };

    GroupSpec spec;
    MeasureSpec measure;
    int cutoff = 0;
    std::vector<Entry> entries;  // in enumerate_irreps order
    double series_tail_estimate = 0;
    double grid_tail_estimate = 0;

    const Entry* find(const IrrepLabel& label) const;
    /// Series coefficient view: lambda_{pi,ij} = d_pi^2 fhat(pi)_{ji}.
    cplx lambda(const IrrepLabel& label, int i, int j) const;
};

/// Computes the transform by one sweep over the grid (f evaluated once per
/// node, all labels accumulated). Runs verify_admissible on the measure up
/// to the cutoff first unless check_admissible is false.
FourierData fourier(const HoloFn& f, const MeasureSpec& measure, int cutoff,
                    const QuadratureGrid& grid, bool check_admissible = true);

/// Partial inversion sum over the stored labels:
/// sum d_pi^2 tr(fhat(pi) pi(g)).
cplx invert(const FourierData& F, const GroupElement& g);

/// f(e) = sum d_pi^2 tr(fhat(pi)); equals invert at the identity.
cplx plancherel_eval(const FourierData& F);

enum class ActionSide { Right, Left };

/// Right: h -> f(h g); Left: h -> f(g^-1 h).
HoloFn translate(const HoloFn& f, const GroupElement& g, ActionSide side);

/// Gram matrix of all matrix elements pi_ij up to the cutoff under the
/// measure's inner product. Diagonal should equal C_pi / d_pi^2 and
/// off-diagonal entries vanish (the orthogonality relations).
struct GramReport {
    struct FunctionId {
        IrrepLabel label;
        int i = 0, j = 0;
    };
    std::vector<FunctionId> functions;
    Eigen::MatrixXcd gram;
    std::vector<double> expected_diag;  // true C / d^2 per function
    double max_offdiag_rel = 0;  // |G_ij| / sqrt(G_ii G_jj), i != j
    double max_diag_rel_err = 0;
};

GramReport ortho_check(const MeasureSpec& measure, int cutoff, const QuadratureGrid& grid);

/// Suggested truncation radius for full-mass integrals up to the cutoff
/// (Gaussian measures: covers the peak of every |pi|^2 rho integrand).
double default_radial_cut(const GroupSpec& spec, const MeasureSpec& measure, int cutoff);

}  // namespace hf
