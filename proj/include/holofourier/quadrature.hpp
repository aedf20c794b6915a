#pragma once

#include "holofourier/group.hpp"
#include "holofourier/measures.hpp"

namespace hf {

/// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

enum class GridDomain { K, G, KxK };

struct TorusFactorGrid {
    std::vector<double> theta;
    std::vector<cplx> unit;     // e^(i theta), cached
    double theta_weight = 0;    // 1/N on K-grids, 2*pi/N on G-grids
    std::vector<double> s;      // radial nodes (G only)
    std::vector<double> s_w;    // GL weights (torus Jacobian is 1)
    std::vector<double> exp_s;  // e^s, cached
};

struct SL2FactorGrid {
    std::vector<Mat2> k;  // SU(2) Euler grid
    std::vector<double> k_w;
    std::vector<Mat2> q;  // K/M section (sphere), G-grids only
    std::vector<double> q_w;
    std::vector<double> s;    // radial nodes on [0, cut]
    std::vector<double> s_w;  // GL weight times sinh^2(2s)
};

struct FactorGrid {
    FactorKind kind;
    TorusFactorGrid torus;
    SL2FactorGrid sl2;
};

/// Product-form quadrature grid. G-grids parametrize each SL2 factor as
/// q * a_s * k (the K x A x K integral reduces to (K/M) x A x K because M
/// centralizes A); node weights carry the Haar Jacobian and the measure's
/// radial density. Nodes enumerate in a fixed lexicographic axis order, so
/// every reduction over a grid is reproducible.
struct QuadratureGrid {
    GridDomain domain = GridDomain::K;
    GroupSpec spec;
    MeasureSpec measure;  // G-grids only
    std::vector<FactorGrid> factors;
    double radial_cut = 0;
    double tail_estimate = 0;  // relative mass beyond the radial cut
    std::vector<std::string> warnings;

    std::size_t node_count() const;
};

/// Normalized-Haar grid on the maximal compact: trapezoid nodes on each
/// U(1), a ZYZ Euler product grid on each SU(2) (uniform alpha, GL beta with
/// the sin beta density, uniform gamma over [0, 4 pi)); total weight 1.
QuadratureGrid k_grid(const GroupSpec& spec, int resolution);

/// Grid for integrals over G against a tame measure, truncated at
/// radial_cut per factor. resolution controls the angular/Euler node counts
/// (exact for K-frequencies below it); radial_nodes <= 0 picks a default.
QuadratureGrid g_grid(const GroupSpec& spec, const MeasureSpec& measure, double radial_cut,
                      int resolution, int radial_nodes = 0);

/// Sequential walk over a grid's nodes in canonical order. Exposes the
/// per-factor axis indices of the current node so sweeps can cache
/// node-independent data per axis value.
class GridWalker {
public:
    explicit GridWalker(const QuadratureGrid& grid);

    std::size_t count() const { return count_; }
    std::size_t innermost_size() const { return axes_.empty() ? 1 : axes_.back().size; }
    const GroupElement& element() const { return elem_; }
    double weight() const;
    bool next();
    /// Repositions to an absolute node index.
    void seek(std::size_t node);
    std::string describe() const;

    std::size_t torus_s_index(std::size_t f) const { return safe_idx(ax_ts_[f]); }
    std::size_t torus_theta_index(std::size_t f) const { return safe_idx(ax_tt_[f]); }
    std::size_t sl2_q_index(std::size_t f) const { return safe_idx(ax_sq_[f]); }
    std::size_t sl2_s_index(std::size_t f) const { return safe_idx(ax_ss_[f]); }
    std::size_t sl2_k_index(std::size_t f) const { return safe_idx(ax_sk_[f]); }

private:
    struct Axis {
        enum Type { TorusS, TorusTheta, SL2Q, SL2S, SL2K };
        Type type;
        std::size_t factor;
        std::size_t size;
    };

    std::size_t safe_idx(int ax) const { return ax < 0 ? 0 : idx_[static_cast<std::size_t>(ax)]; }
    double axis_weight(std::size_t j) const;
    void refresh(std::size_t from);

    const QuadratureGrid* g_;
    std::vector<Axis> axes_;
    std::vector<std::size_t> idx_;
    std::vector<int> ax_ts_, ax_tt_, ax_sq_, ax_ss_, ax_sk_;  // axis position by factor
    GroupElement elem_;
    std::vector<double> radial_;
    std::vector<Mat2> qa_;
    double log_rho_ = 0;
    bool custom_density_ = false;
    std::size_t count_ = 1;
};

/// Weighted sum of f over the grid with blocked pairwise reduction;
/// deterministic for a fixed grid. Throws numeric_error naming the node on
/// non-finite values.
cplx integrate(const std::function<cplx(const GroupElement&)>& f, const QuadratureGrid& grid);

/// Streams (node_index, element, weight) in canonical order. Used by the
/// transform sweeps; integrate() is built on top of it.
void for_each_node(const QuadratureGrid& grid,
                   const std::function<void(std::size_t, const GroupElement&, double)>& fn);

/// Writes "index,coordinates...,weight" rows for external validation.
void export_grid_csv(const QuadratureGrid& grid, std::ostream& os, std::size_t max_rows = 0);

}  // namespace hf
