#include "holofourier/quadrature.hpp"

#include "holofourier/kernels.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace hf {

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    if (n < 1) throw input_error("gauss_legendre: need at least one node");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const double xm = 0.5 * (a + b);
    const double xl = 0.5 * (b - a);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // x descends from +1; store ascending over [a, b].
        nodes[static_cast<std::size_t>(i)] = xm - xl * x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = xm + xl * x;
        double w = 2.0 * xl / ((1.0 - x * x) * dp * dp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

namespace {

TorusFactorGrid make_torus_angular(int n_theta, double weight_each) {
    TorusFactorGrid t;
    t.theta.resize(static_cast<std::size_t>(n_theta));
    t.unit.resize(static_cast<std::size_t>(n_theta));
    for (int i = 0; i < n_theta; ++i) {
        double th = 2.0 * kPi * i / n_theta;
        t.theta[static_cast<std::size_t>(i)] = th;
        t.unit[static_cast<std::size_t>(i)] = cplx(std::cos(th), std::sin(th));
    }
    t.theta_weight = weight_each;
    return t;
}

void fill_su2_euler(SL2FactorGrid& s, int resolution) {
    const int na = resolution;
    const int nb = resolution;
    const int ng = 2 * resolution;
    std::vector<double> bn, bw;
    gauss_legendre(nb, 0.0, kPi, bn, bw);
    s.k.reserve(static_cast<std::size_t>(na * nb * ng));
    s.k_w.reserve(static_cast<std::size_t>(na * nb * ng));
    for (int ia = 0; ia < na; ++ia) {
        double alpha = 2.0 * kPi * ia / na;
        for (int ib = 0; ib < nb; ++ib) {
            double wb = bw[static_cast<std::size_t>(ib)] * std::sin(bn[static_cast<std::size_t>(ib)]) / 2.0;
            for (int ig = 0; ig < ng; ++ig) {
                double gamma = 4.0 * kPi * ig / ng;
                s.k.push_back(su2_euler(alpha, bn[static_cast<std::size_t>(ib)], gamma));
                s.k_w.push_back(wb / (na * ng));
            }
        }
    }
}

void fill_sphere_section(SL2FactorGrid& s, int resolution) {
    const int na = resolution;
    const int nb = resolution;
    std::vector<double> bn, bw;
    gauss_legendre(nb, 0.0, kPi, bn, bw);
    for (int ia = 0; ia < na; ++ia) {
        double alpha = 2.0 * kPi * ia / na;
        for (int ib = 0; ib < nb; ++ib) {
            double wb = bw[static_cast<std::size_t>(ib)] * std::sin(bn[static_cast<std::size_t>(ib)]) / 2.0;
            s.q.push_back(su2_euler(alpha, bn[static_cast<std::size_t>(ib)], 0.0));
            s.q_w.push_back(wb / na);
        }
    }
}

double sinh2_2s(double s) {
    double sh = std::sinh(2.0 * s);
    return sh * sh;
}

}  // namespace

// Axis order per factor: torus -> [S, Theta]; SL2 -> [Q, S, K]. K-grids use
// the compact axes only. The last axis varies fastest.
GridWalker::GridWalker(const QuadratureGrid& grid) : g_(&grid) {
    const auto& factors = grid.spec.factors();
    ax_ts_.assign(factors.size(), -1);
    ax_tt_.assign(factors.size(), -1);
    ax_sq_.assign(factors.size(), -1);
    ax_ss_.assign(factors.size(), -1);
    ax_sk_.assign(factors.size(), -1);
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const FactorGrid& fg = grid.factors[f];
        if (factors[f] == FactorKind::Torus) {
            if (grid.domain == GridDomain::G) {
                ax_ts_[f] = static_cast<int>(axes_.size());
                axes_.push_back({Axis::TorusS, f, fg.torus.s.size()});
            }
            ax_tt_[f] = static_cast<int>(axes_.size());
            axes_.push_back({Axis::TorusTheta, f, fg.torus.theta.size()});
        } else {
            if (grid.domain == GridDomain::G) {
                ax_sq_[f] = static_cast<int>(axes_.size());
                axes_.push_back({Axis::SL2Q, f, fg.sl2.q.size()});
                ax_ss_[f] = static_cast<int>(axes_.size());
                axes_.push_back({Axis::SL2S, f, fg.sl2.s.size()});
            }
            ax_sk_[f] = static_cast<int>(axes_.size());
            axes_.push_back({Axis::SL2K, f, fg.sl2.k.size()});
        }
    }
    count_ = 1;
    for (const Axis& a : axes_) count_ *= a.size;
    idx_.assign(axes_.size(), 0);
    elem_.spec = grid.spec;
    elem_.torus.assign(static_cast<std::size_t>(grid.spec.n_torus()), cplx(1, 0));
    elem_.sl2.assign(static_cast<std::size_t>(grid.spec.n_sl2()), Mat2::Identity());
    radial_.assign(grid.spec.n_factors(), 0.0);
    qa_.assign(static_cast<std::size_t>(grid.spec.n_sl2()), Mat2::Identity());
    custom_density_ = grid.domain == GridDomain::G && !grid.measure.is_radial();
    refresh(0);
}

double GridWalker::weight() const {
    double w = 1.0;
    for (std::size_t j = 0; j < axes_.size(); ++j) w *= axis_weight(j);
    if (g_->domain == GridDomain::G) w *= std::exp(log_rho_);
    return w;
}

bool GridWalker::next() {
    std::size_t ax = axes_.size();
    while (ax > 0) {
        --ax;
        if (++idx_[ax] < axes_[ax].size) {
            refresh(ax);
            return true;
        }
        idx_[ax] = 0;
        if (ax == 0) return false;
    }
    return false;
}

void GridWalker::seek(std::size_t node) {
    for (std::size_t j = axes_.size(); j > 0; --j) {
        std::size_t sz = axes_[j - 1].size;
        idx_[j - 1] = node % sz;
        node /= sz;
    }
    refresh(0);
}

std::string GridWalker::describe() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t j = 0; j < idx_.size(); ++j) os << (j ? "," : "") << idx_[j];
    os << "]";
    return os.str();
}

double GridWalker::axis_weight(std::size_t j) const {
    const Axis& a = axes_[j];
    const FactorGrid& fg = g_->factors[a.factor];
    switch (a.type) {
        case Axis::TorusS: return fg.torus.s_w[idx_[j]];
        case Axis::TorusTheta: return fg.torus.theta_weight;
        case Axis::SL2Q: return fg.sl2.q_w[idx_[j]];
        case Axis::SL2S: return fg.sl2.s_w[idx_[j]];
        case Axis::SL2K: return fg.sl2.k_w[idx_[j]];
    }
    return 0;
}

void GridWalker::refresh(std::size_t from) {
    bool rho_dirty = custom_density_;
    for (std::size_t j = from; j < axes_.size(); ++j) {
        const Axis& a = axes_[j];
        const FactorGrid& fg = g_->factors[a.factor];
        std::size_t slot = static_cast<std::size_t>(g_->spec.slot(a.factor));
        switch (a.type) {
            case Axis::TorusS:
                radial_[a.factor] = std::abs(fg.torus.s[idx_[j]]);
                rho_dirty = true;
                break;
            case Axis::TorusTheta: {
                double es =
                    g_->domain == GridDomain::G ? fg.torus.exp_s[torus_s_index(a.factor)] : 1.0;
                elem_.torus[slot] = es * fg.torus.unit[idx_[j]];
                break;
            }
            case Axis::SL2Q:
                break;  // folded into SL2S below
            case Axis::SL2S:
                radial_[a.factor] = fg.sl2.s[idx_[j]];
                rho_dirty = true;
                qa_[slot] = fg.sl2.q[sl2_q_index(a.factor)] * cartan_a(fg.sl2.s[idx_[j]]);
                break;
            case Axis::SL2K:
                elem_.sl2[slot] = g_->domain == GridDomain::G
                                      ? Mat2(qa_[slot] * fg.sl2.k[idx_[j]])
                                      : fg.sl2.k[idx_[j]];
                break;
        }
    }
    if (g_->domain == GridDomain::G && rho_dirty) {
        log_rho_ = custom_density_ ? g_->measure.log_density(elem_)
                                   : g_->measure.log_density_radial(radial_);
    }
}

std::size_t QuadratureGrid::node_count() const { return GridWalker(*this).count(); }

QuadratureGrid k_grid(const GroupSpec& spec, int resolution) {
    if (resolution < 2) throw input_error("k_grid: resolution must be >= 2");
    QuadratureGrid g;
    g.domain = GridDomain::K;
    g.spec = spec;
    for (FactorKind kind : spec.factors()) {
        FactorGrid fg;
        fg.kind = kind;
        if (kind == FactorKind::Torus) {
            fg.torus = make_torus_angular(resolution, 1.0 / resolution);
        } else {
            fill_su2_euler(fg.sl2, resolution);
        }
        g.factors.push_back(std::move(fg));
    }
    return g;
}

QuadratureGrid g_grid(const GroupSpec& spec, const MeasureSpec& measure, double radial_cut,
                      int resolution, int radial_nodes) {
    if (radial_cut <= 0) throw input_error("g_grid: radial_cut must be > 0");
    if (resolution < 2) throw input_error("g_grid: resolution must be >= 2");
    if (radial_nodes <= 0) radial_nodes = std::max(96, 6 * resolution);
    QuadratureGrid g;
    g.domain = GridDomain::G;
    g.spec = spec;
    g.measure = measure;
    g.radial_cut = radial_cut;
    for (FactorKind kind : spec.factors()) {
        FactorGrid fg;
        fg.kind = kind;
        if (kind == FactorKind::Torus) {
            fg.torus = make_torus_angular(resolution, 2.0 * kPi / resolution);
            gauss_legendre(radial_nodes, -radial_cut, radial_cut, fg.torus.s, fg.torus.s_w);
            fg.torus.exp_s.resize(fg.torus.s.size());
            for (std::size_t i = 0; i < fg.torus.s.size(); ++i)
                fg.torus.exp_s[i] = std::exp(fg.torus.s[i]);
        } else {
            fill_sphere_section(fg.sl2, resolution);
            fill_su2_euler(fg.sl2, resolution);
            std::vector<double> sn, sw;
            gauss_legendre(radial_nodes, 0.0, radial_cut, sn, sw);
            fg.sl2.s = sn;
            fg.sl2.s_w.resize(sn.size());
            for (std::size_t i = 0; i < sn.size(); ++i) fg.sl2.s_w[i] = sw[i] * sinh2_2s(sn[i]);
        }
        g.factors.push_back(std::move(fg));
    }

    // Mass-based truncation estimate: extend each factor's radial integral
    // past the cut and compare (radial densities only).
    if (measure.is_radial()) {
        double rel = 0;
        const auto& factors = spec.factors();
        for (std::size_t f = 0; f < factors.size(); ++f) {
            std::vector<double> n1, w1, n2, w2;
            gauss_legendre(64, factors[f] == FactorKind::Torus ? -radial_cut : 0.0, radial_cut, n1, w1);
            gauss_legendre(64, radial_cut, 2.0 * radial_cut + 4.0, n2, w2);
            auto dens1 = [&](double s) {
                std::vector<double> r(factors.size(), 0.0);
                r[f] = std::abs(s);
                return std::exp(measure.log_density_radial(r));
            };
            double in = 0, out = 0;
            for (std::size_t i = 0; i < n1.size(); ++i) {
                double jac = factors[f] == FactorKind::Torus ? 1.0 : sinh2_2s(n1[i]);
                in += w1[i] * jac * dens1(n1[i]);
            }
            for (std::size_t i = 0; i < n2.size(); ++i) {
                double jac = factors[f] == FactorKind::Torus ? 2.0 : sinh2_2s(n2[i]);
                out += w2[i] * jac * dens1(n2[i]);
            }
            if (in > 0) rel += out / in;
        }
        g.tail_estimate = rel;
        if (rel > 1e-8) {
            std::ostringstream os;
            os << "radial_cut " << radial_cut << " may be too small: relative mass tail "
               << rel;
            g.warnings.push_back(os.str());
        }
    }
    return g;
}

void for_each_node(const QuadratureGrid& grid,
                   const std::function<void(std::size_t, const GroupElement&, double)>& fn) {
    GridWalker c(grid);
    std::size_t n = c.count();
    for (std::size_t i = 0; i < n; ++i) {
        fn(i, c.element(), c.weight());
        if (!c.next()) break;
    }
}

cplx integrate(const std::function<cplx(const GroupElement&)>& f, const QuadratureGrid& grid) {
    GridWalker c(grid);
    const std::size_t n = c.count();
    const std::size_t block = c.innermost_size();
    std::vector<cplx> vals(block);
    std::vector<double> ws(block);
    std::vector<cplx> partials;
    partials.reserve(n / block + 1);
    std::size_t fill = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx v = f(c.element());
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw numeric_error("integrate: non-finite integrand at node " + std::to_string(i) +
                                " idx " + c.describe());
        vals[fill] = v;
        ws[fill] = c.weight();
        ++fill;
        if (fill == block) {
            partials.push_back(kernels::weighted_sum(ws.data(), vals.data(), fill));
            fill = 0;
        }
        if (!c.next()) break;
    }
    if (fill > 0) partials.push_back(kernels::weighted_sum(ws.data(), vals.data(), fill));
    return kernels::pairwise_sum(partials.data(), partials.size());
}

void export_grid_csv(const QuadratureGrid& grid, std::ostream& os, std::size_t max_rows) {
    os << "index";
    const auto& factors = grid.spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f] == FactorKind::Torus) {
            os << ",z" << f + 1 << "_re,z" << f + 1 << "_im";
        } else {
            for (const char* e : {"a", "b", "c", "d"})
                os << "," << e << f + 1 << "_re," << e << f + 1 << "_im";
        }
    }
    os << ",weight\n";
    os.precision(17);
    for_each_node(grid, [&](std::size_t i, const GroupElement& g, double w) {
        if (max_rows && i >= max_rows) return;
        os << i;
        for (std::size_t f = 0; f < factors.size(); ++f) {
            if (factors[f] == FactorKind::Torus) {
                os << "," << g.z(f).real() << "," << g.z(f).imag();
            } else {
                const Mat2& m = g.m(f);
                for (int r = 0; r < 2; ++r)
                    for (int cidx = 0; cidx < 2; ++cidx)
                        os << "," << m(r, cidx).real() << "," << m(r, cidx).imag();
            }
        }
        os << "," << w << "\n";
    });
}

}  // namespace hf
