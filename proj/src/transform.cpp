#include "holofourier/transform.hpp"

#include "holofourier/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace hf {

namespace {

// --------------------------------------------------------------------------
// Shared label sweep: walks a G-grid once, producing for every node the
// representation matrices of all requested labels (row-major buffers).
// Per-axis data (rep of every k node, of every sphere-section node, torus
// character powers) is prepared up front; per node only one small matrix
// product per SL2 factor and a Kronecker assembly remain.
// --------------------------------------------------------------------------

struct TorusLabelCache {
    int n = 0;
    std::vector<cplx> theta_pow;  // unit^n per angular node
    std::vector<double> s_pow;    // e^{n s} per radial node
};

struct SL2LabelCache {
    int m = 0, d = 1;
    std::vector<cplx> q_mats;  // q_count x d^2
    std::vector<cplx> k_mats;  // k_count x d^2
    std::vector<double> mu;    // weights m - 2j
};

struct LabelPlan {
    IrrepLabel label;
    int d = 1;
    std::vector<TorusLabelCache> torus;  // by torus slot
    std::vector<SL2LabelCache> sl2;      // by sl2 slot
};

cplx pow_int_c(cplx z, int n) {
    if (n < 0) {
        z = 1.0 / z;
        n = -n;
    }
    cplx r(1.0, 0.0);
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

LabelPlan build_plan(const QuadratureGrid& grid, const IrrepLabel& label) {
    const GroupSpec& spec = grid.spec;
    LabelPlan plan;
    plan.label = label;
    plan.d = irrep_dim(spec, label);
    const auto& factors = spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const FactorGrid& fg = grid.factors[f];
        if (factors[f] == FactorKind::Torus) {
            TorusLabelCache tc;
            tc.n = label.weights[f];
            tc.theta_pow.resize(fg.torus.unit.size());
            for (std::size_t t = 0; t < fg.torus.unit.size(); ++t)
                tc.theta_pow[t] = pow_int_c(fg.torus.unit[t], tc.n);
            tc.s_pow.resize(fg.torus.s.size());
            for (std::size_t si = 0; si < fg.torus.s.size(); ++si)
                tc.s_pow[si] = std::exp(tc.n * fg.torus.s[si]);
            plan.torus.push_back(std::move(tc));
        } else {
            SL2LabelCache sc;
            sc.m = label.weights[f];
            sc.d = sc.m + 1;
            sc.mu.resize(static_cast<std::size_t>(sc.d));
            for (int j = 0; j <= sc.m; ++j)
                sc.mu[static_cast<std::size_t>(j)] = static_cast<double>(sc.m - 2 * j);
            auto pack = [&](const std::vector<Mat2>& nodes, std::vector<cplx>& out) {
                std::size_t dd = static_cast<std::size_t>(sc.d) * static_cast<std::size_t>(sc.d);
                out.resize(nodes.size() * dd);
                for (std::size_t t = 0; t < nodes.size(); ++t) {
                    MatX M = sym_power(sc.m, nodes[t]);
                    for (int u = 0; u < sc.d; ++u)
                        for (int v = 0; v < sc.d; ++v)
                            out[t * dd + static_cast<std::size_t>(u * sc.d + v)] = M(u, v);
                }
            };
            pack(fg.sl2.q, sc.q_mats);
            pack(fg.sl2.k, sc.k_mats);
            plan.sl2.push_back(std::move(sc));
        }
    }
    return plan;
}

/// Mutable per-range state for one label.
struct LabelState {
    struct SL2State {
        std::vector<cplx> P;  // current rep(q) * rep(a_s)
        std::vector<cplx> M;  // P * rep(k)
        std::size_t qi = static_cast<std::size_t>(-1);
        std::size_t si = static_cast<std::size_t>(-1);
    };
    std::vector<SL2State> sl2;
    std::vector<cplx> node_rep;  // d x d row-major
    std::vector<cplx> scratch;   // Kronecker assembly
};

LabelState make_state(const LabelPlan& plan) {
    LabelState st;
    st.sl2.resize(plan.sl2.size());
    for (std::size_t i = 0; i < plan.sl2.size(); ++i) {
        std::size_t dd = static_cast<std::size_t>(plan.sl2[i].d) * static_cast<std::size_t>(plan.sl2[i].d);
        st.sl2[i].P.assign(dd, cplx(0, 0));
        st.sl2[i].M.assign(dd, cplx(0, 0));
    }
    std::size_t dd = static_cast<std::size_t>(plan.d) * static_cast<std::size_t>(plan.d);
    st.node_rep.assign(dd, cplx(0, 0));
    st.scratch.assign(dd, cplx(0, 0));
    return st;
}

void matmul(const cplx* A, const cplx* B, cplx* C, int d) {
    for (int u = 0; u < d; ++u) {
        for (int v = 0; v < d; ++v) {
            cplx s(0, 0);
            for (int t = 0; t < d; ++t) s += A[u * d + t] * B[t * d + v];
            C[u * d + v] = s;
        }
    }
}

/// Fills st.node_rep with the current node's representation matrix.
void compute_node_rep(const QuadratureGrid& grid, const LabelPlan& plan, LabelState& st,
                      const GridWalker& w) {
    const GroupSpec& spec = grid.spec;
    const auto& factors = spec.factors();
    cplx scalar(1.0, 0.0);
    std::size_t sl2_seen = 0;
    // First pass: torus scalar and per-SL2 current matrices.
    for (std::size_t f = 0; f < factors.size(); ++f) {
        std::size_t slot = static_cast<std::size_t>(spec.slot(f));
        if (factors[f] == FactorKind::Torus) {
            const TorusLabelCache& tc = plan.torus[slot];
            scalar *= tc.theta_pow[w.torus_theta_index(f)] * tc.s_pow[w.torus_s_index(f)];
        } else {
            const SL2LabelCache& sc = plan.sl2[slot];
            LabelState::SL2State& ss = st.sl2[slot];
            std::size_t qi = w.sl2_q_index(f);
            std::size_t si = w.sl2_s_index(f);
            std::size_t ki = w.sl2_k_index(f);
            std::size_t dd = static_cast<std::size_t>(sc.d) * static_cast<std::size_t>(sc.d);
            if (qi != ss.qi || si != ss.si) {
                double s = grid.factors[f].sl2.s[si];
                const cplx* qm = sc.q_mats.data() + qi * dd;
                for (int u = 0; u < sc.d; ++u)
                    for (int v = 0; v < sc.d; ++v)
                        ss.P[static_cast<std::size_t>(u * sc.d + v)] =
                            qm[u * sc.d + v] * std::exp(sc.mu[static_cast<std::size_t>(v)] * s);
                ss.qi = qi;
                ss.si = si;
            }
            matmul(ss.P.data(), sc.k_mats.data() + ki * dd, ss.M.data(), sc.d);
            ++sl2_seen;
        }
    }
    // Second pass: Kronecker-combine in factor order.
    if (sl2_seen == 0) {
        st.node_rep[0] = scalar;
        return;
    }
    if (sl2_seen == 1) {
        // Common case: a single SL2 factor (possibly with torus factors).
        const LabelState::SL2State& ss = st.sl2[0];
        std::size_t dd = st.node_rep.size();
        for (std::size_t i = 0; i < dd; ++i) st.node_rep[i] = scalar * ss.M[i];
        return;
    }
    // General case: iterate Kronecker products through two buffers.
    st.scratch[0] = scalar;
    cplx* cur = st.scratch.data();
    cplx* nxt = st.node_rep.data();
    int cur_d = 1;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f] != FactorKind::SL2) continue;
        std::size_t slot = static_cast<std::size_t>(spec.slot(f));
        const LabelState::SL2State& ss = st.sl2[slot];
        int fd = plan.sl2[slot].d;
        int nd = cur_d * fd;
        for (int ur = 0; ur < cur_d; ++ur)
            for (int vr = 0; vr < cur_d; ++vr) {
                cplx base = cur[ur * cur_d + vr];
                for (int uf = 0; uf < fd; ++uf)
                    for (int vf = 0; vf < fd; ++vf)
                        nxt[(ur * fd + uf) * nd + (vr * fd + vf)] =
                            base * ss.M[static_cast<std::size_t>(uf * fd + vf)];
            }
        std::swap(cur, nxt);
        cur_d = nd;
    }
    if (cur != st.node_rep.data())
        std::copy(cur, cur + st.node_rep.size(), st.node_rep.data());
}

/// Grid-consistent normalization: sum over the grid's radial axes of the
/// measure density times the exact K-averages. Equals the full-grid sum of
/// ||pi(g)||^2 because the Frobenius norm is constant along compact axes.
std::vector<double> grid_normalizations(const QuadratureGrid& grid,
                                        const std::vector<IrrepLabel>& labels) {
    const GroupSpec& spec = grid.spec;
    const auto& factors = spec.factors();
    // Collect radial axes.
    std::vector<std::size_t> rfactor;
    std::vector<const std::vector<double>*> rnodes;
    std::vector<const std::vector<double>*> rweights;
    double compact_mass = 1.0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const FactorGrid& fg = grid.factors[f];
        if (factors[f] == FactorKind::Torus) {
            rfactor.push_back(f);
            rnodes.push_back(&fg.torus.s);
            rweights.push_back(&fg.torus.s_w);
            compact_mass *= 2.0 * kPi;
        } else {
            rfactor.push_back(f);
            rnodes.push_back(&fg.sl2.s);
            rweights.push_back(&fg.sl2.s_w);  // includes sinh^2(2s)
        }
    }
    std::vector<double> C(labels.size(), 0.0);
    std::vector<std::size_t> idx(rfactor.size(), 0);
    std::vector<double> radial(factors.size(), 0.0);
    for (;;) {
        double w = compact_mass;
        for (std::size_t a = 0; a < rfactor.size(); ++a) {
            w *= (*rweights[a])[idx[a]];
            double s = (*rnodes[a])[idx[a]];
            radial[rfactor[a]] = std::abs(s);
        }
        double rho = std::exp(grid.measure.log_density_radial(radial));
        for (std::size_t li = 0; li < labels.size(); ++li) {
            double prod = 1.0;
            for (std::size_t a = 0; a < rfactor.size(); ++a) {
                double s = (*rnodes[a])[idx[a]];
                int wgt = labels[li].weights[rfactor[a]];
                if (factors[rfactor[a]] == FactorKind::Torus) {
                    prod *= std::exp(2.0 * wgt * s);
                } else {
                    double sum = 0;
                    for (int j = 0; j <= wgt; ++j) sum += std::exp(2.0 * (wgt - 2 * j) * s);
                    prod *= sum;
                }
            }
            C[li] += w * rho * prod;
        }
        std::size_t a = rfactor.size();
        bool done = true;
        while (a > 0) {
            --a;
            if (++idx[a] < rnodes[a]->size()) {
                done = false;
                break;
            }
            idx[a] = 0;
        }
        if (done) break;
    }
    return C;
}

constexpr std::size_t kSweepRanges = 16;

/// One sweep over the grid: fn(range, walker, node_index) per node, with the
/// grid split into kSweepRanges contiguous ranges (parallelizable; callers
/// merge per-range accumulators in range order).
void sweep_ranges(const QuadratureGrid& grid,
                  const std::function<void(std::size_t, const GridWalker&, std::size_t)>& fn) {
    std::size_t n = grid.node_count();
    std::size_t nranges = std::min<std::size_t>(kSweepRanges, std::max<std::size_t>(n, 1));
    parallel_blocks(nranges, [&](std::size_t r) {
        std::size_t lo = n * r / nranges;
        std::size_t hi = n * (r + 1) / nranges;
        if (lo >= hi) return;
        GridWalker w(grid);
        w.seek(lo);
        for (std::size_t i = lo; i < hi; ++i) {
            fn(r, w, i);
            if (i + 1 < hi) w.next();
        }
    });
}

double label_shell(const IrrepLabel& l) {
    int m = 0;
    for (int w : l.weights) m = std::max(m, std::abs(w));
    return m;
}

}  // namespace

const FourierData::Entry* FourierData::find(const IrrepLabel& label) const {
    for (const auto& e : entries)
        if (e.label == label) return &e;
    return nullptr;
}

cplx FourierData::lambda(const IrrepLabel& label, int i, int j) const {
    const Entry* e = find(label);
    if (!e) throw input_error("lambda: label not stored in FourierData");
    double d = static_cast<double>(irrep_dim(spec, label));
    return d * d * e->fhat(j, i);
}

FourierData fourier(const HoloFn& f, const MeasureSpec& measure, int cutoff,
                    const QuadratureGrid& grid, bool check_admissible) {
    if (grid.domain != GridDomain::G) throw input_error("fourier: grid must be a G-grid");
    if (cutoff < 0) throw input_error("fourier: cutoff must be >= 0");
    if (check_admissible) {
        AdmissibilityReport rep = verify_admissible(grid.spec, measure, cutoff, 1e-4, 16);
        if (!rep.pass)
            throw numeric_error("fourier: measure failed admissibility verification: " + rep.note);
    }

    const GroupSpec& spec = grid.spec;
    std::vector<IrrepLabel> labels = enumerate_irreps(spec, cutoff);
    std::vector<LabelPlan> plans;
    plans.reserve(labels.size());
    for (const auto& l : labels) plans.push_back(build_plan(grid, l));
    std::vector<double> Cgrid = grid_normalizations(grid, labels);

    // Per-range accumulators: ACC[u,v] = sum w f(g) conj(rep[u,v]);
    // fhat = ACC^T / C.
    std::vector<std::vector<std::vector<cplx>>> acc(kSweepRanges);
    std::vector<std::vector<LabelState>> states(kSweepRanges);
    for (std::size_t r = 0; r < kSweepRanges; ++r) {
        acc[r].resize(labels.size());
        states[r].reserve(labels.size());
        for (std::size_t li = 0; li < labels.size(); ++li) {
            std::size_t dd = static_cast<std::size_t>(plans[li].d) * static_cast<std::size_t>(plans[li].d);
            acc[r][li].assign(dd, cplx(0, 0));
            states[r].push_back(make_state(plans[li]));
        }
    }

    sweep_ranges(grid, [&](std::size_t r, const GridWalker& w, std::size_t i) {
        cplx fv = f(w.element());
        if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag()))
            throw numeric_error("fourier: non-finite integrand at node " + std::to_string(i) +
                                " idx " + w.describe());
        cplx c = w.weight() * fv;
        for (std::size_t li = 0; li < labels.size(); ++li) {
            LabelState& st = states[r][li];
            compute_node_rep(grid, plans[li], st, w);
            kernels::conj_scaled_accum(acc[r][li].data(), c, st.node_rep.data(),
                                       st.node_rep.size());
        }
    });

    FourierData out;
    out.spec = spec;
    out.measure = measure;
    out.cutoff = cutoff;
    out.grid_tail_estimate = grid.tail_estimate;
    for (std::size_t li = 0; li < labels.size(); ++li) {
        int d = plans[li].d;
        MatX m = MatX::Zero(d, d);
        for (std::size_t r = 0; r < kSweepRanges; ++r)
            for (int u = 0; u < d; ++u)
                for (int v = 0; v < d; ++v)
                    m(u, v) += acc[r][li][static_cast<std::size_t>(u * d + v)];
        FourierData::Entry e;
        e.label = labels[li];
        e.fhat = m.transpose() / Cgrid[li];
        e.norm_constant = Cgrid[li];
        e.tail_estimate = grid.tail_estimate;
        out.entries.push_back(std::move(e));
    }

    // Series-tail heuristic: ratio test on the last three weight shells of
    // max ||fhat||_F (a policy, reported but not certified).
    std::map<int, double> shell_norm;
    for (const auto& e : out.entries) {
        int s = static_cast<int>(label_shell(e.label));
        double n = e.fhat.norm();
        auto it = shell_norm.find(s);
        if (it == shell_norm.end() || it->second < n) shell_norm[s] = n;
    }
    if (shell_norm.size() >= 3) {
        auto it = shell_norm.rbegin();
        double h3 = it->second;
        ++it;
        double h2 = it->second;
        ++it;
        double h1 = it->second;
        double r = 0;
        if (h2 > 0 && h1 > 0) r = std::max(h3 / h2, h2 / h1);
        if (r > 0 && r < 0.999) {
            out.series_tail_estimate = h3 * r / (1.0 - r);
        } else if (h3 == 0.0) {
            out.series_tail_estimate = 0.0;
        } else {
            out.series_tail_estimate = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

cplx invert(const FourierData& F, const GroupElement& g) {
    if (g.spec != F.spec) throw input_error("invert: element from a different group");
    cplx sum(0, 0);
    for (const auto& e : F.entries) {
        double d = static_cast<double>(e.fhat.rows());
        MatX rep = rep_matrix(F.spec, e.label, g);
        sum += d * d * (e.fhat * rep).trace();
    }
    return sum;
}

cplx plancherel_eval(const FourierData& F) {
    cplx sum(0, 0);
    for (const auto& e : F.entries) {
        double d = static_cast<double>(e.fhat.rows());
        sum += d * d * e.fhat.trace();
    }
    return sum;
}

HoloFn translate(const HoloFn& f, const GroupElement& g, ActionSide side) {
    HoloFn out;
    if (side == ActionSide::Right) {
        out.fn = [f, g](const GroupElement& h) { return f(multiply(h, g)); };
        out.name = "R[" + f.name + "]";
    } else {
        GroupElement ginv = inverse(g);
        out.fn = [f, ginv](const GroupElement& h) { return f(multiply(ginv, h)); };
        out.name = "L[" + f.name + "]";
    }
    return out;
}

GramReport ortho_check(const MeasureSpec& measure, int cutoff, const QuadratureGrid& grid) {
    if (grid.domain != GridDomain::G) throw input_error("ortho_check: grid must be a G-grid");
    const GroupSpec& spec = grid.spec;
    std::vector<IrrepLabel> labels = enumerate_irreps(spec, cutoff);
    std::vector<LabelPlan> plans;
    for (const auto& l : labels) plans.push_back(build_plan(grid, l));

    GramReport rep;
    std::vector<std::size_t> offset(labels.size());
    std::size_t m_total = 0;
    for (std::size_t li = 0; li < labels.size(); ++li) {
        offset[li] = m_total;
        int d = plans[li].d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) rep.functions.push_back({labels[li], i, j});
        m_total += static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    }

    std::vector<std::vector<cplx>> gram(kSweepRanges,
                                        std::vector<cplx>(m_total * m_total, cplx(0, 0)));
    std::vector<std::vector<LabelState>> states(kSweepRanges);
    std::vector<std::vector<cplx>> values(kSweepRanges, std::vector<cplx>(m_total));
    for (std::size_t r = 0; r < kSweepRanges; ++r)
        for (const auto& plan : plans) states[r].push_back(make_state(plan));

    sweep_ranges(grid, [&](std::size_t r, const GridWalker& w, std::size_t) {
        cplx* v = values[r].data();
        for (std::size_t li = 0; li < labels.size(); ++li) {
            LabelState& st = states[r][li];
            compute_node_rep(grid, plans[li], st, w);
            std::copy(st.node_rep.begin(), st.node_rep.end(), v + offset[li]);
        }
        double wt = w.weight();
        // G[i,j] += w v_i conj(v_j)
        for (std::size_t i = 0; i < m_total; ++i)
            kernels::conj_scaled_accum(gram[r].data() + i * m_total, wt * v[i], v, m_total);
    });

    rep.gram = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m_total),
                                      static_cast<Eigen::Index>(m_total));
    for (std::size_t r = 0; r < kSweepRanges; ++r)
        for (std::size_t i = 0; i < m_total; ++i)
            for (std::size_t j = 0; j < m_total; ++j)
                rep.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    gram[r][i * m_total + j];

    rep.expected_diag.resize(m_total);
    for (std::size_t li = 0; li < labels.size(); ++li) {
        double C = normalization(spec, measure, labels[li]).value;
        int d = plans[li].d;
        for (int k = 0; k < d * d; ++k)
            rep.expected_diag[offset[li] + static_cast<std::size_t>(k)] =
                C / (static_cast<double>(d) * static_cast<double>(d));
    }

    for (std::size_t i = 0; i < m_total; ++i) {
        double gii = rep.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        double expct = rep.expected_diag[i];
        rep.max_diag_rel_err =
            std::max(rep.max_diag_rel_err, std::abs(gii - expct) / std::abs(expct));
        for (std::size_t j = 0; j < m_total; ++j) {
            if (i == j) continue;
            double gjj =
                rep.gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
            double off = std::abs(rep.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            rep.max_offdiag_rel = std::max(rep.max_offdiag_rel, off / std::sqrt(gii * gjj));
        }
    }
    return rep;
}

double default_radial_cut(const GroupSpec& spec, const MeasureSpec& measure, int cutoff) {
    const auto& factors = spec.factors();
    double cut = 2.0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        double tau = measure.kind == MeasureSpec::Kind::GaussianRadial ? measure.tau[f] : 1.0;
        double growth = factors[f] == FactorKind::Torus ? cutoff : cutoff + 2.0;
        cut = std::max(cut, tau * growth + 8.0 * std::sqrt(tau));
    }
    return cut;
}

}  // namespace hf
