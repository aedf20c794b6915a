#include "holofourier/irreps.hpp"

#include <cmath>

namespace hf {

namespace {

constexpr int kMaxWeight = 64;

double binom(int n, int k) {
    static const auto table = [] {
        std::vector<std::vector<double>> t(kMaxWeight + 1);
        for (int i = 0; i <= kMaxWeight; ++i) {
            t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1.0);
            for (int j = 1; j < i; ++j)
                t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                    t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
        }
        return t;
    }();
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

cplx pow_int(cplx z, int n) {
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

void check_label(const GroupSpec& spec, const IrrepLabel& label) {
    if (label.weights.size() != spec.n_factors())
        throw input_error("irrep label does not match group spec");
    const auto& factors = spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        int w = label.weights[f];
        if (factors[f] == FactorKind::SL2 && w < 0)
            throw input_error("SL2 weight must be nonnegative");
        if (w > kMaxWeight || w < -kMaxWeight)
            throw input_error("irrep weight out of supported range");
    }
}

MatX kron(const MatX& a, const MatX& b) {
    MatX out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

int irrep_dim(const GroupSpec& spec, const IrrepLabel& label) {
    check_label(spec, label);
    int d = 1;
    const auto& factors = spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f)
        if (factors[f] == FactorKind::SL2) d *= label.weights[f] + 1;
    return d;
}

std::vector<IrrepLabel> enumerate_irreps(const GroupSpec& spec, int cutoff) {
    if (cutoff < 0) throw input_error("enumerate_irreps: cutoff must be >= 0");
    const auto& factors = spec.factors();
    std::vector<int> lo(factors.size()), hi(factors.size());
    for (std::size_t f = 0; f < factors.size(); ++f) {
        lo[f] = factors[f] == FactorKind::Torus ? -cutoff : 0;
        hi[f] = cutoff;
    }
    std::vector<IrrepLabel> out;
    std::vector<int> cur(lo);
    for (;;) {
        out.push_back(IrrepLabel{cur});
        std::size_t f = factors.size();
        while (f > 0) {
            --f;
            if (cur[f] < hi[f]) {
                ++cur[f];
                for (std::size_t g = f + 1; g < factors.size(); ++g) cur[g] = lo[g];
                break;
            }
            if (f == 0) return out;
        }
    }
}

MatX sym_power(int m, const Mat2& g) {
    const cplx a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
    MatX out = MatX::Zero(m + 1, m + 1);
    // Column j: expand (a x + c y)^(m-j) (b x + d y)^j; entry i is the
    // coefficient of x^(m-i) y^i, rescaled by the orthonormal basis factors.
    std::vector<cplx> p, q;
    for (int j = 0; j <= m; ++j) {
        p.assign(static_cast<std::size_t>(m - j) + 1, cplx(0, 0));
        for (int t = 0; t <= m - j; ++t)
            p[static_cast<std::size_t>(t)] = binom(m - j, t) * pow_int(a, m - j - t) * pow_int(c, t);
        q.assign(static_cast<std::size_t>(j) + 1, cplx(0, 0));
        for (int u = 0; u <= j; ++u)
            q[static_cast<std::size_t>(u)] = binom(j, u) * pow_int(b, j - u) * pow_int(d, u);
        double sj = std::sqrt(binom(m, j));
        for (int t = 0; t <= m - j; ++t)
            for (int u = 0; u <= j; ++u) {
                int i = t + u;
                out(i, j) += p[static_cast<std::size_t>(t)] * q[static_cast<std::size_t>(u)] * sj /
                             std::sqrt(binom(m, i));
            }
    }
    return out;
}

MatX rep_matrix(const GroupSpec& spec, const IrrepLabel& label, const GroupElement& g) {
    check_label(spec, label);
    if (g.spec != spec) throw input_error("rep_matrix: element from different group");
    MatX out = MatX::Ones(1, 1);
    const auto& factors = spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f] == FactorKind::Torus) {
            out *= pow_int(g.z(f), label.weights[f]);
        } else {
            MatX fm = sym_power(label.weights[f], g.m(f));
            out = out.size() == 1 ? MatX(out(0, 0) * fm) : kron(out, fm);
        }
    }
    return out;
}

MatX contragredient_matrix(const GroupSpec& spec, const IrrepLabel& label, const GroupElement& g) {
    return rep_matrix(spec, label, inverse(g)).transpose();
}

cplx character(const GroupSpec& spec, const IrrepLabel& label, const GroupElement& g) {
    return rep_matrix(spec, label, g).trace();
}

MatX rep_lie(const GroupSpec& spec, const IrrepLabel& label, const LieAlgElement& X) {
    check_label(spec, label);
    if (X.spec != spec) throw input_error("rep_lie: element from different group");
    // Derivation rule across the tensor product: sum over factors of
    // I x ... x L_f x ... x I.
    const auto& factors = spec.factors();
    int d = irrep_dim(spec, label);
    MatX out = MatX::Zero(d, d);
    for (std::size_t f = 0; f < factors.size(); ++f) {
        MatX term = MatX::Ones(1, 1);
        for (std::size_t h = 0; h < factors.size(); ++h) {
            MatX block;
            if (factors[h] == FactorKind::Torus) {
                block = MatX::Ones(1, 1);
                if (h == f) block(0, 0) = static_cast<double>(label.weights[h]) * X.torus[static_cast<std::size_t>(spec.slot(h))];
            } else {
                int m = label.weights[h];
                if (h == f) {
                    const Mat2& A = X.sl2[static_cast<std::size_t>(spec.slot(h))];
                    const cplx al = A(0, 0), be = A(0, 1), ga = A(1, 0);
                    block = MatX::Zero(m + 1, m + 1);
                    for (int j = 0; j <= m; ++j) {
                        block(j, j) = static_cast<double>(m - 2 * j) * al;
                        if (j + 1 <= m)
                            block(j + 1, j) = ga * std::sqrt(static_cast<double>((j + 1) * (m - j)));
                        if (j - 1 >= 0)
                            block(j - 1, j) = be * std::sqrt(static_cast<double>(j * (m - j + 1)));
                    }
                } else {
                    block = MatX::Identity(m + 1, m + 1);
                }
            }
            term = kron(term, block);
        }
        out += term;
    }
    return out;
}

MatX rep_operator(const GroupSpec& spec, const IrrepLabel& label, const InvariantOperator& op) {
    check_label(spec, label);
    auto basis = lie_basis(spec);
    int d = irrep_dim(spec, label);
    std::vector<MatX> gen;
    gen.reserve(basis.size());
    for (const auto& X : basis) gen.push_back(rep_lie(spec, label, X));
    MatX out = MatX::Zero(d, d);
    for (const auto& term : op.terms) {
        MatX prod = MatX::Identity(d, d);
        for (int idx : term.monomial) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= gen.size())
                throw input_error("rep_operator: generator index out of range");
            prod = prod * gen[static_cast<std::size_t>(idx)];
        }
        out += term.coeff * prod;
    }
    return out;
}

}  // namespace hf
