#include "holofourier/group.hpp"

#include <cmath>

namespace hf {

GroupSpec::GroupSpec(std::vector<FactorKind> factors) {
    if (factors.empty()) throw input_error("GroupSpec: factor list must be nonempty");
    auto slots = std::make_shared<std::vector<int>>();
    slots->reserve(factors.size());
    for (FactorKind k : factors) {
        if (k == FactorKind::Torus)
            slots->push_back(n_torus_++);
        else
            slots->push_back(n_sl2_++);
    }
    factors_ = std::make_shared<const std::vector<FactorKind>>(std::move(factors));
    slots_ = std::move(slots);
}

GroupSpec GroupSpec::torus(int rank) {
    return GroupSpec(std::vector<FactorKind>(static_cast<std::size_t>(rank), FactorKind::Torus));
}

GroupSpec GroupSpec::sl2(int copies) {
    return GroupSpec(std::vector<FactorKind>(static_cast<std::size_t>(copies), FactorKind::SL2));
}

int GroupSpec::complex_dim() const { return n_torus_ + 3 * n_sl2_; }

bool GroupSpec::operator==(const GroupSpec& o) const {
    if (factors_ == o.factors_) return true;
    if (!factors_ || !o.factors_) return false;
    return *factors_ == *o.factors_;
}

namespace {

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Mat2 renormalize_det(const Mat2& m) {
    cplx det = m.determinant();
    if (!finite(det) || std::abs(det) < kDetTol)
        throw input_error("SL2 coordinate has non-invertible or non-finite determinant");
    return m / std::sqrt(det);
}

}  // namespace

GroupElement identity(const GroupSpec& spec) {
    GroupElement e;
    e.spec = spec;
    e.torus.assign(static_cast<std::size_t>(spec.n_torus()), cplx(1.0, 0.0));
    e.sl2.assign(static_cast<std::size_t>(spec.n_sl2()), Mat2::Identity());
    return e;
}

GroupElement make_element(const GroupSpec& spec, std::vector<cplx> torus, std::vector<Mat2> sl2) {
    if (torus.size() != static_cast<std::size_t>(spec.n_torus()) ||
        sl2.size() != static_cast<std::size_t>(spec.n_sl2()))
        throw input_error("make_element: coordinate count does not match spec");
    for (const cplx& z : torus)
        if (!finite(z) || std::abs(z) == 0.0)
            throw input_error("torus coordinate must be finite and nonzero");
    for (Mat2& m : sl2) m = renormalize_det(m);
    GroupElement g;
    g.spec = spec;
    g.torus = std::move(torus);
    g.sl2 = std::move(sl2);
    return g;
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    if (g.spec != h.spec) throw input_error("multiply: elements from different groups");
    GroupElement out;
    out.spec = g.spec;
    out.torus.resize(g.torus.size());
    out.sl2.resize(g.sl2.size());
    for (std::size_t i = 0; i < g.torus.size(); ++i) out.torus[i] = g.torus[i] * h.torus[i];
    for (std::size_t i = 0; i < g.sl2.size(); ++i) out.sl2[i] = renormalize_det(g.sl2[i] * h.sl2[i]);
    return out;
}

GroupElement inverse(const GroupElement& g) {
    GroupElement out;
    out.spec = g.spec;
    out.torus.resize(g.torus.size());
    out.sl2.resize(g.sl2.size());
    for (std::size_t i = 0; i < g.torus.size(); ++i) out.torus[i] = 1.0 / g.torus[i];
    for (std::size_t i = 0; i < g.sl2.size(); ++i) {
        const Mat2& m = g.sl2[i];
        Mat2 adj;
        adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        out.sl2[i] = adj;
    }
    return out;
}

RadialPart radial(const GroupElement& g) {
    RadialPart r;
    r.s.resize(g.spec.n_factors());
    const auto& factors = g.spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (factors[f] == FactorKind::Torus) {
            r.s[f] = std::abs(std::log(std::abs(g.z(f))));
        } else {
            // sigma_max^2 of a 2x2 matrix in closed form.
            const Mat2& m = g.m(f);
            double T = m.squaredNorm();
            double delta = std::norm(m.determinant());
            double disc = T * T - 4.0 * delta;
            if (disc < 0) disc = 0;
            double smax2 = 0.5 * (T + std::sqrt(disc));
            r.s[f] = smax2 > 1.0 ? 0.5 * std::log(smax2) : 0.0;
        }
    }
    return r;
}

std::pair<GroupElement, GroupElement> polar_split(const GroupElement& g) {
    GroupElement k, p;
    k.spec = p.spec = g.spec;
    k.torus.resize(g.torus.size());
    p.torus.resize(g.torus.size());
    k.sl2.resize(g.sl2.size());
    p.sl2.resize(g.sl2.size());
    for (std::size_t i = 0; i < g.torus.size(); ++i) {
        double r = std::abs(g.torus[i]);
        k.torus[i] = g.torus[i] / r;
        p.torus[i] = r;
    }
    for (std::size_t i = 0; i < g.sl2.size(); ++i) {
        const Mat2& m = g.sl2[i];
        Mat2 M = m.adjoint() * m;  // PSD, det = |det m|^2 = 1
        // sqrt of a 2x2 PSD matrix with det 1: (M + I) / sqrt(tr M + 2)
        double t = std::sqrt(M.real().trace() + 2.0);
        Mat2 pos = (M + Mat2::Identity()) / t;
        Mat2 posinv;
        posinv << pos(1, 1), -pos(0, 1), -pos(1, 0), pos(0, 0);
        p.sl2[i] = pos;
        k.sl2[i] = m * posinv;
    }
    return {k, p};
}

namespace {

Mat2 random_su2(Rng& rng) {
    double q[4];
    double norm2 = 0;
    for (double& qi : q) {
        qi = rng.normal();
        norm2 += qi * qi;
    }
    if (norm2 < 1e-30) {
        q[0] = 1;
        norm2 = 1;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (double& qi : q) qi *= inv;
    Mat2 k;
    k << cplx(q[0], q[3]), cplx(q[2], q[1]), cplx(-q[2], q[1]), cplx(q[0], -q[3]);
    return k;
}

}  // namespace

GroupElement sample_element(const GroupSpec& spec, std::uint64_t seed, double radius) {
    if (radius < 0) throw input_error("sample_element: radius must be >= 0");
    Rng rng(seed);
    GroupElement g;
    g.spec = spec;
    for (FactorKind kind : spec.factors()) {
        if (kind == FactorKind::Torus) {
            double theta = rng.uniform(0.0, 2.0 * kPi);
            double s = rng.uniform(-radius, radius);
            g.torus.push_back(std::exp(cplx(s, theta)));
        } else {
            Mat2 k1 = random_su2(rng);
            Mat2 k2 = random_su2(rng);
            double s = rng.uniform(0.0, radius);
            g.sl2.push_back(renormalize_det(k1 * cartan_a(s) * k2));
        }
    }
    return g;
}

GroupElement exp_lie(const LieAlgElement& X, double t) {
    GroupElement g;
    g.spec = X.spec;
    g.torus.resize(X.torus.size());
    g.sl2.resize(X.sl2.size());
    for (std::size_t i = 0; i < X.torus.size(); ++i) g.torus[i] = std::exp(t * X.torus[i]);
    for (std::size_t i = 0; i < X.sl2.size(); ++i) {
        // For traceless A: exp(A) = cosh(w) I + sinhc(w) A with w^2 = -det A.
        Mat2 A = t * X.sl2[i];
        cplx w2 = -A.determinant();
        cplx w = std::sqrt(w2);
        cplx ch, shc;
        if (std::abs(w) < 1e-6) {
            ch = 1.0 + w2 / 2.0 + w2 * w2 / 24.0;
            shc = 1.0 + w2 / 6.0 + w2 * w2 / 120.0;
        } else {
            ch = std::cosh(w);
            shc = std::sinh(w) / w;
        }
        g.sl2[i] = renormalize_det(ch * Mat2::Identity() + shc * A);
    }
    return g;
}

std::vector<LieAlgElement> lie_basis(const GroupSpec& spec) {
    std::vector<LieAlgElement> basis;
    LieAlgElement zero;
    zero.spec = spec;
    zero.torus.assign(static_cast<std::size_t>(spec.n_torus()), cplx(0.0, 0.0));
    zero.sl2.assign(static_cast<std::size_t>(spec.n_sl2()), Mat2::Zero());
    const auto& factors = spec.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        std::size_t slot = static_cast<std::size_t>(spec.slot(f));
        if (factors[f] == FactorKind::Torus) {
            LieAlgElement X = zero;
            X.torus[slot] = 1.0;
            basis.push_back(std::move(X));
        } else {
            Mat2 H, E, F;
            H << 1, 0, 0, -1;
            E << 0, 1, 0, 0;
            F << 0, 0, 1, 0;
            for (const Mat2& gen : {H, E, F}) {
                LieAlgElement X = zero;
                X.sl2[slot] = gen;
                basis.push_back(std::move(X));
            }
        }
    }
    return basis;
}

Mat2 su2_euler(double alpha, double beta, double gamma) {
    const cplx i(0.0, 1.0);
    double cb = std::cos(beta / 2), sb = std::sin(beta / 2);
    Mat2 rz1, ry, rz2;
    rz1 << std::exp(-i * (alpha / 2)), 0, 0, std::exp(i * (alpha / 2));
    ry << cplx(cb, 0), cplx(-sb, 0), cplx(sb, 0), cplx(cb, 0);
    rz2 << std::exp(-i * (gamma / 2)), 0, 0, std::exp(i * (gamma / 2));
    return rz1 * ry * rz2;
}

Mat2 cartan_a(double s) {
    Mat2 a;
    a << std::exp(s), 0, 0, std::exp(-s);
    return a;
}

}  // namespace hf
