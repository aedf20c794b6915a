#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <holofourier/group.hpp>

#include "oracles.hpp"

using namespace hf;

namespace {

GroupElement torus_el(const GroupSpec& spec, cplx z) { return make_element(spec, {z}, {}); }

GroupElement sl2_el(const GroupSpec& spec, cplx a, cplx b, cplx c, cplx d) {
    Mat2 m;
    m << a, b, c, d;
    return make_element(spec, {}, {m});
}

double elem_dist(const GroupElement& g, const GroupElement& h) {
    double d = 0;
    for (std::size_t i = 0; i < g.torus.size(); ++i) d = std::max(d, std::abs(g.torus[i] - h.torus[i]));
    for (std::size_t i = 0; i < g.sl2.size(); ++i)
        d = std::max(d, (g.sl2[i] - h.sl2[i]).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace

TEST_CASE("torus group law") {
    GroupSpec spec = GroupSpec::torus(1);
    auto g = torus_el(spec, 2.0);
    auto h = torus_el(spec, 3.0);
    CHECK(multiply(g, h).torus[0] == cplx(6.0, 0.0));
    CHECK(inverse(g).torus[0] == cplx(0.5, 0.0));
    CHECK(elem_dist(multiply(g, inverse(g)), identity(spec)) <= 1e-12);
}

TEST_CASE("sl2 group law and renormalization") {
    GroupSpec spec = GroupSpec::sl2();
    auto g = sl2_el(spec, 1, 1, 0, 1);
    auto h = sl2_el(spec, 1, 0, 1, 1);
    auto gh = multiply(g, h);
    Mat2 expect;
    expect << 2, 1, 1, 1;
    CHECK((gh.sl2[0] - expect).cwiseAbs().maxCoeff() <= 1e-14);

    // inverse is the adjugate for det 1
    auto gi = inverse(g);
    Mat2 adj;
    adj << 1, -1, 0, 1;
    CHECK((gi.sl2[0] - adj).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(elem_dist(multiply(g, gi), identity(spec)) <= 1e-12);

    // constructors renormalize the determinant
    Mat2 scaled;
    scaled << 2, 0, 0, 2;  // det 4 -> divide by 2
    auto e = make_element(spec, {}, {scaled});
    CHECK(std::abs(e.sl2[0].determinant() - cplx(1, 0)) <= 1e-12);

    Mat2 singular = Mat2::Zero();
    CHECK_THROWS_AS(make_element(spec, {}, {singular}), Error);
}

TEST_CASE("determinant stays pinned over long products") {
    GroupSpec spec = GroupSpec::sl2();
    GroupElement g = identity(spec);
    for (int i = 0; i < 100; ++i) {
        GroupElement r = sample_element(spec, 100 + static_cast<std::uint64_t>(i), 1.0);
        g = multiply(g, r);
        CHECK(std::abs(g.sl2[0].determinant() - cplx(1, 0)) <= 1e-12);
    }
}

TEST_CASE("radial part") {
    GroupSpec t = GroupSpec::torus(1);
    CHECK(radial(torus_el(t, std::exp(cplx(2.0, 0.3)))).s[0] == doctest::Approx(2.0).epsilon(1e-12));

    GroupSpec s = GroupSpec::sl2();
    CHECK(radial(sl2_el(s, std::exp(3.0), 0, 0, std::exp(-3.0))).s[0] ==
          doctest::Approx(3.0).epsilon(1e-12));

    // unipotent: largest singular value of (1,1;0,1) is the golden ratio
    auto uni = sl2_el(s, 1, 1, 0, 1);
    double expect = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    CHECK(radial(uni).s[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(radial(uni).s[0] == doctest::Approx(std::log(oracle::sigma_max(uni.sl2[0]))).epsilon(1e-12));
}

TEST_CASE("radial is K-bi-invariant and subadditive") {
    GroupSpec spec(std::vector<FactorKind>{FactorKind::Torus, FactorKind::SL2});
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t s = 5000 + static_cast<std::uint64_t>(i);
        GroupElement g = sample_element(spec, s, 2.0);
        GroupElement h = sample_element(spec, s + 70001, 2.0);
        RadialPart rg = radial(g);
        RadialPart rh = radial(h);
        RadialPart rgh = radial(multiply(g, h));
        for (std::size_t f = 0; f < rg.s.size(); ++f)
            CHECK(rgh.s[f] <= rg.s[f] + rh.s[f] + 1e-10);
        if (i < 200) {
            GroupElement k1 = sample_element(spec, s + 3, 0.0);
            GroupElement k2 = sample_element(spec, s + 4, 0.0);
            RadialPart rk = radial(multiply(multiply(k1, g), k2));
            for (std::size_t f = 0; f < rg.s.size(); ++f)
                CHECK(rk.s[f] == doctest::Approx(rg.s[f]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("polar split") {
    GroupSpec t = GroupSpec::torus(1);
    auto [kt, pt] = polar_split(torus_el(t, cplx(0, 2)));
    CHECK(std::abs(kt.torus[0] - cplx(0, 1)) <= 1e-14);
    CHECK(std::abs(pt.torus[0] - cplx(2, 0)) <= 1e-14);

    GroupSpec s = GroupSpec::sl2();
    // an SU(2) element splits as (k, identity)
    GroupElement k = sample_element(s, 9, 0.0);
    auto [kk, kp] = polar_split(k);
    CHECK(elem_dist(kp, identity(s)) <= 1e-10);
    CHECK(elem_dist(kk, k) <= 1e-10);

    for (int i = 0; i < 50; ++i) {
        GroupElement g = sample_element(s, 31 + static_cast<std::uint64_t>(i), 2.5);
        auto [u, p] = polar_split(g);
        CHECK((u.sl2[0] * p.sl2[0] - g.sl2[0]).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((u.sl2[0] * u.sl2[0].adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((p.sl2[0] - p.sl2[0].adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Mat2> es(p.sl2[0]);
        CHECK(es.eigenvalues()(0) > 0);
    }
}

TEST_CASE("sample_element determinism and radius bound") {
    GroupSpec spec(std::vector<FactorKind>{FactorKind::SL2, FactorKind::Torus});
    GroupElement a = sample_element(spec, 123, 1.5);
    GroupElement b = sample_element(spec, 123, 1.5);
    CHECK(elem_dist(a, b) == 0.0);

    for (int i = 0; i < 1000; ++i) {
        GroupElement g = sample_element(spec, static_cast<std::uint64_t>(i), 1.5);
        for (double r : radial(g).s) CHECK(r <= 1.5 + 1e-9);
    }
    GroupElement k = sample_element(spec, 5, 0.0);
    for (double r : radial(k).s) CHECK(r <= 1e-12);
}

TEST_CASE("associativity on random triples") {
    GroupSpec spec(std::vector<FactorKind>{FactorKind::Torus, FactorKind::SL2});
    for (int i = 0; i < 200; ++i) {
        std::uint64_t s = 900 + static_cast<std::uint64_t>(i);
        GroupElement a = sample_element(spec, s, 1.0);
        GroupElement b = sample_element(spec, s + 1000000, 1.0);
        GroupElement c = sample_element(spec, s + 2000000, 1.0);
        CHECK(elem_dist(multiply(multiply(a, b), c), multiply(a, multiply(b, c))) <= 1e-12);
    }
}

TEST_CASE("exp_lie closed forms") {
    GroupSpec t = GroupSpec::torus(1);
    auto basis_t = lie_basis(t);
    CHECK(std::abs(exp_lie(basis_t[0], 0.7).torus[0] - std::exp(cplx(0.7, 0))) <= 1e-14);

    GroupSpec s = GroupSpec::sl2();
    auto basis = lie_basis(s);  // H, E, F
    REQUIRE(basis.size() == 3);
    GroupElement eh = exp_lie(basis[0], 0.5);
    CHECK(std::abs(eh.sl2[0](0, 0) - std::exp(cplx(0.5, 0))) <= 1e-12);
    CHECK(std::abs(eh.sl2[0](1, 1) - std::exp(cplx(-0.5, 0))) <= 1e-12);
    GroupElement ee = exp_lie(basis[1], 0.3);
    Mat2 expect;
    expect << 1, 0.3, 0, 1;
    CHECK((ee.sl2[0] - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("spec invariants") {
    CHECK_THROWS_AS(GroupSpec(std::vector<FactorKind>{}), Error);
    GroupSpec spec(std::vector<FactorKind>{FactorKind::Torus, FactorKind::SL2, FactorKind::SL2});
    CHECK(spec.complex_dim() == 7);
    CHECK(spec.n_torus() == 1);
    CHECK(spec.n_sl2() == 2);
    GroupSpec other = GroupSpec::torus(1);
    CHECK_THROWS_AS(multiply(identity(spec), identity(other)), Error);
}
