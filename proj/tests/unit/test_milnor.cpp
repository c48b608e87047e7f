#include "doctest.h"

#include <random>

#include "fibscope/error.hpp"
#include "fibscope/mapspec/mapping_spec.hpp"
#include "fibscope/milnor/milnor.hpp"
#include "fibscope/numeric/linalg.hpp"

using namespace fibscope;

namespace {

MixedPoly z(std::size_t n, std::size_t i) { return MixedPoly::z(n, i); }
MixedPoly zb(std::size_t n, std::size_t i) { return MixedPoly::zbar(n, i); }
MixedPoly c(std::size_t n, long v) { return MixedPoly::constant(n, ComplexRational(v)); }

PolyMap broughton() { return PolyMap{2, {z(2, 0) + z(2, 0).pow(2) * z(2, 1)}}; }
PolyMap twistsum() { return PolyMap{3, {z(3, 0), z(3, 0) * z(3, 2).pow(2) + z(3, 1)}}; }
PolyMap suspension() { return PolyMap{3, {z(3, 0) + z(3, 0).pow(2) * z(3, 1), z(3, 2)}}; }
WeightVector weights(std::initializer_list<long> a) {
    std::vector<Rational> v;
    for (long x : a) v.emplace_back(x);
    return WeightVector(v);
}

PolyMap random_map(std::mt19937_64& rng, std::size_t n, unsigned max_deg) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    PolyMap map{n, {}};
    for (std::size_t j = 0; j + 1 < n; ++j) {
        MixedPoly p(n);
        const int terms = 1 + static_cast<int>(rng() % 5);
        for (int t = 0; t < terms; ++t) {
            Exponents e(2 * n, 0);
            const unsigned d = rng() % (max_deg + 1);
            for (unsigned k = 0; k < d; ++k) ++e[rng() % n];
            p.add_term(e, ComplexRational(Rational(coeff(rng)), Rational(coeff(rng))));
        }
        map.components.push_back(p);
    }
    return map;
}

// Cofactor by direct cofactor expansion with explicit permutation signs.
MixedPoly leibniz_det(const MixedMatrix& m, std::size_t n) {
    const std::size_t k = m.size();
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    MixedPoly acc(n);
    do {
        int inversions = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                if (perm[a] > perm[b]) ++inversions;
        MixedPoly term = c(n, inversions % 2 ? -1 : 1);
        for (std::size_t r = 0; r < k; ++r) term = term * m[r][perm[r]];
        acc = acc + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

}  // namespace

TEST_CASE("complex jacobians") {
    const MixedMatrix jb = complex_jacobian(broughton());
    CHECK(jb[0][0] == c(2, 1) + c(2, 2) * z(2, 0) * z(2, 1));
    CHECK(jb[0][1] == z(2, 0).pow(2));
    const MixedMatrix jt = complex_jacobian(twistsum());
    CHECK(jt[0][0] == c(3, 1));
    CHECK(jt[0][1].is_zero());
    CHECK(jt[0][2].is_zero());
    CHECK(jt[1][0] == z(3, 2).pow(2));
    CHECK(jt[1][1] == c(3, 1));
    CHECK(jt[1][2] == c(3, 2) * z(3, 0) * z(3, 2));
    const MixedMatrix jc = complex_jacobian(PolyMap{2, {c(2, 5)}});
    CHECK(jc[0][0].is_zero());
    CHECK(jc[0][1].is_zero());
}

TEST_CASE("cofactor fields") {
    const CofactorField vb = cofactor_field(broughton());
    CHECK(vb.v[0] == z(2, 0).pow(2));
    CHECK(vb.v[1] == -(c(2, 1) + c(2, 2) * z(2, 0) * z(2, 1)));
    const CofactorField vt = cofactor_field(twistsum());
    CHECK(vt.v[0].is_zero());
    CHECK(vt.v[1] == c(3, -2) * z(3, 0) * z(3, 2));
    CHECK(vt.v[2] == c(3, 1));
    const CofactorField vl = cofactor_field(PolyMap{2, {z(2, 0)}});
    CHECK(vl.v[0].is_zero());
    CHECK(vl.v[1] == c(2, -1));
    const CofactorField vs = cofactor_field(suspension());
    CHECK(vs.v[0] == z(3, 0).pow(2));
    CHECK(vs.v[1] == -(c(3, 1) + c(3, 2) * z(3, 0) * z(3, 1)));
    CHECK(vs.v[2].is_zero());
}

TEST_CASE("Milnor h for the shipped examples") {
    const MilnorPresentation pb = milnor_h(broughton(), weights({0, 1}));
    CHECK(pb.h == c(2, -2) * (c(2, 1) + c(2, 2) * z(2, 0) * z(2, 1)) * zb(2, 1));
    CHECK(pb.h.to_string() == "-4*z1*z2*conj(z2) - 2*conj(z2)");
    const MilnorPresentation p1 = milnor_h(twistsum(), weights({0, 0, 1}));
    CHECK(p1.h == c(3, 2) * zb(3, 2));
    const MilnorPresentation p2 = milnor_h(twistsum(), weights({0, 1, 0}));
    CHECK(p2.h == c(3, -4) * z(3, 0) * z(3, 2) * zb(3, 1));
    CHECK(pb.minors.size() == 4);
    CHECK(p1.minors.size() == 6);
}

TEST_CASE("Broughton Milnor set decomposition") {
    const MilnorPresentation pb = milnor_h(broughton(), weights({0, 1}));
    // h = -2 conj(w) (1 + 2zw): the factor conj(w) cuts out x3 = x4 = 0 and
    // 1 + 2zw has the two quoted real equations as real and imaginary parts.
    const MixedPoly q = c(2, 1) + c(2, 2) * z(2, 0) * z(2, 1);
    CHECK(pb.h == c(2, -2) * zb(2, 1) * q);
    auto x = [](std::size_t k) { return RealPoly(RealPoly::Base::variable(4, k - 1)); };
    auto k = [](long v) { return RealPoly(RealPoly::Base::constant(4, Rational(v))); };
    auto [qre, qim] = realify(q);
    CHECK(qre == k(1) + k(2) * x(1) * x(3) - k(2) * x(2) * x(4));
    CHECK(qim == k(2) * x(2) * x(3) + k(2) * x(1) * x(4));

    // substituting z = -conj(w) / (2|w|^2) and clearing the denominator
    // (2 w conj(w))^deg_z gives the zero polynomial
    MixedPoly acc(2);
    const long dz = 1;
    for (const auto& [e, coef] : pb.h.terms()) {
        const long a = e[0], ab = e[2];
        REQUIRE(a + ab <= dz);
        MixedPoly t = MixedPoly::constant(2, coef) * (-zb(2, 1)).pow(a) * (-z(2, 1)).pow(ab) *
                      (c(2, 2) * z(2, 1) * zb(2, 1)).pow(static_cast<unsigned>(dz - a - ab)) *
                      z(2, 1).pow(e[1]) * zb(2, 1).pow(e[3]);
        acc = acc + t;
    }
    CHECK(acc.is_zero());

    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        ComplexRational w(Rational(static_cast<long>(rng() % 41) - 20, 1 + rng() % 7),
                          Rational(static_cast<long>(rng() % 41) - 20, 1 + rng() % 7));
        if (w.is_zero()) continue;
        const ComplexRational zz = -w.conj() / (ComplexRational(2) * ComplexRational(w.norm2()));
        std::vector<ComplexRational> pt{zz, w};
        CHECK(pb.h.evaluate(pt).is_zero());
        std::vector<ComplexRational> m1{w, ComplexRational(0)};
        CHECK(pb.h.evaluate(m1).is_zero());
    }
}

TEST_CASE("cofactor tangency on random maps") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const PolyMap map = random_map(rng, n, 3);
        const CofactorField f = cofactor_field(map);
        const MixedMatrix jac = complex_jacobian(map);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            MixedPoly s(n);
            for (std::size_t i = 0; i < n; ++i) s = s + f.v[i] * jac[j][i];
            CHECK(s.is_zero());
        }
        // independent oracle: permutation expansion of each cofactor
        for (std::size_t i = 0; i < n; ++i) {
            MixedMatrix sub;
            for (const auto& row : jac) {
                std::vector<MixedPoly> r;
                for (std::size_t col = 0; col < n; ++col)
                    if (col != i) r.push_back(row[col]);
                sub.push_back(r);
            }
            const MixedPoly d = leibniz_det(sub, n);
            CHECK(f.v[i] == (i % 2 == 0 ? d : -d));
        }
    }
}

TEST_CASE("h is conjugate-linear and scales with the weights") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const PolyMap map = random_map(rng, n, 3);
        std::vector<Rational> a;
        for (std::size_t j = 0; j < n; ++j) a.emplace_back(static_cast<long>(rng() % 4));
        if (std::all_of(a.begin(), a.end(), [](const Rational& r) { return sgn(r) == 0; })) a[0] = 1;
        const MilnorPresentation p = milnor_h(map, WeightVector(a), {false});
        for (const auto& [e, coef] : p.h.terms()) {
            std::uint64_t beta = 0;
            for (std::size_t j = n; j < 2 * n; ++j) beta += e[j];
            CHECK(beta == 1);
        }
        const Rational lambda(3, 7);
        std::vector<Rational> scaled;
        for (const auto& v : a) scaled.push_back(lambda * v);
        const MilnorPresentation q = milnor_h(map, WeightVector(scaled), {false});
        CHECK(q.h == MixedPoly::constant(n, ComplexRational(lambda)) * p.h);
    }
}

TEST_CASE("sum of squared minors equals |V|^2 |h|^2") {
    std::mt19937_64 rng(77);
    std::vector<std::pair<PolyMap, WeightVector>> cases{{broughton(), weights({0, 1})},
                                                        {twistsum(), weights({0, 0, 1})},
                                                        {twistsum(), weights({0, 1, 0})},
                                                        {suspension(), weights({1, 1, 1})}};
    for (int t = 0; t < 6; ++t) {
        if (t % 2) {
            cases.emplace_back(random_map(rng, 3, 2), weights({1, 2, 1}));
        } else {
            cases.emplace_back(random_map(rng, 2, 2), weights({2, 1}));
        }
    }
    for (const auto& [map, w] : cases) {
        const MilnorPresentation p = milnor_h(map, w);
        RealPoly lhs(2 * map.n);
        for (const auto& m : p.minors) lhs = lhs + m * m;
        MixedPoly v2(map.n);
        for (const auto& vi : p.cofactors.v) v2 = v2 + vi * vi.conj();
        const MixedPoly rhs = v2 * p.h * p.h.conj();
        auto [re, im] = realify(rhs);
        CHECK(im.is_zero());
        CHECK(re == lhs);
    }
}

TEST_CASE("real presentation agrees with h") {
    const MilnorPresentation pb = milnor_h(broughton(), weights({0, 1}));
    auto [re, im] = realify(pb.h);
    CHECK(pb.h_real.first == re);
    CHECK(pb.h_real.second == im);
    CHECK(pb.g_rho.components.size() == 3);
    CHECK(pb.g_rho.components[2].to_string() == "x3^2 + x4^2");
}

TEST_CASE("verify_equivalence on constructed points") {
    const MilnorPresentation pb = milnor_h(broughton(), weights({0, 1}));
    SampleCloud cloud;
    cloud.n = 2;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const MilnorEvaluator ev(pb);
    for (int k = 0; k < 300; ++k) {
        std::vector<double> x{u(rng), u(rng), u(rng), u(rng)};
        cloud.add(x, ev.relative_residual(x), 0, ev.g_real(x));
    }
    for (int k = 0; k < 100; ++k) {
        const std::complex<double> w(u(rng), u(rng));
        const std::complex<double> zz = -std::conj(w) / (2.0 * std::norm(w));
        std::vector<double> x{zz.real(), zz.imag(), w.real(), w.imag()};
        cloud.add(x, ev.relative_residual(x), 0, ev.g_real(x));
        std::vector<double> m1{u(rng), u(rng), 0.0, 0.0};
        cloud.add(m1, ev.relative_residual(m1), 0, ev.g_real(m1));
    }
    const EquivalenceReport rep = verify_equivalence(pb, cloud, 1e-8);
    CHECK(rep.checked == 500);
    CHECK(rep.on_set == 200);
    CHECK(rep.consistent());

    SampleCloud far;
    far.n = 2;
    std::vector<double> x{0.0, 0.0, 0.5, 0.0};  // h = -2 * 0.5 = -1
    far.add(x, 1.0, 0, ev.g_real(x));
    const EquivalenceReport r2 = verify_equivalence(pb, far, 1e-8);
    CHECK(r2.consistent());
    CHECK(r2.on_set == 0);
    CHECK(numerical_rank(normalize_rows(ev.g_rho_jacobian(x)), 1e-8) == 3);

    SampleCloud empty;
    empty.n = 2;
    CHECK_THROWS_AS(verify_equivalence(pb, empty, 1e-8), std::invalid_argument);
}

TEST_CASE("verify_equivalence for a linear map") {
    const MilnorPresentation p = milnor_h(PolyMap{2, {z(2, 0)}}, weights({0, 1}));
    CHECK(p.h == c(2, -2) * zb(2, 1));
    const MilnorEvaluator ev(p);
    SampleCloud cloud;
    cloud.n = 2;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> x{u(rng), u(rng), k % 2 ? 0.0 : u(rng), k % 2 ? 0.0 : u(rng)};
        cloud.add(x, ev.relative_residual(x), 0, ev.g_real(x));
    }
    const EquivalenceReport rep = verify_equivalence(p, cloud, 1e-8);
    CHECK(rep.on_set == 100);
    CHECK(rep.consistent());
}

TEST_CASE("smoothness probe") {
    const MilnorPresentation pb = milnor_h(broughton(), weights({0, 1}));
    const MilnorEvaluator ev(pb);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    SampleCloud m1, m2;
    m1.n = m2.n = 2;
    for (int k = 0; k < 100; ++k) {
        const std::complex<double> w(u(rng), u(rng));
        const std::complex<double> zz = -std::conj(w) / (2.0 * std::norm(w));
        std::vector<double> x{zz.real(), zz.imag(), w.real(), w.imag()};
        m2.add(x, ev.relative_residual(x), 0, ev.g_real(x));
        std::vector<double> y{u(rng), u(rng), 0.0, 0.0};
        m1.add(y, ev.relative_residual(y), 0, ev.g_real(y));
    }
    for (const auto* cloud : {&m1, &m2}) {
        const SmoothnessReport rep = smoothness_probe(pb, *cloud, 1e-10);
        CHECK(rep.flagged.empty());
        CHECK(rep.rank_histogram.at(2) == 100);
        CHECK(rep.implied_dimension == 2);
    }
    SampleCloud off;
    off.n = 2;
    off.add({0.0, 0.0, 1.0, 0.0}, 1.0, 0, {0.0, 0.0});
    CHECK_THROWS_AS(smoothness_probe(pb, off, 1e-10), DomainError);

    const MilnorPresentation flat = milnor_h(PolyMap{2, {z(2, 0)}}, weights({1, 0}));
    CHECK(flat.degenerate());
    CHECK_THROWS_AS(smoothness_probe(flat, m1, 1e-10), DomainError);
}
