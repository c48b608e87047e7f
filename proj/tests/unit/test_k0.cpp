#include "doctest.h"

#include <cmath>

#include "fibscope/mapspec/mapping_spec.hpp"
#include "fibscope/numeric/k0.hpp"

using namespace fibscope;

namespace {

PolyMap map_of(const char* text) { return parse_mapping(text).map; }

MixedPoly expr(const char* text) {
    const ChartExpr e = parse_expression(text, 2);
    return e.is_zero() ? MixedPoly(2) : e.parts().begin()->second;
}

// Hand-coded partials of G = z1^2: (2 z1, 0).
double square_residual(const std::vector<std::complex<double>>& z) {
    return std::abs(2.0 * z[0]);
}

}  // namespace

TEST_CASE("Broughton: the partials 1 + 2zw and z^2 have no common zero") {
    const K0Report r = k0_probe(map_of("n = 2\nG1 = z + z^2*w\nrho = 0, 1"), 42, 1000);
    CHECK_FALSE(r.found);
    CHECK(r.summary() == "no critical point found");
    CHECK(r.exact == ExactCheck::ProvenEmpty);
}

TEST_CASE("twistsum: a unit minor leaves nothing to find") {
    const K0Report r = k0_probe(map_of("n = 3\nG1 = z\nG2 = z*zeta^2 + w\nrho = 0, 0, 1"), 42, 10000);
    CHECK(r.attempts == 10000);
    CHECK_FALSE(r.found);
    CHECK(r.converged == 0);
    CHECK(r.exact == ExactCheck::NotApplicable);
}

TEST_CASE("z1^2 has a witness on z1 = 0") {
    const K0Report r = k0_probe(map_of("n = 2\nG1 = z1^2\nrho = 1, 1"), 42, 50);
    REQUIRE(r.found);
    CHECK(r.residual <= 1e-8);
    CHECK(std::abs(r.witness[0]) <= 1e-8);
    CHECK(square_residual(r.witness) <= 1e-8);
    CHECK(r.exact == ExactCheck::ProvenNonempty);
}

TEST_CASE("probe is deterministic in the seed") {
    const PolyMap m = map_of("n = 2\nG1 = z1*z2^2 + z1\nrho = 1, 1");
    const K0Report a = k0_probe(m, 3, 200), b = k0_probe(m, 3, 200);
    REQUIRE(a.found);
    CHECK(a.witness == b.witness);
    CHECK(a.converged == b.converged);
    // critical points are z1 = 0, z2 = +-i
    CHECK(std::abs(a.witness[0]) < 1e-8);
    CHECK(std::abs(std::abs(a.witness[1].imag()) - 1.0) < 1e-8);
    CHECK(std::abs(a.witness[1].real()) < 1e-8);
}

TEST_CASE("n = 3 map singular along a line") {
    // G = (z1^2 + z2^2 + z3^2, z1 + z2 + z3) is singular on the line z1 = z2 = z3
    const K0Report r = k0_probe(map_of("n = 3\nG1 = z1^2 + z2^2 + z3^2\nG2 = z1 + z2 + z3\nrho = 1,1,1"), 5, 200);
    REQUIRE(r.found);
    CHECK(r.residual <= 1e-10);
    const auto& z = r.witness;
    CHECK(std::abs(z[0] - z[1]) < 1e-6);
    CHECK(std::abs(z[1] - z[2]) < 1e-6);
}

TEST_CASE("exact common-zero check") {
    auto check = [](const char* p, const char* q) { return common_zero_check(expr(p), expr(q)); };
    CHECK(check("1 + 2*z1*z2", "z1^2") == ExactCheck::ProvenEmpty);
    CHECK(check("0", "0") == ExactCheck::ProvenNonempty);
    CHECK(check("3", "z1*z2") == ExactCheck::ProvenEmpty);
    CHECK(check("0", "z1 - 1") == ExactCheck::ProvenNonempty);
    CHECK(check("z1", "z1 + 1") == ExactCheck::ProvenEmpty);
    CHECK(check("z1*z2", "z1*(z2 + 1)") == ExactCheck::ProvenNonempty);
    CHECK(check("z2^2 + 1", "z2") == ExactCheck::ProvenEmpty);
    CHECK(check("z2^2 + 1", "z2 - i") == ExactCheck::ProvenNonempty);
    CHECK(check("z1 - z2", "z1 + z2 - 2") == ExactCheck::ProvenNonempty);
    // subtracting gives z1 = 0: resultant is constant
    CHECK(check("z1*z2 - 1", "z1*(z2 + 1) - 1") == ExactCheck::ProvenEmpty);
    // resultant z2^2 vanishes only where both leading coefficients do
    CHECK(check("z1*z2 - 1", "z1*z2 + z2 - 1") == ExactCheck::Undecided);
    CHECK_THROWS_AS(common_zero_check(MixedPoly::zbar(2, 0), expr("z1")), std::invalid_argument);
}

TEST_CASE("exact branch only runs for low degree") {
    const K0Report r = k0_probe(map_of("n = 2\nG1 = z1^10 + z2\nrho = 1, 1"), 1, 20);
    CHECK(r.exact == ExactCheck::NotApplicable);
    CHECK_FALSE(r.found);
}
