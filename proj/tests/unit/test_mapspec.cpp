#include "doctest.h"

#include <random>

#include "fibscope/mapspec/mapping_spec.hpp"

using namespace fibscope;

namespace {

MixedPoly z(std::size_t n, std::size_t i) { return MixedPoly::z(n, i); }

SpecError parse_error(const std::string& text) {
    try {
        parse_mapping(text);
    } catch (const SpecError& e) {
        return e;
    }
    FAIL("expected a SpecError for: " << text);
    throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("Broughton document") {
    const MappingSpec s = parse_mapping("n=2; G1 = z1 + z1^2*z2; rho = 0,1");
    CHECK(s.n == 2);
    REQUIRE(s.map.components.size() == 1);
    CHECK(s.map.components[0] == z(2, 0) + z(2, 0).pow(2) * z(2, 1));
    CHECK(s.weights == WeightVector({Rational(0), Rational(1)}));
    CHECK(s.charts.empty());
}

TEST_CASE("two-component map with aliases") {
    const MappingSpec s = parse_mapping("n=3; G1 = z1; G2 = z1*z3^2 + z2; rho = 0,0,1");
    REQUIRE(s.map.components.size() == 2);
    CHECK(s.map.components[1] == z(3, 0) * z(3, 2).pow(2) + z(3, 1));
    const MappingSpec a = parse_mapping("n = 3\nG1 = z\nG2 = z*\xCE\xB6^2 + w\nrho = 0, 0, 1\n");
    CHECK(a == s);
    const MappingSpec b = parse_mapping("n = 3\r\nG1 = z # first\r\nG2 = z*zeta^2 + w\r\nrho = 0, 0, 1\r\n");
    CHECK(b == s);
}

TEST_CASE("conjugates are rejected in components") {
    const SpecError e = parse_error("n=2; G1 = conj(z1); rho = 1,0");
    CHECK(e.kind() == SpecError::Kind::Semantic);
    CHECK(e.line() == 1);
    CHECK(e.column() == 11);
    CHECK(parse_error("n=2; G1 = phi; rho = 1,0").kind() == SpecError::Kind::Semantic);
}

TEST_CASE("error positions and kinds") {
    auto e1 = parse_error("n = 2\nG1 = z1 +* z2\nrho = 0,1");
    CHECK(e1.kind() == SpecError::Kind::Syntax);
    CHECK(e1.line() == 2);
    CHECK(e1.column() == 10);
    CHECK(parse_error("n = 2\nG1 = z1\nG2 = z2\nrho = 0,1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 3\nG1 = z1\nrho = 0,0,1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = z1\nrho = 0,0").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = z1\nrho = 0,-1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = z3\nrho = 0,1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = 0.5*z1\nrho = 0,1").kind() == SpecError::Kind::Syntax);
    CHECK(parse_error("n = 2\nG1 = z1/z2\nrho = 0,1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = z1/0\nrho = 0,1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = z1^-1\nrho = 0,1").kind() == SpecError::Kind::Syntax);
    CHECK(parse_error("n = 2\nG1 = z1\nrho = 0,1\nchart1 = i*z1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = z1\nrho = 0,1\ndecay1 = 2").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = z1\nrho = 0,1\nchart2 = phi").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("G1 = z1\nrho = 0,1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n = 2\nG1 = (z1\nrho = 0,1").kind() == SpecError::Kind::Syntax);
    // columns count code points, not bytes
    auto e2 = parse_error("n = 3\nG1 = \xCE\xB6 + $\nG2 = z\nrho = 1,1,1");
    CHECK(e2.line() == 2);
    CHECK(e2.column() == 10);
}

TEST_CASE("exact rational coefficients survive formatting") {
    const MappingSpec s = parse_mapping("n=2\nG1 = 3/2*z1 + (1 - 2*i)*z2^2\nrho = 1/3, 1");
    const std::string text = format_spec(s);
    CHECK(text.find("3/2*z1") != std::string::npos);
    CHECK(text.find("rho = 1/3, 1") != std::string::npos);
    CHECK(text.find('.') == std::string::npos);
    CHECK(parse_mapping(text) == s);
}

TEST_CASE("canonical Broughton text") {
    const MappingSpec s = parse_mapping("n=2; G1 = z1 + z1^2*z2; rho = 0,1");
    CHECK(format_spec(s) == "n = 2\nG1 = z1^2*z2 + z1\nrho = 0, 1\n");
    CHECK(parse_mapping(format_spec(s)) == s);
}

TEST_CASE("charts round-trip") {
    const char* doc =
        "n = 2\nG1 = z1 + z1^2*z2\nrho = 0, 1\n"
        "chart1 = phi\n"
        "chart2 = (z1*conj(z1) - 1)*phi^2 + conj(z2) + z2\ndecay2 = 3\n";
    const MappingSpec s = parse_mapping(doc);
    REQUIRE(s.charts.size() == 2);
    CHECK(s.charts[0] == ChartExpr::phi(2));
    CHECK(!s.decay_exponents[0].has_value());
    CHECK(s.decay_exponents[1] == 3u);
    const std::string text = format_spec(s);
    CHECK(parse_mapping(text) == s);
    CHECK(format_spec(parse_mapping(text)) == text);
}

TEST_CASE("round-trip on random documents") {
    std::mt19937_64 rng(5);
    const char* atoms[] = {"z1", "z2", "z3", "i", "2", "3/4", "(z1 - i*z2)", "z3^2"};
    for (int trial = 0; trial < 300; ++trial) {
        std::string doc = "n = 3\n";
        for (int k = 1; k <= 2; ++k) {
            doc += "G" + std::to_string(k) + " = ";
            const int terms = 1 + rng() % 4;
            for (int t = 0; t < terms; ++t) {
                if (t) doc += (rng() % 2) ? " + " : " - ";
                const int factors = 1 + rng() % 3;
                for (int f = 0; f < factors; ++f) doc += std::string(f ? "*" : "") + atoms[rng() % 8];
            }
            doc += "\n";
        }
        doc += "rho = 1, 0, 2/3\nchart1 = conj(z1)*z1*phi + 1\n";
        const MappingSpec s = parse_mapping(doc);
        CHECK(parse_mapping(format_spec(s)) == s);
    }
}

TEST_CASE("parser totality on fuzzed input") {
    std::mt19937_64 rng(1234);
    const std::string alphabet = "z1234wn=G+-*/^()conjphi ;,\n#r\xCE\xB6\xFF.0";
    std::size_t total = 0;
    const std::string seed_doc = "n=3; G1 = z1; G2 = z1*z3^2 + z2; rho = 0,0,1\nchart1 = phi*conj(z1)*z1\n";
    while (total < (1u << 20)) {
        std::string doc;
        if (rng() % 2) {
            doc = seed_doc;
            const int edits = 1 + rng() % 6;
            for (int e = 0; e < edits; ++e) {
                const std::size_t at = rng() % (doc.size() + 1);
                if (rng() % 2 && at < doc.size())
                    doc.erase(at, 1);
                else
                    doc.insert(doc.begin() + at, alphabet[rng() % alphabet.size()]);
            }
        } else {
            const std::size_t len = rng() % 400;
            for (std::size_t k = 0; k < len; ++k) doc.push_back(alphabet[rng() % alphabet.size()]);
        }
        total += doc.size();
        try {
            const MappingSpec s = parse_mapping(doc);
            CHECK(parse_mapping(format_spec(s)) == s);
        } catch (const SpecError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
        }
    }
}

TEST_CASE("resource limits") {
    std::string deep = "n=2\nG1 = ";
    for (int k = 0; k < 1000; ++k) deep += "(";
    deep += "z1";
    for (int k = 0; k < 1000; ++k) deep += ")";
    deep += "\nrho = 0,1";
    CHECK(parse_error(deep).kind() == SpecError::Kind::Syntax);
    CHECK_NOTHROW(parse_mapping("n=2\nG1 = (z1 + z2 + 1)^64\nrho = 0,1"));
    CHECK(parse_error("n=2\nG1 = (z1 + z2)^64*(z1 + z2)^64*(z1 + z2)^64*(z1 + z2)^64*z1\nrho = 0,1").kind() ==
          SpecError::Kind::Semantic);
    CHECK(parse_error("n=6\nG1 = (z1 + z2 + z3 + z4 + z5 + z6 + 1)^30\nG2=z1\nG3=z1\nG4=z1\nG5=z1\nrho = 1,1,1,1,1,1")
              .kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n=2\nG1 = z1^65\nrho = 0,1").kind() == SpecError::Kind::Semantic);
    CHECK(parse_error("n=2\nG1 = ((z1^8)^8)^8\nrho = 0,1").kind() == SpecError::Kind::Semantic);
}

TEST_CASE("single expressions") {
    const ChartExpr e = parse_expression("phi^2*(z1*conj(z1)) - 1", 2);
    CHECK(e.is_real_valued());
    CHECK(e.parts().size() == 2);
    CHECK(parse_expression("conj(i*z1)", 1) ==
          ChartExpr::polynomial(ComplexRational(Rational(0), Rational(-1)) * MixedPoly::zbar(1, 0)));
}
