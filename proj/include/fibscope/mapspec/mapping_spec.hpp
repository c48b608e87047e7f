#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fibscope/poly/mixed_poly.hpp"
#include "fibscope/poly/real_poly.hpp"

namespace fibscope {

/// Chart function written as sum_k phi^k P_k(z, conj z), where
/// phi = 1/(1 + rho). Real-valued by construction (each P_k is real-valued).
class ChartExpr {
public:
    ChartExpr() = default;
    explicit ChartExpr(std::size_t n) : n_(n) {}
    ChartExpr(std::size_t n, std::map<unsigned, MixedPoly> parts);

    static ChartExpr polynomial(const MixedPoly& p);
    static ChartExpr phi(std::size_t n);

    std::size_t n() const { return n_; }
    const std::map<unsigned, MixedPoly>& parts() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }
    /// No phi factors at all.
    bool is_polynomial() const { return parts_.empty() || (parts_.size() == 1 && parts_.begin()->first == 0); }
    bool is_constant() const;
    bool is_real_valued() const;

    /// Largest total degree of the polynomial coefficients, ignoring phi; -1 when zero.
    long polynomial_degree() const;

    ChartExpr conj() const;
    ChartExpr pow(unsigned k) const;

    /// Value at x in R^2n; `rho` is rho(x). Returns the real part.
    double evaluate(std::span<const std::complex<double>> z, double rho) const;

    std::string to_string() const;

    friend ChartExpr operator+(const ChartExpr& a, const ChartExpr& b);
    friend ChartExpr operator-(const ChartExpr& a, const ChartExpr& b);
    friend ChartExpr operator-(const ChartExpr& a);
    friend ChartExpr operator*(const ChartExpr& a, const ChartExpr& b);
    friend ChartExpr operator*(const ComplexRational& s, const ChartExpr& a);
    friend bool operator==(const ChartExpr& a, const ChartExpr& b) { return a.n_ == b.n_ && a.parts_ == b.parts_; }

private:
    void add_part(unsigned k, const MixedPoly& p);

    std::size_t n_ = 0;
    std::map<unsigned, MixedPoly> parts_;
};

/// Validated mapping document: G, rho weights and optional chart functions.
struct MappingSpec {
    std::size_t n = 0;
    PolyMap map;
    WeightVector weights;
    std::vector<ChartExpr> charts;
    /// One entry per chart; nullopt when no decay line was given.
    std::vector<std::optional<unsigned>> decay_exponents;

    friend bool operator==(const MappingSpec& a, const MappingSpec& b) {
        return a.n == b.n && a.map == b.map && a.weights == b.weights && a.charts == b.charts &&
               a.decay_exponents == b.decay_exponents;
    }
};

/// Parse or validation failure with a 1-based source position.
class SpecError : public std::runtime_error {
public:
    enum class Kind { Syntax, Semantic };

    SpecError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

    Kind kind() const { return kind_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& detail() const { return detail_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

/// Parses the line-oriented mapping grammar. Statements are separated by
/// newlines or ';', comments start with '#'.
MappingSpec parse_mapping(std::string_view text);

/// Canonical document; parse_mapping(format_spec(s)) == s.
std::string format_spec(const MappingSpec& spec);

/// Parse a single expression in n variables (conj and phi allowed).
ChartExpr parse_expression(std::string_view text, std::size_t n);

}  // namespace fibscope
