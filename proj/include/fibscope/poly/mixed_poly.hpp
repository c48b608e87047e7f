#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fibscope/poly/complex_rational.hpp"
#include "fibscope/poly/sparse_poly.hpp"

namespace fibscope {

/// Polynomial in z_1..z_n and their conjugates with coefficients in Q(i).
///
/// Exponent vectors have length 2n: the first n entries are powers of z_j,
/// the last n are powers of conj(z_j). The degree of a term is the sum of
/// both blocks.
class MixedPoly : public SparsePolynomial<ComplexRational> {
public:
    using Base = SparsePolynomial<ComplexRational>;

    MixedPoly() = default;
    explicit MixedPoly(std::size_t n) : Base(2 * n), n_(n) {}
    MixedPoly(std::size_t n, Base base);

    static MixedPoly constant(std::size_t n, const ComplexRational& c);
    static MixedPoly z(std::size_t n, std::size_t index);
    static MixedPoly zbar(std::size_t n, std::size_t index);

    std::size_t n() const { return n_; }

    bool is_holomorphic() const;
    /// Largest conjugate-block degree over all terms (0 for holomorphic input).
    std::uint64_t max_conj_degree() const;
    std::uint64_t min_conj_degree() const;

    /// Real-valued as a function: conj(p) == p.
    bool is_real_valued() const { return conj() == *this; }

    MixedPoly conj() const;

    /// Formal derivative treating z_i and conj(z_i) as independent; 0-based index.
    MixedPoly wirtinger(std::size_t index, bool conjugate) const;

    /// Homogeneous part of top total degree. Requires a nonzero holomorphic input.
    MixedPoly leading_form() const;

    ComplexRational evaluate(std::span<const ComplexRational> point) const;
    std::complex<double> evaluate(std::span<const std::complex<double>> point) const;

    /// Canonical text form; `names` overrides z1..zn if non-empty.
    std::string to_string(std::span<const std::string> names = {}) const;

    MixedPoly pow(unsigned k) const { return MixedPoly(n_, Base::pow(k)); }

    friend MixedPoly operator+(const MixedPoly& a, const MixedPoly& b) {
        return MixedPoly(a.n_, static_cast<const Base&>(a) + static_cast<const Base&>(b));
    }
    friend MixedPoly operator-(const MixedPoly& a, const MixedPoly& b) {
        return MixedPoly(a.n_, static_cast<const Base&>(a) - static_cast<const Base&>(b));
    }
    friend MixedPoly operator-(const MixedPoly& a) { return MixedPoly(a.n_, -static_cast<const Base&>(a)); }
    friend MixedPoly operator*(const MixedPoly& a, const MixedPoly& b) {
        return MixedPoly(a.n_, static_cast<const Base&>(a) * static_cast<const Base&>(b));
    }
    friend MixedPoly operator*(const ComplexRational& s, const MixedPoly& a) {
        return MixedPoly(a.n_, s * static_cast<const Base&>(a));
    }
    friend MixedPoly operator*(const MixedPoly& a, const ComplexRational& s) { return s * a; }

private:
    std::size_t n_ = 0;
};

/// Default variable names z1..zn.
std::vector<std::string> default_variable_names(std::size_t n);

/// Shared term printer for canonical forms. `var_tokens[k]` names exponent
/// slot k; `suffix` is appended to every monomial.
std::string format_terms(const SparsePolynomial<ComplexRational>::Terms& terms,
                         const std::vector<std::string>& var_tokens,
                         const std::string& suffix = {});

}  // namespace fibscope
