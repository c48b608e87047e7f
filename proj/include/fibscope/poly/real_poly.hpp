#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fibscope/poly/mixed_poly.hpp"
#include "fibscope/poly/sparse_poly.hpp"

namespace fibscope {

/// Polynomial in real variables x_1..x_m with rational coefficients.
class RealPoly : public SparsePolynomial<Rational> {
public:
    using Base = SparsePolynomial<Rational>;

    RealPoly() = default;
    explicit RealPoly(std::size_t m) : Base(m) {}
    RealPoly(Base base) : Base(std::move(base)) {}

    Rational evaluate(std::span<const Rational> x) const;
    double evaluate(std::span<const double> x) const;

    RealPoly partial(std::size_t index) const { return RealPoly(derivative(index)); }

    /// Canonical text in x1..xm.
    std::string to_string() const;
};

/// Real polynomial map R^m -> R^k.
struct RealPolyMap {
    std::size_t m_in = 0;
    std::vector<RealPoly> components;
};

/// Holomorphic polynomial map G: C^n -> C^(n-1).
struct PolyMap {
    std::size_t n = 0;
    std::vector<MixedPoly> components;

    bool is_holomorphic() const;
};

bool operator==(const PolyMap& a, const PolyMap& b);

/// Nonnegative rational weights defining rho = sum a_j |z_j|^2.
class WeightVector {
public:
    WeightVector() = default;
    /// Throws std::invalid_argument on negative entries or an all-zero vector.
    explicit WeightVector(std::vector<Rational> a);

    const std::vector<Rational>& values() const { return a_; }
    std::size_t size() const { return a_.size(); }
    const Rational& operator[](std::size_t j) const { return a_[j]; }
    bool all_positive() const;

    friend bool operator==(const WeightVector& x, const WeightVector& y) { return x.a_ == y.a_; }

private:
    std::vector<Rational> a_;
};

/// Real and imaginary parts of p under z_j = x_(2j-1) + i x_(2j).
std::pair<RealPoly, RealPoly> realify(const MixedPoly& p);

/// 2(n-1) real components (Re G_1, Im G_1, Re G_2, ...) of a holomorphic map.
RealPolyMap realify(const PolyMap& map);

/// rho = sum a_j (x_(2j-1)^2 + x_(2j)^2).
RealPoly realify_rho(const WeightVector& w);

/// rho as a mixed polynomial sum a_j z_j conj(z_j).
MixedPoly rho_mixed(const WeightVector& w);

/// Matrix of real partial derivatives, rows = components.
std::vector<std::vector<RealPoly>> real_jacobian(const RealPolyMap& map);

}  // namespace fibscope
