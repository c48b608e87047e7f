#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fibscope {

using Exponents = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

/// Graded lexicographic order: total degree first, then lexicographic on the
/// exponent vector. Canonical printing walks this order from the top.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const auto da = total_degree(a);
        const auto db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

/// Sparse multivariate polynomial with exact coefficients. Zero coefficients
/// are never stored, so structural equality is polynomial equality.
template <typename Coeff>
class SparsePolynomial {
public:
    using Terms = std::map<Exponents, Coeff, GradedLexLess>;

    SparsePolynomial() = default;
    explicit SparsePolynomial(std::size_t num_vars) : num_vars_(num_vars) {}

    static SparsePolynomial constant(std::size_t num_vars, const Coeff& c) {
        SparsePolynomial p(num_vars);
        p.add_term(Exponents(num_vars, 0), c);
        return p;
    }

    static SparsePolynomial variable(std::size_t num_vars, std::size_t index) {
        SparsePolynomial p(num_vars);
        Exponents e(num_vars, 0);
        e.at(index) = 1;
        p.add_term(std::move(e), Coeff(1));
        return p;
    }

    std::size_t num_vars() const { return num_vars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    /// Coefficient of the constant term (zero when absent).
    Coeff constant_term() const {
        auto it = terms_.find(Exponents(num_vars_, 0));
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    /// Total degree; -1 for the zero polynomial.
    long degree() const {
        if (terms_.empty()) return -1;
        return static_cast<long>(total_degree(terms_.rbegin()->first));
    }

    void add_term(Exponents e, const Coeff& c) {
        if (e.size() != num_vars_) throw std::invalid_argument("exponent length does not match variable count");
        if (is_coeff_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (is_coeff_zero(it->second)) terms_.erase(it);
        }
    }

    SparsePolynomial& operator+=(const SparsePolynomial& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    SparsePolynomial& operator-=(const SparsePolynomial& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    SparsePolynomial& operator*=(const Coeff& s) {
        if (is_coeff_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
    friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
    friend SparsePolynomial operator-(SparsePolynomial a) {
        for (auto& [e, c] : a.terms_) c = -c;
        return a;
    }
    friend SparsePolynomial operator*(SparsePolynomial a, const Coeff& s) { return a *= s; }
    friend SparsePolynomial operator*(const Coeff& s, SparsePolynomial a) { return a *= s; }

    friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
        a.check_same(b);
        SparsePolynomial out(a.num_vars_);
        Exponents e(a.num_vars_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    SparsePolynomial& operator*=(const SparsePolynomial& o) { return *this = *this * o; }

    SparsePolynomial pow(unsigned k) const {
        SparsePolynomial result = constant(num_vars_, Coeff(1));
        SparsePolynomial base = *this;
        while (k > 0) {
            if (k & 1U) result *= base;
            k >>= 1U;
            if (k > 0) base *= base;
        }
        return result;
    }

    /// Formal partial derivative in variable `index`.
    SparsePolynomial derivative(std::size_t index) const {
        SparsePolynomial out(num_vars_);
        for (const auto& [e, c] : terms_) {
            if (e.at(index) == 0) continue;
            Exponents d = e;
            d[index] -= 1;
            out.add_term(std::move(d), c * Coeff(static_cast<long>(e[index])));
        }
        return out;
    }

    /// Sum of terms of exactly the given total degree.
    SparsePolynomial homogeneous_part(std::uint64_t deg) const {
        SparsePolynomial out(num_vars_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == deg) out.terms_.emplace(e, c);
        return out;
    }

    friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
        return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const SparsePolynomial& a, const SparsePolynomial& b) { return !(a == b); }

protected:
    void check_same(const SparsePolynomial& o) const {
        if (o.num_vars_ != num_vars_) throw std::invalid_argument("mismatched variable counts");
    }

    static bool is_coeff_zero(const Coeff& c) {
        if constexpr (requires { c.is_zero(); }) {
            return c.is_zero();
        } else {
            return sgn(c) == 0;
        }
    }

    std::size_t num_vars_ = 0;
    Terms terms_;
};

}  // namespace fibscope
