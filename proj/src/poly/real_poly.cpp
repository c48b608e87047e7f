#include "fibscope/poly/real_poly.hpp"

#include <map>
#include <tuple>
#include <stdexcept>

namespace fibscope {

Rational RealPoly::evaluate(std::span<const Rational> x) const {
    if (x.size() != num_vars()) throw std::invalid_argument("point dimension mismatch");
    Rational acc(0);
    for (const auto& [e, c] : terms()) {
        Rational t = c;
        for (std::size_t k = 0; k < e.size(); ++k) {
            for (std::uint32_t p = 0; p < e[k]; ++p) t *= x[k];
        }
        acc += t;
    }
    return acc;
}

double RealPoly::evaluate(std::span<const double> x) const {
    if (x.size() != num_vars()) throw std::invalid_argument("point dimension mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms()) {
        double t = c.get_d();
        for (std::size_t k = 0; k < e.size(); ++k) {
            for (std::uint32_t p = 0; p < e[k]; ++p) t *= x[k];
        }
        acc += t;
    }
    return acc;
}

std::string RealPoly::to_string() const {
    SparsePolynomial<ComplexRational>::Terms lifted;
    for (const auto& [e, c] : terms()) lifted.emplace(e, ComplexRational(c));
    std::vector<std::string> tokens;
    for (std::size_t k = 0; k < num_vars(); ++k) tokens.push_back("x" + std::to_string(k + 1));
    return format_terms(lifted, tokens);
}

bool PolyMap::is_holomorphic() const {
    for (const auto& c : components)
        if (!c.is_holomorphic()) return false;
    return true;
}

bool operator==(const PolyMap& a, const PolyMap& b) { return a.n == b.n && a.components == b.components; }

WeightVector::WeightVector(std::vector<Rational> a) : a_(std::move(a)) {
    bool any_positive = false;
    for (const auto& v : a_) {
        if (sgn(v) < 0) throw std::invalid_argument("weights must be nonnegative");
        if (sgn(v) > 0) any_positive = true;
    }
    if (!any_positive) throw std::invalid_argument("weights must not all be zero");
}

bool WeightVector::all_positive() const {
    for (const auto& v : a_)
        if (sgn(v) <= 0) return false;
    return true;
}

namespace {

using ComplexRealPoly = SparsePolynomial<ComplexRational>;

// (x + i y)^a (x - i y)^b in slots (2j, 2j+1) of a 2n-variable polynomial.
ComplexRealPoly real_expansion(std::size_t two_n, std::size_t j, std::uint32_t a, std::uint32_t b) {
    ComplexRealPoly x = ComplexRealPoly::variable(two_n, 2 * j);
    ComplexRealPoly y = ComplexRealPoly::variable(two_n, 2 * j + 1);
    ComplexRealPoly zj = x + ComplexRational::unit() * y;
    ComplexRealPoly zbarj = x - ComplexRational::unit() * y;
    return zj.pow(a) * zbarj.pow(b);
}

}  // namespace

std::pair<RealPoly, RealPoly> realify(const MixedPoly& p) {
    const std::size_t n = p.n();
    const std::size_t two_n = 2 * n;
    std::map<std::tuple<std::size_t, std::uint32_t, std::uint32_t>, ComplexRealPoly> cache;
    ComplexRealPoly acc(two_n);
    for (const auto& [e, c] : p.terms()) {
        ComplexRealPoly term = ComplexRealPoly::constant(two_n, c);
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint32_t a = e[j];
            const std::uint32_t b = e[n + j];
            if (a == 0 && b == 0) continue;
            auto key = std::make_tuple(j, a, b);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, real_expansion(two_n, j, a, b)).first;
            term *= it->second;
        }
        acc += term;
    }
    RealPoly re(two_n);
    RealPoly im(two_n);
    for (const auto& [e, c] : acc.terms()) {
        re.add_term(e, c.re);
        im.add_term(e, c.im);
    }
    return {std::move(re), std::move(im)};
}

RealPolyMap realify(const PolyMap& map) {
    RealPolyMap out;
    out.m_in = 2 * map.n;
    for (const auto& g : map.components) {
        auto [re, im] = realify(g);
        out.components.push_back(std::move(re));
        out.components.push_back(std::move(im));
    }
    return out;
}

RealPoly realify_rho(const WeightVector& w) {
    const std::size_t two_n = 2 * w.size();
    RealPoly rho(two_n);
    for (std::size_t j = 0; j < w.size(); ++j) {
        for (std::size_t s = 0; s < 2; ++s) {
            Exponents e(two_n, 0);
            e[2 * j + s] = 2;
            rho.add_term(std::move(e), w[j]);
        }
    }
    return rho;
}

MixedPoly rho_mixed(const WeightVector& w) {
    const std::size_t n = w.size();
    MixedPoly rho(n);
    for (std::size_t j = 0; j < n; ++j) rho = rho + ComplexRational(w[j]) * (MixedPoly::z(n, j) * MixedPoly::zbar(n, j));
    return rho;
}

std::vector<std::vector<RealPoly>> real_jacobian(const RealPolyMap& map) {
    std::vector<std::vector<RealPoly>> jac;
    for (const auto& comp : map.components) {
        std::vector<RealPoly> row;
        for (std::size_t k = 0; k < map.m_in; ++k) row.push_back(comp.partial(k));
        jac.push_back(std::move(row));
    }
    return jac;
}

}  // namespace fibscope
