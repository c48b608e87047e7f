#include "fibscope/mapspec/mapping_spec.hpp"

#include <cmath>

namespace fibscope {

ChartExpr::ChartExpr(std::size_t n, std::map<unsigned, MixedPoly> parts) : n_(n) {
    for (auto& [k, p] : parts) add_part(k, p);
}

ChartExpr ChartExpr::polynomial(const MixedPoly& p) {
    ChartExpr c(p.n());
    c.add_part(0, p);
    return c;
}

ChartExpr ChartExpr::phi(std::size_t n) {
    ChartExpr c(n);
    c.add_part(1, MixedPoly::constant(n, ComplexRational(1)));
    return c;
}

void ChartExpr::add_part(unsigned k, const MixedPoly& p) {
    if (p.n() != n_) throw std::invalid_argument("mismatched variable counts");
    auto it = parts_.find(k);
    if (it == parts_.end()) {
        if (!p.is_zero()) parts_.emplace(k, p);
        return;
    }
    it->second = it->second + p;
    if (it->second.is_zero()) parts_.erase(it);
}

bool ChartExpr::is_constant() const {
    return parts_.empty() || (is_polynomial() && parts_.begin()->second.is_constant());
}

bool ChartExpr::is_real_valued() const {
    for (const auto& [k, p] : parts_)
        if (!p.is_real_valued()) return false;
    return true;
}

long ChartExpr::polynomial_degree() const {
    long d = -1;
    for (const auto& [k, p] : parts_) d = std::max(d, p.degree());
    return d;
}

ChartExpr ChartExpr::conj() const {
    ChartExpr out(n_);
    for (const auto& [k, p] : parts_) out.add_part(k, p.conj());
    return out;
}

ChartExpr ChartExpr::pow(unsigned k) const {
    ChartExpr result = polynomial(MixedPoly::constant(n_, ComplexRational(1)));
    ChartExpr base = *this;
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return result;
}

double ChartExpr::evaluate(std::span<const std::complex<double>> z, double rho) const {
    const double phi = 1.0 / (1.0 + rho);
    double acc = 0.0;
    for (const auto& [k, p] : parts_) acc += std::pow(phi, static_cast<double>(k)) * p.evaluate(z).real();
    return acc;
}

std::string ChartExpr::to_string() const {
    if (parts_.empty()) return "0";
    std::vector<std::string> tokens = default_variable_names(n_);
    const std::vector<std::string> base = tokens;
    for (const auto& name : base) tokens.push_back("conj(" + name + ")");
    std::string out;
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
        const unsigned k = it->first;
        std::string suffix = k == 0 ? "" : (k == 1 ? "phi" : "phi^" + std::to_string(k));
        std::string piece = format_terms(it->second.terms(), tokens, suffix);
        if (out.empty()) {
            out = piece;
        } else if (piece.front() == '-') {
            out += " - " + piece.substr(1);
        } else {
            out += " + " + piece;
        }
    }
    return out;
}

ChartExpr operator+(const ChartExpr& a, const ChartExpr& b) {
    ChartExpr out = a;
    for (const auto& [k, p] : b.parts_) out.add_part(k, p);
    return out;
}

ChartExpr operator-(const ChartExpr& a) {
    ChartExpr out(a.n_);
    for (const auto& [k, p] : a.parts_) out.add_part(k, -p);
    return out;
}

ChartExpr operator-(const ChartExpr& a, const ChartExpr& b) { return a + (-b); }

ChartExpr operator*(const ChartExpr& a, const ChartExpr& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("mismatched variable counts");
    ChartExpr out(a.n_);
    for (const auto& [ka, pa] : a.parts_)
        for (const auto& [kb, pb] : b.parts_) out.add_part(ka + kb, pa * pb);
    return out;
}

ChartExpr operator*(const ComplexRational& s, const ChartExpr& a) {
    ChartExpr out(a.n_);
    for (const auto& [k, p] : a.parts_) out.add_part(k, s * p);
    return out;
}

}  // namespace fibscope
