#include "fibscope/poly/compiled.hpp"

#include <algorithm>
#include <stdexcept>

namespace fibscope {

CompiledMixed::CompiledMixed(const MixedPoly& p) : n_(p.n()), max_exp_(2 * p.n(), 0) {
    coeffs_.reserve(p.size());
    exps_.reserve(p.size() * 2 * n_);
    for (const auto& [e, c] : p.terms()) {
        coeffs_.push_back(c.to_complex());
        for (std::size_t k = 0; k < e.size(); ++k) {
            exps_.push_back(e[k]);
            max_exp_[k] = std::max(max_exp_[k], e[k]);
        }
    }
}

ScaledValue CompiledMixed::eval(std::span<const std::complex<double>> z) const {
    if (z.size() != n_) throw std::invalid_argument("point dimension mismatch");
    const std::size_t slots = 2 * n_;
    // powers[k] holds slot k's base raised to 0..max_exp_[k]
    std::vector<std::vector<std::complex<double>>> powers(slots);
    for (std::size_t k = 0; k < slots; ++k) {
        const std::complex<double> base = k < n_ ? z[k] : std::conj(z[k - n_]);
        auto& row = powers[k];
        row.resize(max_exp_[k] + 1);
        row[0] = 1.0;
        for (std::uint32_t p = 1; p <= max_exp_[k]; ++p) row[p] = row[p - 1] * base;
    }
    ScaledValue out{0.0, 0.0};
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        std::complex<double> term = coeffs_[t];
        const std::uint32_t* e = &exps_[t * slots];
        for (std::size_t k = 0; k < slots; ++k)
            if (e[k] != 0) term *= powers[k][e[k]];
        out.value += term;
        out.scale += std::abs(term);
    }
    return out;
}

CompiledReal::CompiledReal(const RealPoly& p) : m_(p.num_vars()), max_exp_(p.num_vars(), 0) {
    for (const auto& [e, c] : p.terms()) {
        coeffs_.push_back(c.get_d());
        for (std::size_t k = 0; k < e.size(); ++k) {
            exps_.push_back(e[k]);
            max_exp_[k] = std::max(max_exp_[k], e[k]);
        }
    }
}

double CompiledReal::operator()(std::span<const double> x) const {
    if (x.size() != m_) throw std::invalid_argument("point dimension mismatch");
    std::vector<std::vector<double>> powers(m_);
    for (std::size_t k = 0; k < m_; ++k) {
        auto& row = powers[k];
        row.resize(max_exp_[k] + 1);
        row[0] = 1.0;
        for (std::uint32_t p = 1; p <= max_exp_[k]; ++p) row[p] = row[p - 1] * x[k];
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        double term = coeffs_[t];
        const std::uint32_t* e = &exps_[t * m_];
        for (std::size_t k = 0; k < m_; ++k)
            if (e[k] != 0) term *= powers[k][e[k]];
        acc += term;
    }
    return acc;
}

std::vector<std::complex<double>> to_complex_point(std::span<const double> x) {
    if (x.size() % 2 != 0) throw std::invalid_argument("real point must have even dimension");
    std::vector<std::complex<double>> z(x.size() / 2);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = {x[2 * j], x[2 * j + 1]};
    return z;
}

std::vector<double> to_real_point(std::span<const std::complex<double>> z) {
    std::vector<double> x(2 * z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        x[2 * j] = z[j].real();
        x[2 * j + 1] = z[j].imag();
    }
    return x;
}

}  // namespace fibscope
