#include "fibscope/poly/mixed_poly.hpp"

#include <stdexcept>

namespace fibscope {

MixedPoly::MixedPoly(std::size_t n, Base base) : Base(std::move(base)), n_(n) {
    if (num_vars() != 2 * n) throw std::invalid_argument("mixed polynomial needs 2n exponent slots");
}

MixedPoly MixedPoly::constant(std::size_t n, const ComplexRational& c) {
    return MixedPoly(n, Base::constant(2 * n, c));
}

MixedPoly MixedPoly::z(std::size_t n, std::size_t index) {
    if (index >= n) throw std::out_of_range("variable index out of range");
    return MixedPoly(n, Base::variable(2 * n, index));
}

MixedPoly MixedPoly::zbar(std::size_t n, std::size_t index) {
    if (index >= n) throw std::out_of_range("variable index out of range");
    return MixedPoly(n, Base::variable(2 * n, n + index));
}

bool MixedPoly::is_holomorphic() const { return max_conj_degree() == 0; }

std::uint64_t MixedPoly::max_conj_degree() const {
    std::uint64_t best = 0;
    for (const auto& [e, c] : terms()) {
        std::uint64_t d = 0;
        for (std::size_t j = n_; j < 2 * n_; ++j) d += e[j];
        best = std::max(best, d);
    }
    return best;
}

std::uint64_t MixedPoly::min_conj_degree() const {
    if (is_zero()) return 0;
    std::uint64_t best = UINT64_MAX;
    for (const auto& [e, c] : terms()) {
        std::uint64_t d = 0;
        for (std::size_t j = n_; j < 2 * n_; ++j) d += e[j];
        best = std::min(best, d);
    }
    return best;
}

MixedPoly MixedPoly::conj() const {
    MixedPoly out(n_);
    for (const auto& [e, c] : terms()) {
        Exponents swapped(2 * n_);
        for (std::size_t j = 0; j < n_; ++j) {
            swapped[j] = e[n_ + j];
            swapped[n_ + j] = e[j];
        }
        out.add_term(std::move(swapped), c.conj());
    }
    return out;
}

MixedPoly MixedPoly::wirtinger(std::size_t index, bool conjugate) const {
    if (index >= n_) throw std::out_of_range("variable index out of range");
    return MixedPoly(n_, derivative(conjugate ? n_ + index : index));
}

MixedPoly MixedPoly::leading_form() const {
    if (is_zero()) throw std::invalid_argument("leading form of the zero polynomial");
    if (!is_holomorphic()) throw std::invalid_argument("leading form requires a holomorphic polynomial");
    return MixedPoly(n_, homogeneous_part(static_cast<std::uint64_t>(degree())));
}

ComplexRational MixedPoly::evaluate(std::span<const ComplexRational> point) const {
    if (point.size() != n_) throw std::invalid_argument("point dimension mismatch");
    std::vector<ComplexRational> slots(2 * n_);
    for (std::size_t j = 0; j < n_; ++j) {
        slots[j] = point[j];
        slots[n_ + j] = point[j].conj();
    }
    ComplexRational acc(0);
    for (const auto& [e, c] : terms()) {
        ComplexRational t = c;
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k] != 0) t *= fibscope::pow(slots[k], e[k]);
        acc += t;
    }
    return acc;
}

std::complex<double> MixedPoly::evaluate(std::span<const std::complex<double>> point) const {
    if (point.size() != n_) throw std::invalid_argument("point dimension mismatch");
    std::complex<double> acc = 0.0;
    for (const auto& [e, c] : terms()) {
        std::complex<double> t = c.to_complex();
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::uint32_t k = 0; k < e[j]; ++k) t *= point[j];
            for (std::uint32_t k = 0; k < e[n_ + j]; ++k) t *= std::conj(point[j]);
        }
        acc += t;
    }
    return acc;
}

std::vector<std::string> default_variable_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t j = 0; j < n; ++j) names.push_back("z" + std::to_string(j + 1));
    return names;
}

std::string MixedPoly::to_string(std::span<const std::string> names) const {
    std::vector<std::string> base = names.empty() ? default_variable_names(n_)
                                                  : std::vector<std::string>(names.begin(), names.end());
    if (base.size() != n_) throw std::invalid_argument("variable name count mismatch");
    std::vector<std::string> tokens = base;
    for (const auto& name : base) tokens.push_back("conj(" + name + ")");
    return format_terms(terms(), tokens);
}

namespace {

bool is_negative(const ComplexRational& c) {
    if (c.is_real()) return sgn(c.re) < 0;
    return sgn(c.re) == 0 && sgn(c.im) < 0;
}

}  // namespace

std::string format_terms(const SparsePolynomial<ComplexRational>::Terms& terms,
                         const std::vector<std::string>& var_tokens, const std::string& suffix) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += var_tokens.at(k);
            if (e[k] > 1) mono += "^" + std::to_string(e[k]);
        }
        if (!suffix.empty()) mono += mono.empty() ? suffix : "*" + suffix;

        const bool negative = is_negative(c);
        const ComplexRational mag = negative ? -c : c;
        std::string text;
        if (mono.empty()) {
            text = fibscope::to_string(mag);
        } else if (mag == ComplexRational(1)) {
            text = mono;
        } else {
            text = fibscope::to_string(mag) + "*" + mono;
        }
        if (first) {
            out += negative ? "-" + text : text;
            first = false;
        } else {
            out += negative ? " - " + text : " + " + text;
        }
    }
    return out;
}

}  // namespace fibscope
