#include "fibscope/milnor/milnor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "fibscope/error.hpp"
#include "fibscope/numeric/linalg.hpp"

namespace fibscope {

namespace {

// Laplace expansion along the first remaining row; the minor on a column
// subset only depends on the subset, so memoizing on the bitmask shares work
// between all maximal minors of a wide matrix.
template <typename P>
class MinorTable {
public:
    MinorTable(const std::vector<std::vector<P>>& m, P zero, P one)
        : m_(m), zero_(std::move(zero)), one_(std::move(one)) {}

    const P& det(std::uint32_t mask) {
        if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
        const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
        P acc = zero_;
        if (size == 0) {
            acc = one_;
        } else {
            const std::size_t row = m_.size() - size;
            int position = 0;
            for (std::size_t c = 0; c < 32; ++c) {
                if (!(mask & (1U << c))) continue;
                const P& entry = m_[row][c];
                if (!entry.is_zero()) {
                    const P& sub = det(mask & ~(1U << c));
                    if (!sub.is_zero()) {
                        if (position % 2 == 0) {
                            acc = acc + entry * sub;
                        } else {
                            acc = acc - entry * sub;
                        }
                    }
                }
                ++position;
            }
        }
        return memo_.emplace(mask, std::move(acc)).first->second;
    }

private:
    const std::vector<std::vector<P>>& m_;
    P zero_, one_;
    std::unordered_map<std::uint32_t, P> memo_;
};

std::uint32_t all_columns(std::size_t cols) { return cols >= 32 ? ~0U : ((1U << cols) - 1U); }

}  // namespace

MixedMatrix complex_jacobian(const PolyMap& map) {
    if (!map.is_holomorphic()) throw std::invalid_argument("complex_jacobian needs a holomorphic map");
    MixedMatrix j(map.components.size(), std::vector<MixedPoly>(map.n, MixedPoly(map.n)));
    for (std::size_t r = 0; r < map.components.size(); ++r)
        for (std::size_t i = 0; i < map.n; ++i) j[r][i] = map.components[r].wirtinger(i, false);
    return j;
}

MixedPoly determinant(const MixedMatrix& m, std::size_t n) {
    if (m.empty()) return MixedPoly::constant(n, ComplexRational(1));
    if (m.size() != m.front().size() || m.size() > 31) throw std::invalid_argument("determinant of a non-square matrix");
    MinorTable<MixedPoly> table(m, MixedPoly(n), MixedPoly::constant(n, ComplexRational(1)));
    return table.det(all_columns(m.size()));
}

CofactorField cofactor_field(const PolyMap& map) {
    const MixedMatrix j = complex_jacobian(map);
    const std::size_t n = map.n;
    if (n > 31) throw std::invalid_argument("too many variables");
    CofactorField field;
    MinorTable<MixedPoly> table(j, MixedPoly(n), MixedPoly::constant(n, ComplexRational(1)));
    for (std::size_t i = 0; i < n; ++i) {
        MixedPoly d = table.det(all_columns(n) & ~(1U << i));
        field.v.push_back(i % 2 == 0 ? d : -d);
    }
    return field;
}

MilnorPresentation milnor_h(const PolyMap& map, const WeightVector& w, MilnorOptions opts) {
    if (w.size() != map.n) throw std::invalid_argument("weight vector length does not match n");
    if (map.components.size() + 1 != map.n) throw std::invalid_argument("map must have n-1 components");
    MilnorPresentation pres;
    pres.map = map;
    pres.weights = w;
    pres.cofactors = cofactor_field(map);
    const std::size_t n = map.n;
    MixedPoly h(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(w[i]) == 0) continue;
        h = h + MixedPoly::constant(n, ComplexRational(Rational(2 * w[i]))) * pres.cofactors.v[i] * MixedPoly::zbar(n, i);
    }
    pres.h = h;
    pres.h_real = realify(h);
    pres.g_rho = realify(map);
    pres.g_rho.components.push_back(realify_rho(w));
    if (opts.symbolic_minors) {
        const auto jac = real_jacobian(pres.g_rho);
        const std::size_t cols = 2 * n;
        if (cols > 31) throw std::invalid_argument("too many variables");
        MinorTable<RealPoly> table(jac, RealPoly(cols), RealPoly(RealPoly::Base::constant(cols, Rational(1))));
        for (std::size_t k = 0; k < cols; ++k) pres.minors.push_back(table.det(all_columns(cols) & ~(1U << k)));
    }
    return pres;
}

MilnorEvaluator::MilnorEvaluator(const MilnorPresentation& pres) : n_(pres.n()), h_(pres.h) {
    for (const auto& a : pres.weights.values()) weights_.push_back(a.get_d());
    for (std::size_t i = 0; i < n_; ++i) {
        h_dz_.emplace_back(pres.h.wirtinger(i, false));
        h_dzbar_.emplace_back(pres.h.wirtinger(i, true));
    }
    for (const auto& gj : pres.map.components) {
        g_.emplace_back(gj);
        std::vector<CompiledMixed> row;
        std::vector<std::vector<CompiledMixed>> hess;
        for (std::size_t a = 0; a < n_; ++a) {
            const MixedPoly d = gj.wirtinger(a, false);
            row.emplace_back(d);
            std::vector<CompiledMixed> hrow;
            for (std::size_t b = 0; b < n_; ++b) hrow.emplace_back(d.wirtinger(b, false));
            hess.push_back(std::move(hrow));
        }
        jac_.push_back(std::move(row));
        hess_.push_back(std::move(hess));
    }
    for (const auto& vi : pres.cofactors.v) v_.emplace_back(vi);
    for (const auto& row : real_jacobian(pres.g_rho)) {
        std::vector<CompiledReal> compiled;
        for (const auto& p : row) compiled.emplace_back(p);
        real_jac_.push_back(std::move(compiled));
    }
}

ScaledValue MilnorEvaluator::h(std::span<const double> x) const {
    const auto z = to_complex_point(x);
    return h_.eval(z);
}

double MilnorEvaluator::relative_residual(std::span<const double> x) const {
    const ScaledValue v = h(x);
    return std::abs(v.value) / std::max(1.0, v.scale);
}

Eigen::MatrixXd MilnorEvaluator::h_jacobian(std::span<const double> x) const {
    const auto z = to_complex_point(x);
    Eigen::MatrixXd jac(2, 2 * n_);
    const std::complex<double> i(0.0, 1.0);
    for (std::size_t j = 0; j < n_; ++j) {
        const std::complex<double> dz = h_dz_[j](z), dzb = h_dzbar_[j](z);
        const std::complex<double> dx = dz + dzb;
        const std::complex<double> dy = i * (dz - dzb);
        jac(0, 2 * j) = dx.real();
        jac(1, 2 * j) = dx.imag();
        jac(0, 2 * j + 1) = dy.real();
        jac(1, 2 * j + 1) = dy.imag();
    }
    return jac;
}

Eigen::VectorXcd MilnorEvaluator::g(std::span<const std::complex<double>> z) const {
    Eigen::VectorXcd out(g_.size());
    for (std::size_t j = 0; j < g_.size(); ++j) out(j) = g_[j](z);
    return out;
}

std::vector<double> MilnorEvaluator::g_real(std::span<const double> x) const {
    const auto z = to_complex_point(x);
    std::vector<double> out;
    out.reserve(2 * g_.size());
    for (const auto& gj : g_) {
        const std::complex<double> v = gj(z);
        out.push_back(v.real());
        out.push_back(v.imag());
    }
    return out;
}

Eigen::MatrixXcd MilnorEvaluator::complex_jacobian(std::span<const std::complex<double>> z) const {
    Eigen::MatrixXcd out(jac_.size(), n_);
    for (std::size_t j = 0; j < jac_.size(); ++j)
        for (std::size_t i = 0; i < n_; ++i) out(j, i) = jac_[j][i](z);
    return out;
}

Eigen::VectorXcd MilnorEvaluator::cofactors(std::span<const std::complex<double>> z) const {
    Eigen::VectorXcd out(n_);
    for (std::size_t i = 0; i < n_; ++i) out(i) = v_[i](z);
    return out;
}

std::vector<Eigen::MatrixXcd> MilnorEvaluator::hessians(std::span<const std::complex<double>> z) const {
    std::vector<Eigen::MatrixXcd> out;
    for (const auto& hj : hess_) {
        Eigen::MatrixXcd m(n_, n_);
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b) m(a, b) = hj[a][b](z);
        out.push_back(std::move(m));
    }
    return out;
}

double MilnorEvaluator::rho(std::span<const double> x) const {
    double r = 0.0;
    for (std::size_t j = 0; j < n_; ++j) r += weights_[j] * (x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1]);
    return r;
}

Eigen::MatrixXd MilnorEvaluator::g_rho_jacobian(std::span<const double> x) const {
    Eigen::MatrixXd out(real_jac_.size(), 2 * n_);
    for (std::size_t r = 0; r < real_jac_.size(); ++r)
        for (std::size_t c = 0; c < 2 * n_; ++c) out(r, c) = real_jac_[r][c](x);
    return out;
}

Eigen::MatrixXd MilnorEvaluator::g_phi_jacobian(std::span<const double> x) const {
    Eigen::MatrixXd out = g_rho_jacobian(x);
    const double denom = 1.0 + rho(x);
    out.row(out.rows() - 1) *= -1.0 / (denom * denom);
    return out;
}

namespace {

Eigen::VectorXd maximal_minors(const Eigen::MatrixXd& d) {
    const Eigen::Index cols = d.cols();
    Eigen::VectorXd out(cols);
    for (Eigen::Index k = 0; k < cols; ++k) {
        Eigen::MatrixXd sub(d.rows(), cols - 1);
        for (Eigen::Index c = 0, t = 0; c < cols; ++c)
            if (c != k) sub.col(t++) = d.col(c);
        out(k) = sub.determinant();
    }
    return out;
}

// G rows to unit length; the last row by its natural size, so that a
// gradient of rho that is small only because x is close to {grad rho = 0}
// reads as small (the same convention as the relative residual of h).
Eigen::MatrixXd scale_rows(Eigen::MatrixXd m, double last_scale) {
    const Eigen::Index last = m.rows() - 1;
    for (Eigen::Index r = 0; r < last; ++r) {
        const double len = m.row(r).norm();
        if (len > 0.0) m.row(r) /= len;
    }
    if (last_scale > 0.0) m.row(last) /= last_scale;
    return m;
}

}  // namespace

EquivalenceReport verify_equivalence(const MilnorPresentation& pres, const SampleCloud& samples, double tol) {
    if (samples.empty()) throw std::invalid_argument("verify_equivalence needs at least one sample");
    if (samples.n != pres.n()) throw std::invalid_argument("sample dimension mismatch");
    const MilnorEvaluator ev(pres);
    const int full = static_cast<int>(2 * pres.n() - 1);
    double max_weight = 0.0;
    for (const Rational& a : pres.weights.values()) max_weight = std::max(max_weight, a.get_d());
    EquivalenceReport report;
    report.tol = tol;
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        const auto& x = samples.points[idx];
        const auto z = to_complex_point(x);
        const ScaledValue hv = ev.h(x);
        const double scale = std::max(1.0, hv.scale);
        const double h_res = std::abs(hv.value) / scale;

        const Eigen::MatrixXd d_rho = ev.g_rho_jacobian(x);
        const Eigen::MatrixXd d_phi = ev.g_phi_jacobian(x);
        const double rho = ev.rho(x);
        const double rho_scale = 2.0 * max_weight * std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        const int rank_rho = numerical_rank(scale_rows(d_rho, rho_scale), tol);
        const int rank_phi = numerical_rank(scale_rows(d_phi, rho_scale / ((1.0 + rho) * (1.0 + rho))), tol);

        const double v_norm = ev.cofactors(z).norm();
        const double minor_norm = maximal_minors(d_rho).norm();
        const double minor_res = v_norm > 0.0 ? minor_norm / (v_norm * scale) : 0.0;

        const bool h_zero = h_res <= tol;
        const bool minors_zero = minor_res <= tol;
        if (h_zero) ++report.on_set;
        ++report.checked;
        auto flag = [&](const char* kind) {
            report.violations.push_back({idx, kind, h_res, minor_res, rank_rho, rank_phi});
        };
        if (rank_rho != rank_phi) flag("rank-mismatch");
        if (h_zero != minors_zero) flag("minor-mismatch");
        if (h_zero != (rank_rho < full)) flag("rank-vs-h");
    }
    std::sort(report.violations.begin(), report.violations.end(),
              [](const auto& a, const auto& b) { return std::tie(a.index, a.kind) < std::tie(b.index, b.kind); });
    return report;
}

SmoothnessReport smoothness_probe(const MilnorPresentation& pres, const SampleCloud& samples, double tol) {
    if (pres.degenerate()) throw DomainError("identically zero presentation");
    if (samples.n != pres.n()) throw std::invalid_argument("sample dimension mismatch");
    const MilnorEvaluator ev(pres);
    SmoothnessReport report;
    report.tol = tol;
    for (std::size_t idx = 0; idx < samples.size(); ++idx) {
        const auto& x = samples.points[idx];
        const double res = ev.relative_residual(x);
        if (res > tol)
            throw DomainError("sample " + std::to_string(idx) + " is off the Milnor set (residual " +
                              std::to_string(res) + ")");
        const int r = numerical_rank(ev.h_jacobian(x), 1e-8);
        ++report.rank_histogram[r];
        ++report.checked;
        if (r < 2) report.flagged.push_back(idx);
    }
    report.implied_dimension = report.flagged.empty() ? static_cast<int>(2 * pres.n() - 2) : -1;
    return report;
}

}  // namespace fibscope
