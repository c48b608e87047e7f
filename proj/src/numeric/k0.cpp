#include "fibscope/numeric/k0.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "fibscope/milnor/milnor.hpp"
#include "fibscope/numeric/rng.hpp"
#include "fibscope/poly/compiled.hpp"

namespace fibscope {

std::string to_string(ExactCheck c) {
    switch (c) {
        case ExactCheck::NotApplicable: return "not-applicable";
        case ExactCheck::ProvenEmpty: return "proven-empty";
        case ExactCheck::ProvenNonempty: return "proven-nonempty";
        case ExactCheck::Undecided: return "undecided";
    }
    return "undecided";
}

namespace {

// Bivariate coefficient table c[a][b] of z1^a z2^b.
using Table = std::vector<std::vector<ComplexRational>>;

Table table_of(const MixedPoly& p) {
    Table t;
    for (const auto& [e, c] : p.terms()) {
        if (t.size() <= e[0]) t.resize(e[0] + 1);
        for (auto& row : t)
            if (row.size() <= e[1]) row.resize(e[1] + 1);
        t[e[0]][e[1]] = c;
    }
    for (auto& row : t) {
        std::size_t width = 0;
        for (const auto& r : t) width = std::max(width, r.size());
        row.resize(width);
    }
    return t;
}

Table transpose(const Table& t) {
    if (t.empty()) return t;
    Table out(t.front().size(), std::vector<ComplexRational>(t.size()));
    for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = 0; b < t[a].size(); ++b) out[b][a] = t[a][b];
    return out;
}

std::size_t degree_in_second(const Table& t) {
    std::size_t d = 0;
    for (const auto& row : t)
        for (std::size_t b = 0; b < row.size(); ++b)
            if (!row[b].is_zero()) d = std::max(d, b);
    return d;
}

// Coefficients in the first variable after substituting the second.
std::vector<ComplexRational> specialize(const Table& t, const ComplexRational& value) {
    std::vector<ComplexRational> out(t.size());
    for (std::size_t a = 0; a < t.size(); ++a) {
        ComplexRational acc;
        for (std::size_t b = t[a].size(); b-- > 0;) acc = acc * value + t[a][b];
        out[a] = acc;
    }
    return out;
}

ComplexRational det(std::vector<std::vector<ComplexRational>> m) {
    const std::size_t n = m.size();
    ComplexRational d(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && m[pivot][c].is_zero()) ++pivot;
        if (pivot == n) return ComplexRational(0);
        if (pivot != c) {
            std::swap(m[pivot], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            const ComplexRational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return d;
}

// Sylvester resultant for the formal degrees p.size()-1 and q.size()-1.
ComplexRational sylvester(const std::vector<ComplexRational>& p, const std::vector<ComplexRational>& q) {
    const std::size_t dp = p.size() - 1, dq = q.size() - 1, size = dp + dq;
    if (size == 0) return ComplexRational(1);
    std::vector<std::vector<ComplexRational>> m(size, std::vector<ComplexRational>(size));
    for (std::size_t r = 0; r < dq; ++r)
        for (std::size_t k = 0; k <= dp; ++k) m[r][r + k] = p[dp - k];
    for (std::size_t r = 0; r < dp; ++r)
        for (std::size_t k = 0; k <= dq; ++k) m[dq + r][r + k] = q[dq - k];
    return det(std::move(m));
}

bool leading_is_constant(const Table& t) {
    const auto& lead = t.back();
    for (std::size_t b = 1; b < lead.size(); ++b)
        if (!lead[b].is_zero()) return false;
    return !lead.front().is_zero();
}

}  // namespace

ExactCheck common_zero_check(const MixedPoly& p, const MixedPoly& q, std::string* detail) {
    auto say = [&](const char* text, ExactCheck c) {
        if (detail) *detail = text;
        return c;
    };
    if (p.n() != 2 || q.n() != 2 || !p.is_holomorphic() || !q.is_holomorphic())
        throw std::invalid_argument("exact check needs two holomorphic polynomials in two variables");
    if (p.is_zero() && q.is_zero()) return say("both partials vanish identically", ExactCheck::ProvenNonempty);
    if ((p.is_constant() && !p.is_zero()) || (q.is_constant() && !q.is_zero()))
        return say("a partial is a nonzero constant", ExactCheck::ProvenEmpty);
    if (p.is_zero() || q.is_zero()) return say("one partial vanishes and the other is not constant", ExactCheck::ProvenNonempty);

    Table tp = table_of(p), tq = table_of(q);
    // eliminate z1 unless neither polynomial involves it
    if (tp.size() == 1 && tq.size() == 1) {
        tp = transpose(tp);
        tq = transpose(tq);
    }
    const std::size_t bound = (tp.size() - 1) * degree_in_second(tq) + (tq.size() - 1) * degree_in_second(tp);
    std::vector<ComplexRational> values;
    for (std::size_t node = 0; node <= bound; ++node) {
        const ComplexRational t(static_cast<long>(node));
        values.push_back(sylvester(specialize(tp, t), specialize(tq, t)));
    }
    const bool all_equal = std::all_of(values.begin(), values.end(), [&](const ComplexRational& v) { return v == values.front(); });
    if (all_equal && values.front().is_zero()) return say("resultant vanishes identically (common factor)", ExactCheck::ProvenNonempty);
    if (all_equal) return say("resultant is a nonzero constant", ExactCheck::ProvenEmpty);
    // The resultant has a root t0; with a constant leading coefficient that
    // root lifts to a common zero.
    if (leading_is_constant(tp) || leading_is_constant(tq))
        return say("nonconstant resultant with a monic partial", ExactCheck::ProvenNonempty);
    return say("nonconstant resultant; leading coefficients may vanish at its roots", ExactCheck::Undecided);
}

K0Report k0_probe(const PolyMap& map, std::uint64_t seed, std::size_t attempts, const K0Options& opts) {
    if (!map.is_holomorphic()) throw std::invalid_argument("k0_probe needs a holomorphic map");
    const std::size_t n = map.n;
    const CofactorField field = cofactor_field(map);
    std::vector<CompiledMixed> minors;
    std::vector<std::vector<CompiledMixed>> partials(n);
    for (std::size_t i = 0; i < n; ++i) {
        minors.emplace_back(field.v[i]);
        for (std::size_t j = 0; j < n; ++j) partials[i].emplace_back(field.v[i].wirtinger(j, false));
    }

    auto residual_of = [&](const std::vector<std::complex<double>>& z) {
        Eigen::VectorXcd r(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(i)) = minors[i](z);
        return r;
    };

    struct Outcome {
        std::vector<std::complex<double>> z;
        double residual;
        double step;
    };
    std::vector<std::optional<Outcome>> outcomes(attempts);
    parallel_for(attempts, [&](std::size_t attempt) {
        Stream rng(seed, {0x6b30, attempt});
        const double scale = std::pow(10.0, rng.uniform(-1.0, 1.0));
        std::vector<std::complex<double>> z(n);
        for (auto& c : z) c = scale * std::complex<double>(rng.normal(), rng.normal());
        Eigen::VectorXcd r = residual_of(z);
        auto newton_step = [&]() -> Eigen::VectorXcd {
            Eigen::MatrixXcd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = partials[i][j](z);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
            svd.setThreshold(1e-12);
            return -svd.solve(r);
        };
        for (int it = 0; it < opts.max_iterations; ++it) {
            if (r.cwiseAbs().maxCoeff() <= opts.residual_tol) break;
            const Eigen::VectorXcd delta = newton_step();
            if (!delta.allFinite()) break;
            // backtracking on |r|^2
            double t = 1.0;
            bool moved = false;
            for (int k = 0; k < 30; ++k, t *= 0.5) {
                std::vector<std::complex<double>> trial(z);
                for (std::size_t j = 0; j < n; ++j) trial[j] += t * delta(static_cast<Eigen::Index>(j));
                const Eigen::VectorXcd rt = residual_of(trial);
                if (rt.allFinite() && rt.squaredNorm() < r.squaredNorm()) {
                    z = std::move(trial);
                    r = rt;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        const double res = r.cwiseAbs().maxCoeff();
        if (!(res <= opts.residual_tol)) return;
        // the size of the next full step measures how settled the point is
        const Eigen::VectorXcd last = newton_step();
        const double step = last.allFinite() ? last.norm() : std::numeric_limits<double>::infinity();
        double modulus = 0.0;
        for (const auto& c : z) modulus += std::norm(c);
        modulus = std::sqrt(modulus);
        if (step <= opts.step_tol * std::max(1.0, modulus) && modulus <= opts.max_modulus)
            outcomes[attempt] = Outcome{z, res, step};
    });

    K0Report rep;
    rep.attempts = attempts;
    for (auto& o : outcomes) {
        if (!o) continue;
        ++rep.converged;
        if (!rep.found) {
            rep.found = true;
            rep.witness = o->z;
            rep.residual = o->residual;
            rep.step = o->step;
        }
    }

    if (n == 2) {
        const MixedPoly p = map.components.front().wirtinger(0, false);
        const MixedPoly q = map.components.front().wirtinger(1, false);
        if (std::max(p.degree(), q.degree()) <= static_cast<long>(opts.exact_max_degree)) {
            rep.exact = common_zero_check(p, q, &rep.exact_detail);
        } else {
            rep.exact_detail = "partials above the exact degree limit";
        }
    }
    return rep;
}

}  // namespace fibscope
