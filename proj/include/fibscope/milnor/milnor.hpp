#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fibscope/numeric/sample_cloud.hpp"
#include "fibscope/poly/compiled.hpp"
#include "fibscope/poly/mixed_poly.hpp"
#include "fibscope/poly/real_poly.hpp"

namespace fibscope {

using MixedMatrix = std::vector<std::vector<MixedPoly>>;

/// (n-1) x n matrix of dG_j/dz_i.
MixedMatrix complex_jacobian(const PolyMap& map);

/// Determinant by Laplace expansion memoized on column subsets.
MixedPoly determinant(const MixedMatrix& m, std::size_t n);

/// v_i = (-1)^(1+i) det(Jacobian with column i removed), i = 1..n.
struct CofactorField {
    std::vector<MixedPoly> v;
};

CofactorField cofactor_field(const PolyMap& map);

struct MilnorPresentation {
    PolyMap map;
    WeightVector weights;
    CofactorField cofactors;
    MixedPoly h;                          // 2 sum a_i v_i conj(z_i)
    std::pair<RealPoly, RealPoly> h_real;  // (Re h, Im h)
    RealPolyMap g_rho;                    // (Re G_1, Im G_1, ..., rho)
    /// Maximal minors of D(G, rho); minors[k] drops real column k. Empty
    /// when built without symbolic minors.
    std::vector<RealPoly> minors;

    std::size_t n() const { return map.n; }
    bool degenerate() const { return h.is_zero(); }
};

struct MilnorOptions {
    bool symbolic_minors = true;
};

MilnorPresentation milnor_h(const PolyMap& map, const WeightVector& w, MilnorOptions opts = {});

/// Double-precision evaluation of everything derived from a presentation.
/// Immutable; safe to share across threads.
class MilnorEvaluator {
public:
    explicit MilnorEvaluator(const MilnorPresentation& pres);

    std::size_t n() const { return n_; }

    ScaledValue h(std::span<const double> x) const;
    /// |h(x)| / max(1, sum of term magnitudes).
    double relative_residual(std::span<const double> x) const;
    /// 2 x 2n real Jacobian of (Re h, Im h).
    Eigen::MatrixXd h_jacobian(std::span<const double> x) const;

    Eigen::VectorXcd g(std::span<const std::complex<double>> z) const;
    std::vector<double> g_real(std::span<const double> x) const;
    Eigen::MatrixXcd complex_jacobian(std::span<const std::complex<double>> z) const;
    Eigen::VectorXcd cofactors(std::span<const std::complex<double>> z) const;
    /// Second derivatives d^2 G_j / dz_a dz_b, indexed [j][a][b].
    std::vector<Eigen::MatrixXcd> hessians(std::span<const std::complex<double>> z) const;

    double rho(std::span<const double> x) const;
    /// (2n-1) x 2n real Jacobian of (G, rho), from the symbolic realification.
    Eigen::MatrixXd g_rho_jacobian(std::span<const double> x) const;
    /// Same for (G, phi) with phi = 1/(1 + rho).
    Eigen::MatrixXd g_phi_jacobian(std::span<const double> x) const;

private:
    std::size_t n_;
    std::vector<double> weights_;
    CompiledMixed h_;
    std::vector<CompiledMixed> h_dz_, h_dzbar_;
    std::vector<CompiledMixed> g_;
    std::vector<std::vector<CompiledMixed>> jac_;                   // [j][i]
    std::vector<std::vector<std::vector<CompiledMixed>>> hess_;     // [j][a][b]
    std::vector<CompiledMixed> v_;
    std::vector<std::vector<CompiledReal>> real_jac_;               // (2n-1) x 2n
};

struct EquivalenceViolation {
    std::size_t index;
    std::string kind;  // "rank-mismatch", "minor-mismatch" or "rank-vs-h"
    double h_residual;
    double minor_residual;
    int rank_rho;
    int rank_phi;
};

struct EquivalenceReport {
    double tol = 0.0;
    std::size_t checked = 0;
    std::size_t on_set = 0;  // points with relative |h| <= tol
    std::vector<EquivalenceViolation> violations;

    bool consistent() const { return violations.empty(); }
};

/// Pointwise comparison of the three descriptions of the Milnor set: rank of
/// D(G, rho), rank of D(G, phi), vanishing of the maximal minors and of h.
/// Minors are compared through ||minors|| / (|V| * scale), which equals the
/// relative residual of h identically.
EquivalenceReport verify_equivalence(const MilnorPresentation& pres, const SampleCloud& samples, double tol);

struct SmoothnessReport {
    double tol = 0.0;
    std::size_t checked = 0;
    std::map<int, std::size_t> rank_histogram;
    std::vector<std::size_t> flagged;  // rank < 2
    int implied_dimension = 0;          // 2n - 2 when every sample has rank 2
};

/// Rank of d(Re h, Im h) on samples of the Milnor set.
SmoothnessReport smoothness_probe(const MilnorPresentation& pres, const SampleCloud& samples, double tol);

}  // namespace fibscope
