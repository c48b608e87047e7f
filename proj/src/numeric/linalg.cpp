#include "fibscope/numeric/linalg.hpp"

namespace fibscope {

namespace {

template <typename Matrix>
int rank_from_svd(const Matrix& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * s(0)) ++r;
    return r;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m, double tol) { return rank_from_svd(m, tol); }
int numerical_rank(const Eigen::MatrixXcd& m, double tol) { return rank_from_svd(m, tol); }

Eigen::MatrixXd normalize_rows(Eigen::MatrixXd m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double len = m.row(r).norm();
        if (len > 0.0) m.row(r) /= len;
    }
    return m;
}

double sigma_min(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    return s(s.size() - 1);
}

}  // namespace fibscope
