#include "fibscope/numeric/sampling.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fibscope/error.hpp"
#include "fibscope/numeric/linalg.hpp"

namespace fibscope {

void RadiusSchedule::validate() const {
    if (radii.size() < 3) throw std::invalid_argument("radius schedule needs at least 3 radii");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) throw std::invalid_argument("radii must be positive");
        if (k > 0 && !(radii[k] > radii[k - 1])) throw std::invalid_argument("radii must be strictly increasing");
    }
    if (samples_per_radius < 1) throw std::invalid_argument("sample budget must be at least 1");
    if (!(newton_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("iteration budget must be at least 1");
}

namespace {

using Vec = Eigen::VectorXd;

Vec to_vec(const std::vector<double>& x) { return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size())); }
std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec random_unit(Stream& rng, std::size_t dim) {
    Vec v(static_cast<Eigen::Index>(dim));
    do {
        for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.normal();
    } while (v.norm() == 0.0);
    return v / v.norm();
}

}  // namespace

std::vector<double> random_sphere_point(Stream& rng, std::size_t n, double radius) {
    const std::size_t dim = 2 * n;
    // Alternate isotropic starts with multi-scale ones whose complex
    // coordinates have log-uniform magnitudes down to R^-2.5 relative to the
    // sphere: thin branches such as |z| ~ 1/R are otherwise never reached.
    Vec dir = random_unit(rng, dim);
    if (rng.uniform() < 0.5 && radius > 1.0) {
        for (std::size_t j = 0; j < n; ++j) {
            const double factor = std::pow(radius, -2.5 * rng.uniform());
            dir(static_cast<Eigen::Index>(2 * j)) *= factor;
            dir(static_cast<Eigen::Index>(2 * j + 1)) *= factor;
        }
        if (dir.norm() == 0.0) dir = random_unit(rng, dim);
        dir /= dir.norm();
    }
    return to_std(radius * dir);
}

MilnorSphereSolver::MilnorSphereSolver(const MilnorEvaluator& ev, double radius, NewtonOptions opts)
    : ev_(ev), radius_(radius), opts_(opts) {}

Eigen::Vector3d MilnorSphereSolver::slice_residual(const std::vector<double>& x, double h_scale) const {
    const ScaledValue hv = ev_.h(x);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return {hv.value.real() / h_scale, hv.value.imag() / h_scale, (r2 - radius_ * radius_) / (radius_ * radius_)};
}

bool MilnorSphereSolver::on_constraints(const std::vector<double>& x) const {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return ev_.relative_residual(x) <= opts_.tol && std::abs(std::sqrt(r2) - radius_) <= opts_.tol * radius_;
}

std::optional<std::vector<double>> MilnorSphereSolver::newton(Stream& rng) const {
    const std::size_t dim = 2 * ev_.n();
    const Vec x0 = to_vec(random_sphere_point(rng, ev_.n(), radius_));
    // orthonormal basis of a random 3-dimensional slice
    Eigen::MatrixXd g(static_cast<Eigen::Index>(dim), 3);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < 3; ++c) g(r, c) = rng.normal();
    const Eigen::MatrixXd basis = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
                                  Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), 3);

    Eigen::Vector3d t = Eigen::Vector3d::Zero();
    auto point = [&](const Eigen::Vector3d& s) { return to_std(x0 + basis * s); };
    std::vector<double> x = point(t);
    int polish = 0;
    for (int it = 0; it < opts_.max_iterations; ++it) {
        const double scale = std::max(1.0, ev_.h(x).scale);
        const Eigen::Vector3d f = slice_residual(x, scale);
        if (on_constraints(x)) {
            // A couple of extra steps push the residual down, then a final
            // correction in full coordinates: inside the slice, small
            // coordinates are differences of O(R) terms and lose digits.
            if (++polish > 2 || f.norm() < 1e-15) return project(x).value_or(x);
        }
        Eigen::Matrix3d jac;
        const Eigen::MatrixXd dh = ev_.h_jacobian(x);
        const Vec xv = to_vec(x);
        jac.row(0) = (dh.row(0) * basis) / scale;
        jac.row(1) = (dh.row(1) * basis) / scale;
        jac.row(2) = (2.0 * xv.transpose() * basis) / (radius_ * radius_);
        const Eigen::Vector3d step = jac.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-f);
        if (!step.allFinite()) return std::nullopt;
        // Armijo backtracking on |f|^2 at fixed scaling
        const double merit = f.squaredNorm();
        double alpha = 1.0;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            const Eigen::Vector3d trial = t + alpha * step;
            const std::vector<double> xt = point(trial);
            const double mt = slice_residual(xt, scale).squaredNorm();
            if (std::isfinite(mt) && mt <= (1.0 - 1e-4 * alpha) * merit) {
                t = trial;
                x = xt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return on_constraints(x) ? std::optional(project(x).value_or(x)) : std::nullopt;
    }
    if (on_constraints(x)) return project(x).value_or(x);
    return std::nullopt;
}

std::optional<std::vector<double>> MilnorSphereSolver::project(std::vector<double> x) const {
    int polish = 0;
    for (int it = 0; it < opts_.max_iterations; ++it) {
        const double scale = std::max(1.0, ev_.h(x).scale);
        const Eigen::Vector3d f = slice_residual(x, scale);
        if (!f.allFinite()) return std::nullopt;
        if (on_constraints(x) && (++polish > 1 || f.norm() < 1e-15)) return x;
        const Eigen::MatrixXd dh = ev_.h_jacobian(x);
        Eigen::MatrixXd jac(3, dh.cols());
        jac.row(0) = dh.row(0) / scale;
        jac.row(1) = dh.row(1) / scale;
        jac.row(2) = 2.0 * to_vec(x).transpose() / (radius_ * radius_);
        // minimum-norm correction
        const Vec step = jac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-f);
        if (!step.allFinite()) return std::nullopt;
        const double merit = f.squaredNorm();
        double alpha = 1.0;
        bool accepted = false;
        for (int back = 0; back < 20; ++back) {
            const std::vector<double> xt = to_std(to_vec(x) + alpha * step);
            const double mt = slice_residual(xt, scale).squaredNorm();
            if (std::isfinite(mt) && mt <= (1.0 - 1e-4 * alpha) * merit) {
                x = xt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    if (on_constraints(x)) return x;
    return std::nullopt;
}

std::vector<double> MilnorSphereSolver::descend(std::vector<double> x, const std::vector<double>& target,
                                                int iterations) const {
    const std::size_t dim = 2 * ev_.n();
    const std::size_t m = target.size();
    auto misfit = [&](const std::vector<double>& p) {
        const std::vector<double> gv = ev_.g_real(p);
        Vec r(static_cast<Eigen::Index>(m));
        for (std::size_t k = 0; k < m; ++k) r(static_cast<Eigen::Index>(k)) = target[k] - gv[k];
        return r;
    };
    Vec r = misfit(x);
    double lambda = -1.0;
    for (int it = 0; it < iterations; ++it) {
        // tangent space of the constraints at x
        const double scale = std::max(1.0, ev_.h(x).scale);
        const Eigen::MatrixXd dh = ev_.h_jacobian(x);
        Eigen::MatrixXd c(3, static_cast<Eigen::Index>(dim));
        c.row(0) = dh.row(0) / scale;
        c.row(1) = dh.row(1) / scale;
        c.row(2) = 2.0 * to_vec(x).transpose() / radius_;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalize_rows(c), Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        Eigen::Index rank = 0;
        for (Eigen::Index k = 0; k < s.size(); ++k)
            if (s(k) > 1e-10 * s(0)) ++rank;
        const Eigen::MatrixXd tangent = svd.matrixV().rightCols(static_cast<Eigen::Index>(dim) - rank);
        const Eigen::MatrixXd a = ev_.g_rho_jacobian(x).topRows(static_cast<Eigen::Index>(m)) * tangent;
        const Eigen::MatrixXd normal = a.transpose() * a;
        const Vec rhs = a.transpose() * r;
        if (lambda < 0.0) lambda = 1e-3 * std::max(normal.diagonal().maxCoeff(), 1e-300);
        const double current = r.squaredNorm();
        bool improved = false;
        while (lambda < 1e300) {
            Eigen::MatrixXd damped = normal;
            damped.diagonal() += Vec::Constant(normal.rows(), lambda);
            Vec u = damped.ldlt().solve(rhs);
            Vec dx = tangent * u;
            // keep steps small relative to the sphere so projection stays local
            const double cap = 0.25 * radius_;
            if (dx.norm() > cap) dx *= cap / dx.norm();
            if (!dx.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            auto projected = project(to_std(to_vec(x) + dx));
            if (projected) {
                const Vec rt = misfit(*projected);
                if (rt.squaredNorm() < current) {
                    x = std::move(*projected);
                    r = rt;
                    lambda = std::max(lambda / 3.0, 1e-300);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!improved || current - r.squaredNorm() <= 1e-14 * current) break;
    }
    return x;
}

SampleCloud newton_on_milnor(const MilnorPresentation& pres, double radius, std::size_t count, std::uint64_t seed,
                             NewtonOptions opts, std::size_t band_index) {
    if (pres.degenerate()) throw DomainError("identically zero presentation");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    const MilnorEvaluator ev(pres);
    const MilnorSphereSolver solver(ev, radius, opts);
    std::vector<std::optional<std::vector<double>>> found(count);
    std::vector<std::size_t> used(count, 0);
    parallel_for(count, [&](std::size_t p) {
        for (std::size_t a = 0; a < std::max<std::size_t>(1, opts.attempts_per_point); ++a) {
            Stream rng(seed, {0x6e65, band_index, p, a});
            ++used[p];
            if ((found[p] = solver.newton(rng))) break;
        }
    });
    SampleCloud cloud;
    cloud.n = pres.n();
    cloud.seed = seed;
    std::size_t tried = 0;
    for (std::size_t p = 0; p < count; ++p) {
        tried += used[p];
        if (!found[p]) continue;
        const auto& x = *found[p];
        cloud.add(x, ev.relative_residual(x), band_index, ev.g_real(x));
    }
    if (cloud.empty()) {
        std::ostringstream msg;
        msg << "sampling starved at radius " << radius;
        throw DomainError(msg.str());
    }
    std::ostringstream rate;
    rate << static_cast<double>(cloud.size()) / static_cast<double>(tried);
    cloud.meta["success_rate"] = rate.str();
    cloud.meta["attempts"] = std::to_string(tried);
    std::ostringstream r;
    r << radius;
    cloud.meta["radius"] = r.str();
    std::ostringstream t;
    t << opts.tol;
    cloud.meta["tol"] = t.str();
    return cloud;
}

}  // namespace fibscope
