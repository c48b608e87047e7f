#include "fibscope/numeric/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fibscope/error.hpp"
#include "fibscope/numeric/linalg.hpp"
#include "fibscope/numeric/rng.hpp"

namespace fibscope {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Empty: return "empty";
        case Verdict::Nonempty: return "nonempty";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(DifferentialMeasure m) {
    switch (m) {
        case DifferentialMeasure::SigmaMin: return "sigma-min";
        case DifferentialMeasure::OperatorNorm: return "operator-norm";
        case DifferentialMeasure::Kuo: return "kuo";
    }
    return "sigma-min";
}

DifferentialMeasure parse_measure(const std::string& s) {
    if (s == "sigma-min") return DifferentialMeasure::SigmaMin;
    if (s == "operator-norm") return DifferentialMeasure::OperatorNorm;
    if (s == "kuo") return DifferentialMeasure::Kuo;
    throw std::invalid_argument("unknown differential measure '" + s + "'");
}

namespace {

using Vec = Eigen::VectorXd;

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

double norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

std::vector<std::vector<std::size_t>> single_linkage(const std::vector<std::vector<double>>& points, double tol) {
    DisjointSets sets(points.size());
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b)
            if (distance(points[a], points[b]) <= tol) sets.unite(a, b);
    std::vector<std::vector<std::size_t>> groups;
    std::vector<long> slot(points.size(), -1);
    for (std::size_t a = 0; a < points.size(); ++a) {
        const std::size_t root = sets.find(a);
        if (slot[root] < 0) {
            slot[root] = static_cast<long>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[root])].push_back(a);
    }
    return groups;
}

std::vector<std::complex<double>> complex_of(const std::vector<double>& v) {
    std::vector<std::complex<double>> c(v.size() / 2);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = {v[2 * k], v[2 * k + 1]};
    return c;
}

}  // namespace

std::vector<Cluster> persistent_clusters(const std::vector<std::vector<double>>& points,
                                         const std::vector<std::size_t>& bands, std::size_t last_band, double tol) {
    std::vector<Cluster> out;
    for (const auto& group : single_linkage(points, tol)) {
        std::set<std::size_t> support;
        for (std::size_t idx : group) support.insert(bands[idx]);
        if (support.size() < 3 || !support.count(last_band)) continue;
        Cluster c;
        c.count = group.size();
        c.bands.assign(support.begin(), support.end());
        const std::size_t dim = points[group.front()].size();
        c.center.assign(dim, 0.0);
        std::size_t top = 0;
        for (std::size_t idx : group) {
            if (bands[idx] != last_band) continue;
            for (std::size_t k = 0; k < dim; ++k) c.center[k] += points[idx][k];
            ++top;
        }
        for (double& v : c.center) v /= static_cast<double>(top);
        for (std::size_t b : c.bands) {
            double s = 0.0;
            for (std::size_t idx : group)
                if (bands[idx] == b) s = std::max(s, distance(points[idx], c.center));
            c.spread_by_band.push_back(s);
        }
        c.spread = c.spread_by_band.back();
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) { return a.center < b.center; });
    return out;
}

std::vector<double> descent_target(std::uint64_t seed, std::size_t sample, std::size_t dim) {
    Stream rng(seed, {0x7467, sample});
    std::vector<double> c(dim);
    double len = 0.0;
    do {
        len = 0.0;
        for (double& v : c) {
            v = rng.normal();
            len += v * v;
        }
    } while (len == 0.0);
    const double r = std::pow(rng.uniform(), 1.0 / static_cast<double>(dim)) / std::sqrt(len);
    for (double& v : c) v *= r;
    return c;
}

double differential_measure(const Eigen::MatrixXcd& jac, DifferentialMeasure m) {
    if (jac.size() == 0) return 0.0;
    switch (m) {
        case DifferentialMeasure::SigmaMin: return sigma_min(jac);
        case DifferentialMeasure::OperatorNorm: {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
            return svd.singularValues()(0);
        }
        case DifferentialMeasure::Kuo: {
            // min over rows of the distance from row i to the span of the others
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < jac.rows(); ++i) {
                Eigen::VectorXcd row = jac.row(i).transpose();
                if (jac.rows() > 1) {
                    Eigen::MatrixXcd others(jac.rows() - 1, jac.cols());
                    for (Eigen::Index r = 0, t = 0; r < jac.rows(); ++r)
                        if (r != i) others.row(t++) = jac.row(r);
                    const Eigen::MatrixXcd basis = others.transpose();
                    const Eigen::VectorXcd coef = basis.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(row);
                    row -= basis * coef;
                }
                best = std::min(best, row.norm());
            }
            return best;
        }
    }
    return 0.0;
}

namespace {

struct RetainedPoint {
    std::vector<double> x;
    std::vector<double> g;
    double residual;
};

void fill_schedule(AsymptoticReport& rep, const RadiusSchedule& schedule, std::uint64_t seed,
                   const AsymptoticOptions& opts) {
    rep.radii = schedule.radii;
    rep.samples_per_radius = schedule.samples_per_radius;
    rep.seed = seed;
    rep.cluster_tol = opts.cluster_tol;
    rep.image_cutoff = opts.image_cutoff;
}

}  // namespace

AsymptoticReport estimate_asymptotic_set(const MappingSpec& spec, const RadiusSchedule& schedule, std::uint64_t seed,
                                         const AsymptoticOptions& opts) {
    schedule.validate();
    const MilnorPresentation pres = milnor_h(spec.map, spec.weights, {false});
    if (pres.degenerate()) throw DomainError("identically zero presentation");
    const MilnorEvaluator ev(pres);
    const std::size_t m = schedule.radii.size();
    const std::size_t per = schedule.samples_per_radius;
    const std::size_t gdim = 2 * (spec.n - 1);
    NewtonOptions nopts;
    nopts.tol = schedule.newton_tol;
    nopts.max_iterations = schedule.max_iterations;

    std::vector<MilnorSphereSolver> solvers;
    for (double r : schedule.radii) solvers.emplace_back(ev, r, nopts);

    struct Slot {
        bool reached = false;
        std::optional<RetainedPoint> point;
    };
    std::vector<Slot> slots(m * per);
    parallel_for(slots.size(), [&](std::size_t task) {
        const std::size_t k = task / per, a = task % per;
        const std::vector<double> target = descent_target(seed, a, gdim);
        Slot& slot = slots[task];
        for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, opts.restarts); ++attempt) {
            Stream rng(seed, {0x7367, k, a, attempt});
            auto x = solvers[k].newton(rng);
            if (!x) continue;
            slot.reached = true;
            std::vector<double> y = solvers[k].descend(*x, target, opts.descent_iterations);
            if (!solvers[k].on_constraints(y)) continue;
            std::vector<double> g = ev.g_real(y);
            if (norm(g) > opts.image_cutoff) continue;
            slot.point = RetainedPoint{y, std::move(g), ev.relative_residual(y)};
            break;
        }
    });

    AsymptoticReport rep;
    fill_schedule(rep, schedule, seed, opts);
    rep.found_by_band.assign(m, 0);
    rep.retained_by_band.assign(m, 0);
    rep.retained.n = spec.n;
    rep.retained.seed = seed;
    std::vector<std::vector<double>> images;
    std::vector<std::size_t> bands;
    for (std::size_t task = 0; task < slots.size(); ++task) {
        const std::size_t k = task / per;
        if (slots[task].reached) ++rep.found_by_band[k];
        if (!slots[task].point) continue;
        ++rep.retained_by_band[k];
        const auto& p = *slots[task].point;
        rep.retained.add(p.x, p.residual, k, p.g);
        images.push_back(p.g);
        bands.push_back(k);
    }

    const bool starved_all =
        std::all_of(rep.found_by_band.begin(), rep.found_by_band.end(), [](std::size_t c) { return c == 0; });
    for (std::size_t k = 0; k < m; ++k) {
        if (rep.found_by_band[k] == 0) {
            std::ostringstream msg;
            msg << "sampling starved at radius " << schedule.radii[k];
            rep.diagnostics.push_back(msg.str());
        }
    }

    rep.clusters = persistent_clusters(images, bands, m - 1, opts.cluster_tol);
    if (starved_all || rep.found_by_band[m - 1] == 0) {
        rep.verdict = Verdict::Inconclusive;
    } else {
        const double floor = 1e-3 * opts.cluster_tol;
        const bool persists = std::any_of(rep.clusters.begin(), rep.clusters.end(), [&](const Cluster& c) {
            return c.spread <= opts.cluster_tol && c.spread_by_band.back() <= std::max(c.spread_by_band.front(), floor);
        });
        rep.verdict = persists ? Verdict::Nonempty : Verdict::Empty;
    }

    if (rep.retained.distinct_bands() >= 3) {
        rep.direction_clusters =
            tangent_cone_directions(rep.retained, spec.map, opts.direction_tol, opts.direction_link);
    } else {
        rep.diagnostics.push_back("too few radius bands with bounded images for tangent-cone directions");
    }
    return rep;
}

namespace {

/// Levenberg-Marquardt on the holomorphic system R * J(z)^T y = 0,
/// eps * (G(z) - c) = 0 over |z| = R, |y| = 1 (or on the entries of R * J
/// for the operator norm).
class KinfSolver {
public:
    // The differential block is divided by the acceptance threshold so that
    // the target term competes on the scale that matters for the filter.
    KinfSolver(const MilnorEvaluator& ev, double radius, double threshold, double eps, DifferentialMeasure measure)
        : ev_(ev),
          n_(ev.n()),
          radius_(radius),
          weight_(radius / threshold),
          eps_(eps),
          use_y_(measure != DifferentialMeasure::OperatorNorm) {}

    std::vector<double> solve(Stream& rng, const std::vector<std::complex<double>>& target, int iterations) const {
        std::vector<double> x = random_sphere_point(rng, n_, radius_);
        Eigen::VectorXcd y(static_cast<Eigen::Index>(n_ - 1));
        for (Eigen::Index j = 0; j < y.size(); ++j) y(j) = {rng.normal(), rng.normal()};
        if (y.norm() == 0.0) y(0) = 1.0;
        y /= y.norm();
        return refine(std::move(x), y, target, iterations);
    }

    // Start from a given point with y set to the left singular vector of
    // the smallest singular value.
    std::vector<double> solve_from(std::vector<double> x, const std::vector<std::complex<double>>& target,
                                   int iterations) const {
        const Eigen::MatrixXcd jac = ev_.complex_jacobian(to_complex_point(x));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeFullU);
        Eigen::VectorXcd y = svd.matrixU().col(jac.rows() - 1).conjugate();
        return refine(std::move(x), y, target, iterations);
    }

private:
    std::vector<double> refine(std::vector<double> x, Eigen::VectorXcd y, const std::vector<std::complex<double>>& target,
                               int iterations) const {
        Eigen::VectorXcd r = residual(x, y, target);
        double lambda = -1.0;
        for (int it = 0; it < iterations; ++it) {
            const Eigen::MatrixXd a = real_jacobian(x, y);
            const Vec rr = realify(r);
            const Eigen::MatrixXd normal = a.transpose() * a;
            const Vec rhs = -a.transpose() * rr;
            if (lambda < 0.0) lambda = 1e-3 * std::max(normal.diagonal().maxCoeff(), 1e-300);
            const double current = r.squaredNorm();
            bool improved = false;
            while (lambda < 1e300) {
                Eigen::MatrixXd damped = normal;
                damped.diagonal() += Vec::Constant(normal.rows(), lambda);
                const Vec step = damped.ldlt().solve(rhs);
                if (!step.allFinite()) {
                    lambda *= 10.0;
                    continue;
                }
                auto [xt, yt] = retract(x, y, step);
                const Eigen::VectorXcd rt = residual(xt, yt, target);
                if (rt.allFinite() && rt.squaredNorm() < current) {
                    x = std::move(xt);
                    y = std::move(yt);
                    r = rt;
                    lambda = std::max(lambda / 3.0, 1e-300);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if (!improved || current - r.squaredNorm() <= 1e-14 * current) break;
        }
        return x;
    }

    Eigen::VectorXcd residual(const std::vector<double>& x, const Eigen::VectorXcd& y,
                              const std::vector<std::complex<double>>& target) const {
        const auto z = to_complex_point(x);
        const Eigen::MatrixXcd jac = ev_.complex_jacobian(z);
        const Eigen::VectorXcd g = ev_.g(z);
        const Eigen::Index k = static_cast<Eigen::Index>(n_ - 1);
        Eigen::VectorXcd first = use_y_ ? Eigen::VectorXcd(weight_ * jac.transpose() * y)
                                        : Eigen::VectorXcd(weight_ * jac.reshaped());
        Eigen::VectorXcd out(first.size() + k);
        out.head(first.size()) = first;
        for (Eigen::Index j = 0; j < k; ++j) out(first.size() + j) = eps_ * (g(j) - target[static_cast<std::size_t>(j)]);
        return out;
    }

    // Columns: real parts / imaginary parts of each complex unknown, tangent
    // to the product of spheres.
    Eigen::MatrixXd real_jacobian(const std::vector<double>& x, const Eigen::VectorXcd& y) const {
        const auto z = to_complex_point(x);
        const Eigen::MatrixXcd jac = ev_.complex_jacobian(z);
        const auto hess = ev_.hessians(z);
        const Eigen::Index n = static_cast<Eigen::Index>(n_), k = n - 1;
        const Eigen::Index first = use_y_ ? n : n * k;
        const Eigen::Index unknowns = use_y_ ? n + k : n;
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(first + k, unknowns);
        if (use_y_) {
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index c = 0; c < n; ++c) {
                    std::complex<double> s = 0.0;
                    for (Eigen::Index j = 0; j < k; ++j) s += hess[static_cast<std::size_t>(j)](i, c) * y(j);
                    d(i, c) = weight_ * s;
                }
                for (Eigen::Index j = 0; j < k; ++j) d(i, n + j) = weight_ * jac(j, i);
            }
        } else {
            // entry (j, i) of J stored column-major at i * k + j
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < k; ++j)
                    for (Eigen::Index c = 0; c < n; ++c)
                        d(i * k + j, c) = weight_ * hess[static_cast<std::size_t>(j)](i, c);
        }
        for (Eigen::Index j = 0; j < k; ++j)
            for (Eigen::Index c = 0; c < n; ++c) d(first + j, c) = eps_ * jac(j, c);

        Eigen::MatrixXd a(2 * d.rows(), 2 * d.cols());
        for (Eigen::Index r = 0; r < d.rows(); ++r)
            for (Eigen::Index c = 0; c < d.cols(); ++c) {
                const double p = d(r, c).real(), q = d(r, c).imag();
                a(2 * r, 2 * c) = p;
                a(2 * r, 2 * c + 1) = -q;
                a(2 * r + 1, 2 * c) = q;
                a(2 * r + 1, 2 * c + 1) = p;
            }
        // project columns onto the tangent space of the spheres
        Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(a.cols(), a.cols());
        Vec xr = Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
        xr /= xr.norm();
        proj.topLeftCorner(2 * n, 2 * n) -= xr * xr.transpose();
        if (use_y_) {
            Vec yr(2 * k);
            for (Eigen::Index j = 0; j < k; ++j) {
                yr(2 * j) = y(j).real();
                yr(2 * j + 1) = y(j).imag();
            }
            proj.bottomRightCorner(2 * k, 2 * k) -= yr * yr.transpose();
        }
        return a * proj;
    }

    static Vec realify(const Eigen::VectorXcd& r) {
        Vec out(2 * r.size());
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            out(2 * i) = r(i).real();
            out(2 * i + 1) = r(i).imag();
        }
        return out;
    }

    std::pair<std::vector<double>, Eigen::VectorXcd> retract(const std::vector<double>& x, const Eigen::VectorXcd& y,
                                                             const Vec& step) const {
        const std::size_t dim = 2 * n_;
        std::vector<double> xt(dim);
        double len = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            xt[c] = x[c] + step(static_cast<Eigen::Index>(c));
            len += xt[c] * xt[c];
        }
        len = std::sqrt(len);
        for (double& v : xt) v *= radius_ / len;
        Eigen::VectorXcd yt = y;
        if (use_y_) {
            for (Eigen::Index j = 0; j < y.size(); ++j)
                yt(j) += std::complex<double>(step(static_cast<Eigen::Index>(dim) + 2 * j),
                                              step(static_cast<Eigen::Index>(dim) + 2 * j + 1));
            yt /= yt.norm();
        }
        return {xt, yt};
    }

    const MilnorEvaluator& ev_;
    std::size_t n_;
    double radius_;
    double weight_;
    double eps_;
    bool use_y_;
};

}  // namespace

AsymptoticReport estimate_kinf(const MappingSpec& spec, const RadiusSchedule& schedule, std::uint64_t seed,
                               const AsymptoticOptions& opts, const AsymptoticReport* sg) {
    schedule.validate();
    const MilnorPresentation pres = milnor_h(spec.map, spec.weights, {false});
    const MilnorEvaluator ev(pres);
    const std::size_t m = schedule.radii.size();
    const std::size_t per = schedule.samples_per_radius;
    const std::size_t gdim = 2 * (spec.n - 1);

    AsymptoticReport rep;
    fill_schedule(rep, schedule, seed, opts);
    for (double r : schedule.radii)
        rep.kinf_thresholds.push_back(opts.kinf_threshold / std::sqrt(r / schedule.radii.front()));

    std::vector<KinfSolver> solvers;
    for (std::size_t k = 0; k < m; ++k)
        solvers.emplace_back(ev, schedule.radii[k], rep.kinf_thresholds[k], opts.target_weight, opts.measure);

    // Warm starts replay the Milnor-set sampling streams, so every point
    // retained for S_G is itself tested against the filter (and refined if
    // it fails); cold starts follow from random points of the sphere.
    NewtonOptions nopts;
    nopts.tol = schedule.newton_tol;
    nopts.max_iterations = schedule.max_iterations;
    std::vector<MilnorSphereSolver> milnor;
    if (!pres.degenerate())
        for (double r : schedule.radii) milnor.emplace_back(ev, r, nopts);

    std::vector<std::optional<RetainedPoint>> slots(m * per);
    parallel_for(slots.size(), [&](std::size_t task) {
        const std::size_t k = task / per, a = task % per;
        const std::vector<double> real_target = descent_target(seed, a, gdim);
        const auto target = complex_of(real_target);
        auto accept = [&](const std::vector<double>& x) {
            std::vector<double> g = ev.g_real(x);
            const double mu =
                schedule.radii[k] * differential_measure(ev.complex_jacobian(to_complex_point(x)), opts.measure);
            if (!std::isfinite(mu) || mu > rep.kinf_thresholds[k] || norm(g) > opts.image_cutoff) return false;
            slots[task] = RetainedPoint{x, std::move(g), mu};
            return true;
        };
        const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
        for (std::size_t attempt = 0; attempt < restarts && !milnor.empty(); ++attempt) {
            Stream rng(seed, {0x7367, k, a, attempt});
            auto x = milnor[k].newton(rng);
            if (!x) continue;
            std::vector<double> y = milnor[k].descend(*x, real_target, opts.descent_iterations);
            if (!milnor[k].on_constraints(y)) continue;
            if (accept(y) || accept(solvers[k].solve_from(y, target, opts.descent_iterations))) return;
        }
        for (std::size_t attempt = 0; attempt < restarts; ++attempt) {
            Stream rng(seed, {0x6b69, k, a, attempt});
            if (accept(solvers[k].solve(rng, target, opts.descent_iterations))) return;
        }
    });

    rep.found_by_band.assign(m, per);
    rep.retained_by_band.assign(m, 0);
    rep.retained.n = spec.n;
    rep.retained.seed = seed;
    std::vector<std::vector<double>> images;
    std::vector<std::size_t> bands;
    for (std::size_t task = 0; task < slots.size(); ++task) {
        if (!slots[task]) continue;
        const std::size_t k = task / per;
        ++rep.retained_by_band[k];
        // the residual slot carries |x| * |dG| for these samples
        rep.retained.add(slots[task]->x, slots[task]->residual, k, slots[task]->g);
        images.push_back(slots[task]->g);
        bands.push_back(k);
    }
    rep.kinf_candidates = persistent_clusters(images, bands, m - 1, opts.cluster_tol);
    rep.clusters = rep.kinf_candidates;
    rep.verdict = rep.kinf_candidates.empty() ? Verdict::Empty : Verdict::Nonempty;

    if (sg != nullptr) {
        rep.containment_checked = true;
        for (std::size_t c = 0; c < sg->clusters.size(); ++c) {
            const bool covered = std::any_of(rep.kinf_candidates.begin(), rep.kinf_candidates.end(), [&](const Cluster& k) {
                return distance(k.center, sg->clusters[c].center) <= opts.cluster_tol;
            });
            if (!covered) rep.containment_violations.push_back(c);
        }
    }
    return rep;
}

std::vector<DirectionCluster> tangent_cone_directions(const SampleCloud& cloud, const PolyMap& map, double tol,
                                                      double link) {
    if (cloud.distinct_bands() < 3) throw std::invalid_argument("tangent-cone directions need samples at >= 3 radii");
    const std::set<std::size_t> bands(cloud.band.begin(), cloud.band.end());
    auto top = bands.rbegin();
    const std::size_t last = *top++;
    const std::size_t second = *top;

    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (cloud.band[i] != last && cloud.band[i] != second) continue;
        std::vector<double> d = cloud.points[i];
        const double len = norm(d);
        if (len == 0.0) continue;
        for (double& v : d) v /= len;
        dirs.push_back(std::move(d));
    }

    std::vector<CompiledMixed> leading;
    for (const auto& g : map.components) leading.emplace_back(g.leading_form());

    std::vector<DirectionCluster> out;
    for (const auto& group : single_linkage(dirs, link)) {
        // medoid: the member with the smallest total distance to the others
        std::size_t best = group.front();
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t a : group) {
            double cost = 0.0;
            for (std::size_t b : group) cost += distance(dirs[a], dirs[b]);
            if (cost < best_cost) {
                best_cost = cost;
                best = a;
            }
        }
        DirectionCluster dc;
        dc.direction = dirs[best];
        dc.count = group.size();
        const auto z = to_complex_point(dc.direction);
        for (const auto& l : leading) dc.leading_residual = std::max(dc.leading_residual, std::abs(l(z)));
        dc.flagged = dc.leading_residual > tol;
        out.push_back(std::move(dc));
    }
    std::sort(out.begin(), out.end(), [](const DirectionCluster& a, const DirectionCluster& b) {
        return a.direction < b.direction;
    });
    return out;
}

}  // namespace fibscope
