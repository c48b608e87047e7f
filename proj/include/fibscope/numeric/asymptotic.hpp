#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fibscope/mapspec/mapping_spec.hpp"
#include "fibscope/numeric/sample_cloud.hpp"
#include "fibscope/numeric/sampling.hpp"

namespace fibscope {

/// Accumulation of G-images across radii.
struct Cluster {
    std::vector<double> center;          // mean of the members at the largest radius
    double spread = 0.0;                 // spread at the largest radius
    std::vector<std::size_t> bands;      // supporting radius indices, increasing
    std::vector<double> spread_by_band;  // parallel to bands
    std::size_t count = 0;
};

enum class Verdict { Empty, Nonempty, Inconclusive };
std::string to_string(Verdict v);

struct DirectionCluster {
    std::vector<double> direction;  // unit vector in R^2n
    std::size_t count = 0;
    double leading_residual = 0.0;  // max_i |leading form i at the direction|
    bool flagged = false;           // leading_residual above tolerance
};

/// How |dG| is measured when looking for asymptotic critical values.
enum class DifferentialMeasure { SigmaMin, OperatorNorm, Kuo };
std::string to_string(DifferentialMeasure m);
DifferentialMeasure parse_measure(const std::string& s);

struct AsymptoticOptions {
    double cluster_tol = 1e-2;
    double image_cutoff = 10.0;
    std::size_t restarts = 6;       // Newton restarts per sample
    int descent_iterations = 60;
    double direction_link = 0.1;    // single-linkage tolerance on the unit sphere
    double direction_tol = 1e-2;    // leading-form test
    // asymptotic critical values
    DifferentialMeasure measure = DifferentialMeasure::SigmaMin;
    double kinf_threshold = 1.0;    // tau at the first radius, decreasing as R^-1/2
    double target_weight = 10.0;   // weight of G - c against the differential divided by tau
};

struct AsymptoticReport {
    std::vector<double> radii;
    std::size_t samples_per_radius = 0;
    std::uint64_t seed = 0;
    double cluster_tol = 0.0;
    double image_cutoff = 0.0;

    std::vector<Cluster> clusters;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<DirectionCluster> direction_clusters;
    std::vector<Cluster> kinf_candidates;
    std::vector<double> kinf_thresholds;
    /// Indices into `clusters` of S_G centers with no nearby K_inf candidate.
    std::vector<std::size_t> containment_violations;
    bool containment_checked = false;

    std::vector<std::size_t> found_by_band;     // points of M_G (or of the sphere) reached
    std::vector<std::size_t> retained_by_band;  // with bounded image (and small differential)
    std::vector<std::string> diagnostics;
    SampleCloud retained;
};

/// Single-linkage clusters of `points` (with radius band labels) that are
/// supported at >= 3 bands including `last_band`.
std::vector<Cluster> persistent_clusters(const std::vector<std::vector<double>>& points,
                                         const std::vector<std::size_t>& bands, std::size_t last_band, double tol);

/// Target values for the directed descent: uniform in the unit ball of
/// R^dim, one per sample index, independent of the radius.
std::vector<double> descent_target(std::uint64_t seed, std::size_t sample, std::size_t dim);

AsymptoticReport estimate_asymptotic_set(const MappingSpec& spec, const RadiusSchedule& schedule, std::uint64_t seed,
                                         const AsymptoticOptions& opts = {});

/// Asymptotic critical value candidates. When `sg` is given, each of its
/// cluster centers is checked against the candidates (S_G inside K_inf).
AsymptoticReport estimate_kinf(const MappingSpec& spec, const RadiusSchedule& schedule, std::uint64_t seed,
                               const AsymptoticOptions& opts = {}, const AsymptoticReport* sg = nullptr);

/// |x| * measure(D_C G(x)).
double differential_measure(const Eigen::MatrixXcd& jac, DifferentialMeasure m);

/// Clusters of x/|x| over the two largest radius bands. Each direction is
/// tested against the leading forms of `map`.
std::vector<DirectionCluster> tangent_cone_directions(const SampleCloud& cloud, const PolyMap& map, double tol,
                                                      double link = 0.1);

}  // namespace fibscope
