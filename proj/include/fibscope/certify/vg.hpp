#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fibscope/mapspec/mapping_spec.hpp"
#include "fibscope/numeric/asymptotic.hpp"
#include "fibscope/numeric/sample_cloud.hpp"

namespace fibscope {

enum class DecayCheck {
    Decays,                // polynomial degree < 2N
    InsufficientExponent,  // degree >= 2N: no decay guaranteed
    Passthrough,           // N = 0, chart used as given
};
std::string to_string(DecayCheck c);

/// psi / (1 + |x|^2)^N. The denominator is positive, so signs are kept.
struct NormalizedChart {
    ChartExpr chart;
    unsigned exponent = 0;
    DecayCheck check = DecayCheck::Passthrough;

    double evaluate(std::span<const std::complex<double>> z, double rho) const;
};

NormalizedChart decay_normalize(const ChartExpr& chart, unsigned exponent);

/// Charts of the mapping document after normalization; the single chart phi when none
/// is given.
std::vector<NormalizedChart> spec_charts(const MappingSpec& spec);

struct SingularPoint {
    std::size_t index = 0;           // into VGCloud::points
    long cluster = -1;               // nearest S_G cluster, -1 without one
    double cluster_distance = 0.0;
    bool contained = false;          // within the clustering tolerance of that center
};

/// Image of a Milnor-set sample under (G, psi_1, ..., psi_p).
struct VGCloud {
    std::size_t n = 0;
    std::size_t chart_count = 0;
    std::vector<std::vector<double>> points;  // 2(n-1) + p coordinates each
    std::vector<double> radii;
    std::vector<double> residuals;
    std::vector<std::size_t> band;
    std::vector<bool> sing_flag;
    std::vector<SingularPoint> sing_at_infinity;
    std::vector<std::string> chart_notes;
    double chart_tol = 0.0;
    double cluster_tol = 0.0;
    bool paired = false;  // an S_G report was supplied
    /// Fraction of S_G centers with a singular candidate nearby; nullopt
    /// when no S_G report was supplied or it had no clusters.
    std::optional<double> coverage;

    std::size_t dimension() const { return 2 * (n - 1) + chart_count; }
    std::size_t size() const { return points.size(); }
    /// Candidates not within tolerance of an S_G center (0 when unpaired).
    std::size_t violations() const;
};

struct EmbedOptions {
    double chart_tol = 1e-2;    // chart norm at the top band
    double cluster_tol = 1e-2;
};

/// Embeds `cloud` and detects singular points at infinity among the
/// largest-radius band, paired with the centers of `sg` when given.
VGCloud embed_vg(const MappingSpec& spec, const SampleCloud& cloud, const AsymptoticReport* sg = nullptr,
                 const EmbedOptions& opts = {});

}  // namespace fibscope
