#include "fibscope/certify/vg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fibscope/poly/compiled.hpp"

namespace fibscope {

std::string to_string(DecayCheck c) {
    switch (c) {
        case DecayCheck::Decays: return "decays";
        case DecayCheck::InsufficientExponent: return "insufficient-exponent";
        case DecayCheck::Passthrough: return "passthrough";
    }
    return "passthrough";
}

double NormalizedChart::evaluate(std::span<const std::complex<double>> z, double rho) const {
    const double value = chart.evaluate(z, rho);
    if (exponent == 0) return value;
    double len2 = 0.0;
    for (const auto& c : z) len2 += std::norm(c);
    return value / std::pow(1.0 + len2, static_cast<double>(exponent));
}

NormalizedChart decay_normalize(const ChartExpr& chart, unsigned exponent) {
    NormalizedChart out;
    out.chart = chart;
    out.exponent = exponent;
    if (exponent == 0) {
        out.check = DecayCheck::Passthrough;
    } else {
        // phi <= 1, so the phi factors never add growth
        out.check = chart.polynomial_degree() < 2 * static_cast<long>(exponent) ? DecayCheck::Decays
                                                                                : DecayCheck::InsufficientExponent;
    }
    return out;
}

std::vector<NormalizedChart> spec_charts(const MappingSpec& spec) {
    std::vector<NormalizedChart> out;
    if (spec.charts.empty()) {
        out.push_back(decay_normalize(ChartExpr::phi(spec.n), 0));
        return out;
    }
    for (std::size_t k = 0; k < spec.charts.size(); ++k) {
        const auto& e = k < spec.decay_exponents.size() ? spec.decay_exponents[k] : std::nullopt;
        out.push_back(decay_normalize(spec.charts[k], e.value_or(0)));
    }
    return out;
}

std::size_t VGCloud::violations() const {
    if (!paired) return 0;
    return static_cast<std::size_t>(
        std::count_if(sing_at_infinity.begin(), sing_at_infinity.end(), [](const SingularPoint& s) { return !s.contained; }));
}

VGCloud embed_vg(const MappingSpec& spec, const SampleCloud& cloud, const AsymptoticReport* sg, const EmbedOptions& opts) {
    if (cloud.n != spec.n) throw std::invalid_argument("cloud dimension does not match the mapping");
    const std::vector<NormalizedChart> charts = spec_charts(spec);
    std::vector<CompiledMixed> g;
    for (const auto& c : spec.map.components) g.emplace_back(c);
    std::vector<double> w;
    for (const auto& a : spec.weights.values()) w.push_back(a.get_d());

    VGCloud vg;
    vg.n = spec.n;
    vg.chart_count = charts.size();
    vg.chart_tol = opts.chart_tol;
    vg.cluster_tol = opts.cluster_tol;
    vg.paired = sg != nullptr;
    for (std::size_t k = 0; k < charts.size(); ++k)
        vg.chart_notes.push_back("psi_" + std::to_string(k + 1) + ": " + charts[k].chart.to_string() + " (" +
                                 to_string(charts[k].check) + ", N = " + std::to_string(charts[k].exponent) + ")");

    std::size_t top = 0;
    for (std::size_t b : cloud.band) top = std::max(top, b);

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto z = to_complex_point(cloud.points[i]);
        double rho = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) rho += w[j] * std::norm(z[j]);
        std::vector<double> p;
        for (const auto& gj : g) {
            const auto v = gj(z);
            p.push_back(v.real());
            p.push_back(v.imag());
        }
        double chart_norm = 0.0;
        for (const auto& c : charts) {
            const double v = c.evaluate(z, rho);
            if (!std::isfinite(v)) throw std::runtime_error("chart evaluation is not finite");
            p.push_back(v);
            chart_norm += v * v;
        }
        chart_norm = std::sqrt(chart_norm);
        vg.points.push_back(std::move(p));
        vg.radii.push_back(i < cloud.radii.size() ? cloud.radii[i] : 0.0);
        vg.residuals.push_back(i < cloud.residuals.size() ? cloud.residuals[i] : 0.0);
        vg.band.push_back(cloud.band[i]);

        const bool candidate = cloud.band[i] == top && chart_norm <= opts.chart_tol;
        vg.sing_flag.push_back(candidate);
        if (!candidate) continue;
        SingularPoint s;
        s.index = vg.points.size() - 1;
        if (sg != nullptr) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < sg->clusters.size(); ++c) {
                double d = 0.0;
                for (std::size_t k = 0; k < sg->clusters[c].center.size(); ++k) {
                    const double e = vg.points.back()[k] - sg->clusters[c].center[k];
                    d += e * e;
                }
                d = std::sqrt(d);
                if (d < best) {
                    best = d;
                    s.cluster = static_cast<long>(c);
                }
            }
            if (s.cluster >= 0) {
                s.cluster_distance = best;
                s.contained = best <= opts.cluster_tol;
            }
        }
        vg.sing_at_infinity.push_back(s);
    }

    if (sg != nullptr && !sg->clusters.empty()) {
        std::size_t covered = 0;
        for (std::size_t c = 0; c < sg->clusters.size(); ++c)
            if (std::any_of(vg.sing_at_infinity.begin(), vg.sing_at_infinity.end(), [&](const SingularPoint& s) {
                    return s.contained && s.cluster == static_cast<long>(c);
                }))
                ++covered;
        vg.coverage = static_cast<double>(covered) / static_cast<double>(sg->clusters.size());
    }
    return vg;
}

}  // namespace fibscope
