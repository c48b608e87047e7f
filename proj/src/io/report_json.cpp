#include "fibscope/io/report_json.hpp"

#include <charconv>
#include <sstream>

namespace fibscope {

using nlohmann::json;

namespace {

json complex_list(const std::vector<std::complex<double>>& z) {
    json out = json::array();
    for (const auto& c : z) out.push_back({c.real(), c.imag()});
    return out;
}

std::string num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

json to_json(const Cluster& c) {
    return {{"center", c.center},
            {"spread", c.spread},
            {"bands", c.bands},
            {"spread_by_band", c.spread_by_band},
            {"count", c.count}};
}

json to_json(const AsymptoticReport& r) {
    json clusters = json::array();
    for (const auto& c : r.clusters) clusters.push_back(to_json(c));
    json dirs = json::array();
    for (const auto& d : r.direction_clusters)
        dirs.push_back({{"direction", d.direction},
                        {"count", d.count},
                        {"leading_residual", d.leading_residual},
                        {"flagged", d.flagged}});
    return {{"radii", r.radii},
            {"samples_per_radius", r.samples_per_radius},
            {"seed", r.seed},
            {"cluster_tol", r.cluster_tol},
            {"image_cutoff", r.image_cutoff},
            {"verdict", to_string(r.verdict)},
            {"clusters", clusters},
            {"direction_clusters", dirs},
            {"found_by_band", r.found_by_band},
            {"retained_by_band", r.retained_by_band},
            {"diagnostics", r.diagnostics}};
}

json kinf_json(const AsymptoticReport& r) {
    json candidates = json::array();
    for (const auto& c : r.kinf_candidates) candidates.push_back(to_json(c));
    return {{"radii", r.radii},
            {"samples_per_radius", r.samples_per_radius},
            {"seed", r.seed},
            {"cluster_tol", r.cluster_tol},
            {"image_cutoff", r.image_cutoff},
            {"thresholds", r.kinf_thresholds},
            {"candidates", candidates},
            {"retained_by_band", r.retained_by_band},
            {"containment", {{"checked", r.containment_checked}, {"violations", r.containment_violations}}}};
}

json to_json(const K0Report& r) {
    json out = {{"summary", r.summary()},
                {"attempts", r.attempts},
                {"converged", r.converged},
                {"found", r.found},
                {"exact", to_string(r.exact)},
                {"exact_detail", r.exact_detail}};
    if (r.found) {
        out["witness"] = complex_list(r.witness);
        out["residual"] = r.residual;
        out["step"] = r.step;
    }
    return out;
}

json to_json(const LeadingRank& r) { return {{"rank", r.rank}, {"corank", r.corank}, {"trials", r.trials}}; }

json to_json(const Certificate& c) {
    json witness = json::array();
    for (const auto& w : c.witness_clusters) witness.push_back(to_json(w));
    return {{"n", c.n},
            {"k0_evidence", to_json(c.k0)},
            {"leading_rank", to_json(c.leading)},
            {"track", c.track},
            {"hypothesis_met", c.hypothesis_met},
            {"sg_verdict", to_string(c.sg_verdict)},
            {"conclusion", to_string(c.conclusion)},
            {"statement", c.statement},
            {"witness_clusters", witness},
            {"notes", c.notes}};
}

json to_json(const EquivalenceReport& r) {
    json v = json::array();
    for (const auto& e : r.violations) v.push_back({{"index", e.index}, {"kind", e.kind}});
    return {{"tol", r.tol}, {"checked", r.checked}, {"on_set", r.on_set}, {"violations", v}, {"consistent", r.consistent()}};
}

json summary_json(const VGCloud& vg) {
    json sing = json::array();
    for (const auto& s : vg.sing_at_infinity) {
        json e = {{"index", s.index}, {"point", vg.points[s.index]}};
        if (vg.paired) {
            e["cluster"] = s.cluster;
            e["cluster_distance"] = s.cluster_distance;
            e["contained"] = s.contained;
        }
        sing.push_back(std::move(e));
    }
    json out = {{"n", vg.n},
                {"chart_count", vg.chart_count},
                {"dimension", vg.dimension()},
                {"points", vg.size()},
                {"charts", vg.chart_notes},
                {"chart_tol", vg.chart_tol},
                {"cluster_tol", vg.cluster_tol},
                {"sing_at_infinity", sing}};
    if (vg.paired) out["violations"] = vg.violations();
    out["coverage"] = vg.coverage ? json(*vg.coverage) : json(nullptr);
    return out;
}

json summary_json(const SampleCloud& cloud) {
    std::vector<std::size_t> per_band;
    for (std::size_t b : cloud.band) {
        if (per_band.size() <= b) per_band.resize(b + 1);
        ++per_band[b];
    }
    json meta = json::object();
    for (const auto& [k, v] : cloud.meta) meta[k] = v;
    return {{"n", cloud.n}, {"points", cloud.size()}, {"per_band", per_band}, {"seed", cloud.seed}, {"meta", meta}};
}

std::string cloud_csv(const SampleCloud& cloud) {
    std::ostringstream out;
    for (std::size_t k = 0; k < 2 * cloud.n; ++k) out << 'x' << k + 1 << ',';
    out << "residual,radius,band";
    for (std::size_t k = 0; k < 2 * (cloud.n - 1); ++k) out << ",g" << k + 1;
    out << '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (double v : cloud.points[i]) out << num(v) << ',';
        out << num(cloud.residuals[i]) << ',' << num(cloud.radii[i]) << ',' << cloud.band[i];
        if (i < cloud.g_images.size())
            for (double v : cloud.g_images[i]) out << ',' << num(v);
        out << '\n';
    }
    return out.str();
}

}  // namespace fibscope
