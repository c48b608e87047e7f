#pragma once

#include <json.hpp>
#include <string>

#include "fibscope/certify/certify.hpp"
#include "fibscope/certify/vg.hpp"
#include "fibscope/milnor/milnor.hpp"
#include "fibscope/numeric/asymptotic.hpp"
#include "fibscope/numeric/k0.hpp"
#include "fibscope/numeric/sample_cloud.hpp"

namespace fibscope {

nlohmann::json to_json(const Cluster& c);
nlohmann::json to_json(const AsymptoticReport& r);
/// K_inf view of a report: candidates, thresholds and the containment check.
nlohmann::json kinf_json(const AsymptoticReport& r);
nlohmann::json to_json(const K0Report& r);
nlohmann::json to_json(const LeadingRank& r);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const EquivalenceReport& r);
/// Summary of an embedded cloud (the points themselves go to export files).
nlohmann::json summary_json(const VGCloud& vg);
nlohmann::json summary_json(const SampleCloud& cloud);

/// One row per point: x_1..x_2n, residual, radius, band, g_1..g_2(n-1).
std::string cloud_csv(const SampleCloud& cloud);

}  // namespace fibscope
