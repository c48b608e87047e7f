#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fibscope/mapspec/mapping_spec.hpp"
#include "fibscope/numeric/asymptotic.hpp"
#include "fibscope/numeric/k0.hpp"

namespace fibscope {

struct LeadingRank {
    int rank = 0;
    int corank = 0;  // n - rank
    std::size_t trials = 0;
};

/// Generic complex rank of the Jacobian of the leading forms: the maximum
/// numerical rank over `trials` random complex points.
LeadingRank leading_rank(const PolyMap& map, std::uint64_t seed, std::size_t trials = 16);

enum class Conclusion { EvidenceForFibration, ObstructionWitnessed, Inconclusive };
std::string to_string(Conclusion c);
/// Human-readable statement attached to each grade.
std::string statement(Conclusion c);

/// Grading rule. A K_0 witness (numerical or exact) rules out the
/// fibration evidence; otherwise the S_G verdict decides.
Conclusion grade(const K0Report& k0, Verdict sg);

struct Certificate {
    std::size_t n = 0;
    K0Report k0;
    LeadingRank leading;
    std::string track;
    bool hypothesis_met = false;
    Verdict sg_verdict = Verdict::Inconclusive;
    std::vector<Cluster> witness_clusters;  // S_G clusters when an obstruction is reported
    Conclusion conclusion = Conclusion::Inconclusive;
    std::string statement;
    std::vector<std::string> notes;
    AsymptoticReport sg;
};

/// Track name by dimension: "n2-plane-curve", "n3-no-rank-condition" or
/// "n4plus-leading-rank".
std::string certificate_track(std::size_t n);

struct CertifyOptions {
    std::size_t k0_attempts = 1000;
    std::size_t leading_trials = 16;
    AsymptoticOptions asymptotic;
};

Certificate certify(const MappingSpec& spec, const RadiusSchedule& schedule, std::uint64_t seed,
                    const CertifyOptions& opts = {});

}  // namespace fibscope
