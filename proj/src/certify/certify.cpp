#include "fibscope/certify/certify.hpp"

#include <algorithm>
#include <stdexcept>

#include "fibscope/error.hpp"
#include "fibscope/numeric/linalg.hpp"
#include "fibscope/numeric/rng.hpp"
#include "fibscope/poly/compiled.hpp"

namespace fibscope {

LeadingRank leading_rank(const PolyMap& map, std::uint64_t seed, std::size_t trials) {
    if (!map.is_holomorphic()) throw std::invalid_argument("leading_rank needs a holomorphic map");
    const std::size_t n = map.n, k = map.components.size();
    std::vector<std::vector<CompiledMixed>> d(k);
    for (std::size_t j = 0; j < k; ++j) {
        const MixedPoly lead = map.components[j].is_zero() ? map.components[j] : map.components[j].leading_form();
        for (std::size_t i = 0; i < n; ++i) d[j].emplace_back(lead.wirtinger(i, false));
    }
    LeadingRank out;
    out.trials = std::max<std::size_t>(1, trials);
    for (std::size_t t = 0; t < out.trials; ++t) {
        Stream rng(seed, {0x6c72, t});
        std::vector<std::complex<double>> z(n);
        for (auto& c : z) c = {rng.normal(), rng.normal()};
        Eigen::MatrixXcd jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < n; ++i)
                jac(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d[j][i](z);
        out.rank = std::max(out.rank, numerical_rank(jac, 1e-8));
    }
    out.corank = static_cast<int>(n) - out.rank;
    return out;
}

std::string to_string(Conclusion c) {
    switch (c) {
        case Conclusion::EvidenceForFibration: return "a";
        case Conclusion::ObstructionWitnessed: return "b";
        case Conclusion::Inconclusive: return "c";
    }
    return "c";
}

std::string statement(Conclusion c) {
    switch (c) {
        case Conclusion::EvidenceForFibration:
            return "evidence for B(G) = {} (G a fibration): no persistent S_G cluster, and B(G) is contained in S_G";
        case Conclusion::ObstructionWitnessed:
            return "obstruction witnessed: persistent S_G cluster, reported as candidate obstruction to B(G) = {}";
        case Conclusion::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Conclusion grade(const K0Report& k0, Verdict sg) {
    const bool critical = k0.found || k0.exact == ExactCheck::ProvenNonempty;
    switch (sg) {
        case Verdict::Empty: return critical ? Conclusion::Inconclusive : Conclusion::EvidenceForFibration;
        case Verdict::Nonempty: return Conclusion::ObstructionWitnessed;
        case Verdict::Inconclusive: return Conclusion::Inconclusive;
    }
    return Conclusion::Inconclusive;
}

std::string certificate_track(std::size_t n) {
    if (n == 2) return "n2-plane-curve";
    if (n == 3) return "n3-no-rank-condition";
    return "n4plus-leading-rank";
}

Certificate certify(const MappingSpec& spec, const RadiusSchedule& schedule, std::uint64_t seed,
                    const CertifyOptions& opts) {
    Certificate cert;
    cert.n = spec.n;
    cert.track = certificate_track(spec.n);
    cert.k0 = k0_probe(spec.map, seed, opts.k0_attempts);
    cert.leading = leading_rank(spec.map, seed, opts.leading_trials);
    const int needed = static_cast<int>(spec.n) - 3;
    cert.hypothesis_met = spec.n <= 3 || cert.leading.rank > needed;
    if (!cert.hypothesis_met) cert.notes.push_back("leading rank does not exceed n - 3");

    try {
        cert.sg = estimate_asymptotic_set(spec, schedule, seed, opts.asymptotic);
        cert.sg_verdict = cert.sg.verdict;
        for (const auto& d : cert.sg.diagnostics) cert.notes.push_back(d);
    } catch (const DomainError& e) {
        cert.sg_verdict = Verdict::Inconclusive;
        cert.notes.push_back(std::string("asymptotic set: ") + e.what());
    }
    cert.conclusion = grade(cert.k0, cert.sg_verdict);
    if (cert.k0.found) cert.notes.push_back("complex critical point found; the map is not a submersion");
    if (cert.k0.exact == ExactCheck::ProvenNonempty) cert.notes.push_back("partials have a common zero (exact)");
    if (cert.conclusion == Conclusion::ObstructionWitnessed) cert.witness_clusters = cert.sg.clusters;
    cert.statement = statement(cert.conclusion);
    return cert;
}

}  // namespace fibscope
