#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fibscope/poly/real_poly.hpp"

namespace fibscope {

/// Outcome of the exact check for n = 2, where K_0 is the common zero set
/// of the two partial derivatives.
enum class ExactCheck { NotApplicable, ProvenEmpty, ProvenNonempty, Undecided };
std::string to_string(ExactCheck c);

struct K0Report {
    std::size_t attempts = 0;
    std::size_t converged = 0;  // attempts ending at a witness
    bool found = false;
    std::vector<std::complex<double>> witness;  // first witness, in attempt order
    double residual = 0.0;                      // max |minor| at the witness
    double step = 0.0;                          // last Newton step length
    ExactCheck exact = ExactCheck::NotApplicable;
    std::string exact_detail;

    std::string summary() const { return found ? "critical point found" : "no critical point found"; }
};

struct K0Options {
    int max_iterations = 60;
    double residual_tol = 1e-10;
    double step_tol = 1e-8;       // relative to max(1, |z|)
    double max_modulus = 1e6;
    unsigned exact_max_degree = 8;
};

/// Newton search for complex critical points of a holomorphic map: common
/// zeros of the maximal minors of D_C G. Evidence only; for n = 2 an exact
/// resultant check is added when the partials have degree <= 8.
K0Report k0_probe(const PolyMap& map, std::uint64_t seed, std::size_t attempts, const K0Options& opts = {});

/// The exact branch alone: do dG/dz1 and dG/dz2 have a common zero in C^2?
ExactCheck common_zero_check(const MixedPoly& p, const MixedPoly& q, std::string* detail = nullptr);

}  // namespace fibscope
