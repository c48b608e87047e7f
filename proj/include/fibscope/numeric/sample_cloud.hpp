#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fibscope {

/// Finite sample of a real subset of R^2n, tagged per point with the residual
/// of the defining equation, |x|, the radius band and the image G(x).
struct SampleCloud {
    std::size_t n = 0;
    std::vector<std::vector<double>> points;
    std::vector<double> residuals;
    std::vector<double> radii;
    std::vector<std::size_t> band;  // index into the generating radius list
    std::vector<std::vector<double>> g_images;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> meta;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    void add(std::vector<double> x, double residual, std::size_t band_index, std::vector<double> g);
    /// Appends all points of `other` (same n).
    void append(const SampleCloud& other);
    std::size_t distinct_bands() const;
};

}  // namespace fibscope
