#include "fibscope/numeric/sample_cloud.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace fibscope {

void SampleCloud::add(std::vector<double> x, double residual, std::size_t band_index, std::vector<double> g) {
    if (x.size() != 2 * n) throw std::invalid_argument("sample dimension mismatch");
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    points.push_back(std::move(x));
    residuals.push_back(residual);
    radii.push_back(std::sqrt(r2));
    band.push_back(band_index);
    g_images.push_back(std::move(g));
}

void SampleCloud::append(const SampleCloud& other) {
    if (other.n != n) throw std::invalid_argument("sample dimension mismatch");
    points.insert(points.end(), other.points.begin(), other.points.end());
    residuals.insert(residuals.end(), other.residuals.begin(), other.residuals.end());
    radii.insert(radii.end(), other.radii.begin(), other.radii.end());
    band.insert(band.end(), other.band.begin(), other.band.end());
    g_images.insert(g_images.end(), other.g_images.begin(), other.g_images.end());
}

std::size_t SampleCloud::distinct_bands() const { return std::set<std::size_t>(band.begin(), band.end()).size(); }

}  // namespace fibscope
