#include "fibscope/certify/export.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fibscope {

ExportFormat parse_format(const std::string& s) {
    if (s == "csv") return ExportFormat::Csv;
    if (s == "ply") return ExportFormat::PlyBinary;
    if (s == "ply-ascii") return ExportFormat::PlyAscii;
    if (s == "svg") return ExportFormat::Svg;
    throw std::invalid_argument("unknown export format '" + s + "'");
}

std::string file_extension(ExportFormat f) {
    switch (f) {
        case ExportFormat::Csv: return "csv";
        case ExportFormat::PlyAscii:
        case ExportFormat::PlyBinary: return "ply";
        case ExportFormat::Svg: return "svg";
    }
    return "dat";
}

namespace {

// Shortest round-trip text, so the same data always prints the same bytes.
std::string num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

void put_double(std::string& out, double v) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    unsigned char bytes[8];
    std::memcpy(bytes, &v, 8);
    if constexpr (std::endian::native == std::endian::big)
        for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
    out.append(reinterpret_cast<const char*>(bytes), 8);
}

std::string csv(const VGCloud& vg) {
    std::ostringstream out;
    const std::size_t g = 2 * (vg.n - 1);
    for (std::size_t k = 0; k < g; ++k) out << "alpha_" << k + 1 << ',';
    for (std::size_t k = 0; k < vg.chart_count; ++k) out << "psi_" << k + 1 << ',';
    out << "radius,residual,flag_sing_inf\n";
    for (std::size_t i = 0; i < vg.size(); ++i) {
        for (double v : vg.points[i]) out << num(v) << ',';
        out << num(vg.radii[i]) << ',' << num(vg.residuals[i]) << ',' << (vg.sing_flag[i] ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string ply(const VGCloud& vg, const Projection& axes, bool binary) {
    std::ostringstream head;
    head << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
    head << "comment axes " << axes[0] << ' ' << axes[1] << ' ' << axes[2] << '\n';
    head << "element vertex " << vg.size() << '\n';
    for (const char* p : {"x", "y", "z", "radius", "residual"}) head << "property double " << p << '\n';
    head << "element sing_inf " << vg.sing_at_infinity.size() << '\n';
    for (const char* p : {"x", "y", "z", "cluster_distance"}) head << "property double " << p << '\n';
    head << "end_header\n";
    std::string out = head.str();

    auto row = [&](std::initializer_list<double> values) {
        if (binary) {
            for (double v : values) put_double(out, v);
            return;
        }
        bool first = true;
        for (double v : values) {
            if (!first) out += ' ';
            out += num(v);
            first = false;
        }
        out += '\n';
    };
    for (std::size_t i = 0; i < vg.size(); ++i) {
        const auto& p = vg.points[i];
        row({p[axes[0] - 1], p[axes[1] - 1], p[axes[2] - 1], vg.radii[i], vg.residuals[i]});
    }
    for (const auto& s : vg.sing_at_infinity) {
        const auto& p = vg.points[s.index];
        row({p[axes[0] - 1], p[axes[1] - 1], p[axes[2] - 1], s.cluster_distance});
    }
    return out;
}

// Oblique view: first axis to the right, second receding at 30 degrees,
// third up. Each axis is compressed by asinh(v / 1e-3) so that points near
// the origin stay visible next to points at large radius.
std::string svg(const VGCloud& vg, const Projection& axes) {
    constexpr double kScale = 1e-3;
    const double c30 = std::cos(M_PI / 6.0) * 0.6, s30 = std::sin(M_PI / 6.0) * 0.6;
    auto squash = [&](double v) { return std::asinh(v / kScale); };
    auto screen = [&](double a, double b, double c) {
        return std::pair<double, double>{squash(a) - c30 * squash(b), squash(c) + s30 * squash(b)};
    };
    double extent = 1.0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : vg.points) {
        pts.push_back(screen(p[axes[0] - 1], p[axes[1] - 1], p[axes[2] - 1]));
        extent = std::max({extent, std::abs(pts.back().first), std::abs(pts.back().second)});
    }
    const double unit = 420.0 / extent;
    auto sx = [&](double u) { return 500.0 + unit * u; };
    auto sy = [&](double v) { return 500.0 - unit * v; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\""
        << " data-axes=\"" << axes[0] << ',' << axes[1] << ',' << axes[2] << "\" data-scale=\"asinh:0.001\">\n";
    out << "<style>.axis{stroke:#444;stroke-width:1}.point{fill:#1f77b4}.chart-one{fill:#2ca02c}"
           ".sing-inf{fill:#d62728}text{font-family:sans-serif;font-size:14px}</style>\n";
    out << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    const double reach = extent;
    const std::pair<double, double> ends[3] = {{reach, 0.0}, {-c30 * reach, s30 * reach}, {0.0, reach}};
    for (int k = 0; k < 3; ++k) {
        out << "<line class=\"axis\" x1=\"" << fixed(sx(-ends[k].first)) << "\" y1=\"" << fixed(sy(-ends[k].second))
            << "\" x2=\"" << fixed(sx(ends[k].first)) << "\" y2=\"" << fixed(sy(ends[k].second)) << "\"/>\n";
        out << "<text x=\"" << fixed(sx(ends[k].first) + 6) << "\" y=\"" << fixed(sy(ends[k].second) - 6)
            << "\">axis " << axes[static_cast<std::size_t>(k)] << "</text>\n";
    }
    const std::size_t chart0 = 2 * (vg.n - 1);
    for (std::size_t i = 0; i < vg.size(); ++i) {
        const auto& p = vg.points[i];
        bool one = vg.chart_count > 0;
        for (std::size_t k = chart0; k < p.size(); ++k) one = one && p[k] >= 1.0 - 1e-9 && p[k] <= 1.0;
        const char* cls = vg.sing_flag[i] ? "sing-inf" : (one ? "chart-one" : "point");
        out << "<circle class=\"" << cls << "\" cx=\"" << fixed(sx(pts[i].first)) << "\" cy=\"" << fixed(sy(pts[i].second))
            << "\" r=\"" << (vg.sing_flag[i] ? 4 : 2) << "\" data-coords=\"" << num(p[axes[0] - 1]) << ','
            << num(p[axes[1] - 1]) << ',' << num(p[axes[2] - 1]) << "\"/>\n";
    }
    out << "<g class=\"legend\">\n"
        << "<circle class=\"chart-one\" cx=\"30\" cy=\"30\" r=\"4\"/><text x=\"42\" y=\"35\">all charts = 1</text>\n"
        << "<circle class=\"point\" cx=\"30\" cy=\"52\" r=\"4\"/><text x=\"42\" y=\"57\">embedded samples</text>\n"
        << "<circle class=\"sing-inf\" cx=\"30\" cy=\"74\" r=\"4\"/><text x=\"42\" y=\"79\">singular at infinity</text>\n"
        << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace

Projection resolve_projection(const VGCloud& vg, const std::optional<Projection>& requested) {
    const std::size_t dim = vg.dimension();
    if (!requested) {
        if (dim == 3) return {1, 2, 3};
        throw std::invalid_argument("a projection of three axes is required for dimension " + std::to_string(dim));
    }
    std::set<std::size_t> seen;
    for (std::size_t a : *requested) {
        if (a < 1 || a > dim) throw std::invalid_argument("projection axis " + std::to_string(a) + " out of range");
        if (!seen.insert(a).second) throw std::invalid_argument("projection axes must be distinct");
    }
    return *requested;
}

std::string export_cloud(const VGCloud& vg, ExportFormat format, const std::optional<Projection>& projection) {
    switch (format) {
        case ExportFormat::Csv: return csv(vg);
        case ExportFormat::PlyAscii: return ply(vg, resolve_projection(vg, projection), false);
        case ExportFormat::PlyBinary: return ply(vg, resolve_projection(vg, projection), true);
        case ExportFormat::Svg: return svg(vg, resolve_projection(vg, projection));
    }
    throw std::invalid_argument("unknown export format");
}

}  // namespace fibscope
