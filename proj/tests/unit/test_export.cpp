#include "doctest.h"

#include <cstring>
#include <sstream>

#include "fibscope/certify/export.hpp"

using namespace fibscope;

namespace {

VGCloud fixture(std::size_t n, std::size_t charts, std::size_t count) {
    VGCloud vg;
    vg.n = n;
    vg.chart_count = charts;
    vg.paired = true;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> p;
        for (std::size_t k = 0; k < vg.dimension(); ++k) p.push_back(0.25 * static_cast<double>(i + k) - 1.0);
        vg.points.push_back(p);
        vg.radii.push_back(10.0 * static_cast<double>(i + 1));
        vg.residuals.push_back(1e-12);
        vg.band.push_back(i % 3);
        vg.sing_flag.push_back(i == 1);
    }
    if (count > 1) vg.sing_at_infinity.push_back({1, 0, 1e-4, true});
    return vg;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("csv layout") {
    const VGCloud vg = fixture(2, 1, 4);
    const auto rows = lines(export_cloud(vg, ExportFormat::Csv));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "alpha_1,alpha_2,psi_1,radius,residual,flag_sing_inf");
    CHECK(rows[1] == "-1,-0.75,-0.5,10,1e-12,0");
    CHECK(rows[2].substr(rows[2].size() - 2) == ",1");
    // 2(n-1) + p columns in higher dimension
    const auto wide = lines(export_cloud(fixture(3, 2, 1), ExportFormat::Csv));
    CHECK(wide[0] == "alpha_1,alpha_2,alpha_3,alpha_4,psi_1,psi_2,radius,residual,flag_sing_inf");
}

TEST_CASE("empty cloud exports valid files") {
    const VGCloud vg = fixture(2, 1, 0);
    CHECK(lines(export_cloud(vg, ExportFormat::Csv)).size() == 1);
    const std::string ply = export_cloud(vg, ExportFormat::PlyAscii);
    CHECK(ply.find("element vertex 0\n") != std::string::npos);
    CHECK(ply.find("element sing_inf 0\n") != std::string::npos);
    CHECK(ply.substr(ply.size() - 11) == "end_header\n");
    const std::string svg = export_cloud(vg, ExportFormat::Svg);
    CHECK(svg.find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
    CHECK(svg.find("data-coords") == std::string::npos);
}

TEST_CASE("ply ascii and binary carry the same values") {
    const VGCloud vg = fixture(2, 1, 3);
    const std::string ascii = export_cloud(vg, ExportFormat::PlyAscii);
    const auto rows = lines(ascii);
    CHECK(rows[0] == "ply");
    CHECK(rows[1] == "format ascii 1.0");
    std::size_t header = 0;
    while (rows[header] != "end_header") ++header;
    CHECK(rows[header + 1] == "-1 -0.75 -0.5 10 1e-12");
    CHECK(rows[header + 4] == "-0.75 -0.5 -0.25 1e-04");

    const std::string bin = export_cloud(vg, ExportFormat::PlyBinary);
    CHECK(bin.find("format binary_little_endian 1.0\n") != std::string::npos);
    const std::size_t start = bin.find("end_header\n") + 11;
    REQUIRE(bin.size() == start + 8 * (3 * 5 + 1 * 4));
    double first[5];
    std::memcpy(first, bin.data() + start, sizeof first);
    CHECK(first[0] == -1.0);
    CHECK(first[2] == -0.5);
    CHECK(first[3] == 10.0);
}

TEST_CASE("projections") {
    const VGCloud five = fixture(3, 1, 2);
    REQUIRE(five.dimension() == 5);
    CHECK_THROWS_AS(export_cloud(five, ExportFormat::PlyBinary), std::invalid_argument);
    CHECK_NOTHROW(export_cloud(five, ExportFormat::PlyBinary, Projection{1, 2, 3}));
    const std::string ply = export_cloud(five, ExportFormat::PlyAscii, Projection{5, 1, 3});
    CHECK(ply.find("comment axes 5 1 3") != std::string::npos);
    CHECK_THROWS_AS(export_cloud(five, ExportFormat::Svg, Projection{1, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(export_cloud(five, ExportFormat::Svg, Projection{0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(export_cloud(five, ExportFormat::Svg, Projection{1, 2, 6}), std::invalid_argument);
    // csv needs no projection
    CHECK_NOTHROW(export_cloud(five, ExportFormat::Csv));
}

TEST_CASE("svg content") {
    const VGCloud vg = fixture(2, 1, 3);
    const std::string svg = export_cloud(vg, ExportFormat::Svg);
    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\"", 0) == 0);
    CHECK(svg.find("class=\"sing-inf\"") != std::string::npos);
    CHECK(svg.find("data-coords=\"-0.75,-0.5,-0.25\"") != std::string::npos);
    CHECK(svg.find("class=\"legend\"") != std::string::npos);
    CHECK(svg == export_cloud(vg, ExportFormat::Svg));
}

TEST_CASE("format names") {
    CHECK(parse_format("csv") == ExportFormat::Csv);
    CHECK(parse_format("ply") == ExportFormat::PlyBinary);
    CHECK(parse_format("ply-ascii") == ExportFormat::PlyAscii);
    CHECK(parse_format("svg") == ExportFormat::Svg);
    CHECK_THROWS_AS(parse_format("obj"), std::invalid_argument);
    CHECK(file_extension(ExportFormat::PlyAscii) == "ply");
}
