#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "fibscope/certify/vg.hpp"

namespace fibscope {

enum class ExportFormat { Csv, PlyAscii, PlyBinary, Svg };
/// "csv", "ply" (binary little endian), "ply-ascii", "svg".
ExportFormat parse_format(const std::string& s);
std::string file_extension(ExportFormat f);

/// 1-based axis indices into the embedded coordinates.
using Projection = std::array<std::size_t, 3>;

/// The projection to use: `requested` after validation, or (1, 2, 3) when
/// the ambient dimension is exactly 3. Throws std::invalid_argument on
/// invalid axes or when a projection is required but missing.
Projection resolve_projection(const VGCloud& vg, const std::optional<Projection>& requested);

/// File contents (binary for PlyBinary). CSV ignores the projection.
std::string export_cloud(const VGCloud& vg, ExportFormat format, const std::optional<Projection>& projection = {});

}  // namespace fibscope
