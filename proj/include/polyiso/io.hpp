#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "polyiso/polyhedron_space.hpp"
#include "polyiso/surface.hpp"

namespace polyiso::io {

/// A surface document: the combinatorics plus optional edge lengths.
struct SurfaceDocument {
  SurfaceData data;
  std::optional<EdgeLengths> lengths;  // indexed like the sorted edges
};

/// Parses and validates a surface document. Throws ParseError (with line and
/// column) on malformed text, or the validation error of the surface.
SurfaceDocument parse_surface(const std::string& text);
SurfaceDocument read_surface(const std::string& path);

/// Canonical serialization: vertices and edges sorted by id, triangles and
/// walk as signed ids, lengths keyed by decimal edge id, doubles in shortest
/// round-trip form.
std::string serialize_surface(const GraphSurface& s, const std::optional<EdgeLengths>& lengths = std::nullopt);

/// Realization file for a surface: `edge_vectors` (edge id -> 3-vector along
/// the declared direction) or `positions` (vertex id -> 3-vector).
struct Realization {
  std::optional<PolyhedronPoint> edge_vectors;
  std::optional<VertexPositions> positions;
};
Realization parse_realization(const GraphSurface& s, const std::string& text);
Realization read_realization(const GraphSurface& s, const std::string& path);
std::string serialize_realization(const GraphSurface& s, const Realization& r);

/// Polygon point file: `lengths` and `vectors`, one per polygon edge.
struct PolygonDocument {
  Eigen::VectorXd lengths;
  EdgeVectorsd vectors;
};
PolygonDocument parse_polygon(const std::string& text);
std::string serialize_polygon(const PolygonDocument& doc);

/// 64-bit FNV-1a of the canonical serialization.
std::uint64_t surface_hash(const GraphSurface& s);

std::string read_file(const std::string& path);

}  // namespace polyiso::io
