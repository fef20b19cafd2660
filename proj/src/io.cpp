#include "polyiso/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace polyiso::io {

namespace {

using json = nlohmann::ordered_json;

// nlohmann reports a byte offset; convert it to line and column.
std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(position_of(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return doc.at(name);
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer, got " + v.dump());
  return v.get<int>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number, got " + v.dump());
  return v.get<double>();
}

Vec3 as_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw ParseError(where + ": expected a 3-vector");
  return {as_double(v[0], where), as_double(v[1], where), as_double(v[2], where)};
}

int key_id(const std::string& key, const std::string& where) {
  std::size_t used = 0;
  int id = 0;
  try {
    id = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || key.empty()) throw ParseError(where + ": key '" + key + "' is not an integer id");
  return id;
}

std::vector<OrientedEdge> oriented_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected a list of signed edge ids");
  std::vector<OrientedEdge> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(OrientedEdge::from_signed(as_int(v[i], where + "[" + std::to_string(i) + "]")));
  return out;
}

json vec_json(const Eigen::Ref<const Eigen::RowVector3d>& v) { return json::array({v(0), v(1), v(2)}); }

json walk_json(const std::vector<OrientedEdge>& walk) {
  json a = json::array();
  for (auto e : walk) a.push_back(e.signed_id());
  return a;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SurfaceDocument parse_surface(const std::string& text) {
  const json doc = parse_json(text);
  SurfaceDocument out;
  const json& vs = field(doc, "vertices");
  if (!vs.is_array()) throw ParseError("'vertices' must be a list");
  for (std::size_t i = 0; i < vs.size(); ++i) out.data.vertices.push_back(as_int(vs[i], "vertices[" + std::to_string(i) + "]"));

  const json& es = field(doc, "edges");
  if (!es.is_array()) throw ParseError("'edges' must be a list");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    out.data.edges.push_back({as_int(field(es[i], "id"), where + ".id"), as_int(field(es[i], "tail"), where + ".tail"),
                              as_int(field(es[i], "head"), where + ".head")});
  }

  const json& ts = field(doc, "triangles");
  if (!ts.is_array()) throw ParseError("'triangles' must be a list");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = "triangles[" + std::to_string(i) + "]";
    const auto t = oriented_list(ts[i], where);
    if (t.size() != 3) throw ParseError(where + ": a triangle has exactly three edges");
    out.data.triangles.push_back({t[0], t[1], t[2]});
  }
  if (doc.contains("boundary_walk")) out.data.boundary_walk = oriented_list(doc.at("boundary_walk"), "boundary_walk");

  const GraphSurface s(out.data);  // validates and sorts
  out.data = s.data();
  if (doc.contains("lengths")) {
    const json& ls = doc.at("lengths");
    if (!ls.is_object()) throw ParseError("'lengths' must map edge ids to numbers");
    EdgeLengths l = EdgeLengths::Constant(static_cast<Eigen::Index>(s.edges().size()), std::nan(""));
    for (const auto& [key, value] : ls.items()) {
      const int id = key_id(key, "lengths");
      if (!s.has_edge(id)) throw ParseError("lengths: unknown edge id " + key);
      l(static_cast<Eigen::Index>(s.edge_index(id))) = as_double(value, "lengths." + key);
    }
    for (std::size_t i = 0; i < s.edges().size(); ++i)
      if (std::isnan(l(static_cast<Eigen::Index>(i))))
        throw ParseError("lengths: edge " + std::to_string(s.edges()[i].id) + " has no length");
    MetricSurface check(s, l);
    out.lengths = std::move(l);
  }
  return out;
}

SurfaceDocument read_surface(const std::string& path) { return parse_surface(read_file(path)); }

std::string serialize_surface(const GraphSurface& s, const std::optional<EdgeLengths>& lengths) {
  json doc;
  doc["vertices"] = s.vertices();
  json es = json::array();
  for (const Edge& e : s.edges()) es.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
  doc["edges"] = std::move(es);
  json ts = json::array();
  for (const Triangle& t : s.triangles()) ts.push_back({t[0].signed_id(), t[1].signed_id(), t[2].signed_id()});
  doc["triangles"] = std::move(ts);
  doc["boundary_walk"] = walk_json(s.boundary_walk());
  if (lengths) {
    if (lengths->size() != static_cast<Eigen::Index>(s.edges().size()))
      throw SizeMismatch("one length per unoriented edge is required");
    json ls = json::object();
    for (std::size_t i = 0; i < s.edges().size(); ++i)
      ls[std::to_string(s.edges()[i].id)] = (*lengths)(static_cast<Eigen::Index>(i));
    doc["lengths"] = std::move(ls);
  }
  return doc.dump(2) + "\n";
}

Realization parse_realization(const GraphSurface& s, const std::string& text) {
  const json doc = parse_json(text);
  Realization r;
  if (!doc.is_object()) throw ParseError("realization must be an object");
  if (doc.contains("edge_vectors")) {
    PolyhedronPoint q = PolyhedronPoint::Constant(static_cast<Eigen::Index>(s.edges().size()), 3, std::nan(""));
    for (const auto& [key, value] : doc.at("edge_vectors").items()) {
      const int id = key_id(key, "edge_vectors");
      if (!s.has_edge(id)) throw ParseError("edge_vectors: unknown edge id " + key);
      q.row(static_cast<Eigen::Index>(s.edge_index(id))) = as_vec3(value, "edge_vectors." + key).transpose();
    }
    if (q.hasNaN()) throw ParseError("edge_vectors: every edge needs a vector");
    r.edge_vectors = std::move(q);
  }
  if (doc.contains("positions")) {
    VertexPositions x = VertexPositions::Constant(static_cast<Eigen::Index>(s.vertices().size()), 3, std::nan(""));
    for (const auto& [key, value] : doc.at("positions").items()) {
      const int id = key_id(key, "positions");
      const auto it = std::find(s.vertices().begin(), s.vertices().end(), id);
      if (it == s.vertices().end()) throw ParseError("positions: unknown vertex id " + key);
      x.row(it - s.vertices().begin()) = as_vec3(value, "positions." + key).transpose();
    }
    if (x.hasNaN()) throw ParseError("positions: every vertex needs a position");
    r.positions = std::move(x);
  }
  if (!r.edge_vectors && !r.positions) throw ParseError("realization needs 'edge_vectors' or 'positions'");
  return r;
}

Realization read_realization(const GraphSurface& s, const std::string& path) {
  return parse_realization(s, read_file(path));
}

std::string serialize_realization(const GraphSurface& s, const Realization& r) {
  json doc = json::object();
  if (r.edge_vectors) {
    json m = json::object();
    for (std::size_t i = 0; i < s.edges().size(); ++i)
      m[std::to_string(s.edges()[i].id)] = vec_json(r.edge_vectors->row(static_cast<Eigen::Index>(i)));
    doc["edge_vectors"] = std::move(m);
  }
  if (r.positions) {
    json m = json::object();
    for (std::size_t i = 0; i < s.vertices().size(); ++i)
      m[std::to_string(s.vertices()[i])] = vec_json(r.positions->row(static_cast<Eigen::Index>(i)));
    doc["positions"] = std::move(m);
  }
  return doc.dump(2) + "\n";
}

PolygonDocument parse_polygon(const std::string& text) {
  const json doc = parse_json(text);
  const json& ls = field(doc, "lengths");
  const json& vs = field(doc, "vectors");
  if (!ls.is_array() || !vs.is_array() || ls.size() != vs.size())
    throw ParseError("'lengths' and 'vectors' must be lists of equal size");
  PolygonDocument out{Eigen::VectorXd(static_cast<Eigen::Index>(ls.size())),
                      EdgeVectorsd(static_cast<Eigen::Index>(vs.size()), 3)};
  for (std::size_t i = 0; i < ls.size(); ++i) {
    out.lengths(static_cast<Eigen::Index>(i)) = as_double(ls[i], "lengths[" + std::to_string(i) + "]");
    out.vectors.row(static_cast<Eigen::Index>(i)) = as_vec3(vs[i], "vectors[" + std::to_string(i) + "]").transpose();
  }
  return out;
}

std::string serialize_polygon(const PolygonDocument& doc) {
  json j;
  j["lengths"] = std::vector<double>(doc.lengths.data(), doc.lengths.data() + doc.lengths.size());
  json vs = json::array();
  for (Eigen::Index i = 0; i < doc.vectors.rows(); ++i) vs.push_back(vec_json(doc.vectors.row(i)));
  j["vectors"] = std::move(vs);
  return j.dump(2) + "\n";
}

std::uint64_t surface_hash(const GraphSurface& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_surface(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace polyiso::io
