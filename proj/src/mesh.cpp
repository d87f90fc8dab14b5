#include "dg2d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace dg2d {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw MeshError("mesh file, line " + std::to_string(line) + ": " + what);
}

struct LineScanner {
  std::istringstream in;
  int line_no = 0;
  std::string current;

  explicit LineScanner(std::string_view text) : in(std::string(text)) {}

  bool next() {
    while (std::getline(in, current)) {
      ++line_no;
      if (!current.empty() && current.back() == '\r') current.pop_back();
      if (!current.empty()) return true;
    }
    return false;
  }
};

}  // namespace

double Mesh::total_area() const {
  double area = 0.0;
  for (const Element& e : elements) area += 0.5 * e.det_jac;
  return area;
}

MeshPrecursor parse_msh(std::string_view text) {
  LineScanner sc(text);
  MeshPrecursor pre;
  std::unordered_map<std::int64_t, int> node_id_map;
  bool saw_format = false, saw_nodes = false, saw_elements = false;

  while (sc.next()) {
    if (sc.current[0] != '$') continue;
    std::string section = sc.current;

    if (section == "$MeshFormat") {
      if (!sc.next()) fail(sc.line_no, "unexpected end of file in $MeshFormat");
      std::istringstream is(sc.current);
      std::string version;
      int file_type = -1, data_size = 0;
      if (!(is >> version >> file_type >> data_size))
        fail(sc.line_no, "malformed $MeshFormat header");
      if (version != "2.2")
        fail(sc.line_no, "unsupported mesh format version '" + version + "', expected 2.2");
      if (file_type != 0) fail(sc.line_no, "binary .msh files are not supported");
      if (!sc.next() || sc.current != "$EndMeshFormat")
        fail(sc.line_no, "missing $EndMeshFormat");
      saw_format = true;
    } else if (section == "$Nodes") {
      if (!sc.next()) fail(sc.line_no, "unexpected end of file in $Nodes");
      std::int64_t count = 0;
      {
        std::istringstream is(sc.current);
        if (!(is >> count) || count < 0) fail(sc.line_no, "malformed node count");
      }
      pre.vertices.reserve(static_cast<std::size_t>(count));
      for (std::int64_t i = 0; i < count; ++i) {
        if (!sc.next()) fail(sc.line_no, "unexpected end of file in $Nodes");
        std::istringstream is(sc.current);
        std::int64_t id;
        double x, y, z;
        if (!(is >> id >> x >> y >> z)) fail(sc.line_no, "malformed node line");
        if (!std::isfinite(x) || !std::isfinite(y))
          fail(sc.line_no, "non-finite node coordinates");
        if (!node_id_map.emplace(id, static_cast<int>(pre.vertices.size())).second)
          fail(sc.line_no, "duplicate node id " + std::to_string(id));
        pre.vertices.push_back({x, y});
      }
      if (!sc.next() || sc.current != "$EndNodes") fail(sc.line_no, "missing $EndNodes");
      saw_nodes = true;
    } else if (section == "$Elements") {
      if (!saw_nodes) fail(sc.line_no, "$Elements section before $Nodes");
      if (!sc.next()) fail(sc.line_no, "unexpected end of file in $Elements");
      std::int64_t count = 0;
      {
        std::istringstream is(sc.current);
        if (!(is >> count) || count < 0) fail(sc.line_no, "malformed element count");
      }
      auto map_node = [&](std::int64_t id, int line) {
        auto it = node_id_map.find(id);
        if (it == node_id_map.end())
          fail(line, "undefined node " + std::to_string(id));
        return it->second;
      };
      for (std::int64_t i = 0; i < count; ++i) {
        if (!sc.next()) fail(sc.line_no, "unexpected end of file in $Elements");
        std::istringstream is(sc.current);
        std::int64_t id;
        int type = 0, ntags = 0;
        if (!(is >> id >> type >> ntags)) fail(sc.line_no, "malformed element line");
        std::vector<int> tags(ntags);
        for (int t = 0; t < ntags; ++t)
          if (!(is >> tags[t])) fail(sc.line_no, "malformed element tags");
        if (type == 2) {
          std::int64_t a, b, c;
          if (!(is >> a >> b >> c)) fail(sc.line_no, "triangle needs 3 node ids");
          pre.triangles.push_back({map_node(a, sc.line_no), map_node(b, sc.line_no),
                                   map_node(c, sc.line_no)});
        } else if (type == 1) {
          std::int64_t a, b;
          if (!(is >> a >> b)) fail(sc.line_no, "line element needs 2 node ids");
          int tag = ntags > 0 ? tags[0] : 0;
          pre.boundary_lines.push_back(
              {map_node(a, sc.line_no), map_node(b, sc.line_no), tag});
        } else if (type == 15) {
          // point elements carry no solver information
        } else {
          fail(sc.line_no, "unsupported element type " + std::to_string(type) +
                               " (only 3-node triangles, 2-node lines and points)");
        }
      }
      if (!sc.next() || sc.current != "$EndElements") fail(sc.line_no, "missing $EndElements");
      saw_elements = true;
    } else {
      // skip unknown sections ($PhysicalNames and friends)
      std::string end = "$End" + section.substr(1);
      bool closed = false;
      while (sc.next()) {
        if (sc.current == end) {
          closed = true;
          break;
        }
      }
      if (!closed) fail(sc.line_no, "unterminated section " + section);
    }
  }

  if (!saw_format) throw MeshError("mesh file: missing $MeshFormat section");
  if (!saw_nodes) throw MeshError("mesh file: missing $Nodes section");
  if (!saw_elements) throw MeshError("mesh file: missing $Elements section");
  return pre;
}

MeshPrecursor parse_msh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_msh(ss.str());
}

JacobianData element_jacobian(Vec2 a, Vec2 b, Vec2 c) {
  double j00 = b.x - a.x, j01 = c.x - a.x;
  double j10 = b.y - a.y, j11 = c.y - a.y;
  double det = j00 * j11 - j01 * j10;
  double scale = std::max({std::abs(j00), std::abs(j01), std::abs(j10), std::abs(j11)});
  if (det <= 1e-14 * scale * scale)
    throw MeshError("degenerate (collinear or clockwise) triangle, det(J) = " +
                    std::to_string(det));
  return {det, {j11, -j01, -j10, j00}};
}

EdgeGeometry edge_geometry(const Mesh& mesh, int elem, int local_from, int local_to) {
  const Element& el = mesh.elements[elem];
  Vec2 a = mesh.vertices[el.v[local_from]];
  Vec2 b = mesh.vertices[el.v[local_to]];
  double len = norm(b - a);
  if (len == 0.0) throw MeshError("zero-length edge");
  int side;
  if (local_from == 0 && local_to == 1) side = 1;
  else if (local_from == 1 && local_to == 2) side = 2;
  else if (local_from == 2 && local_to == 0) side = 3;
  else throw MeshError("vertex pair is not a CCW side of the element");
  return {outward_normal(a, b), 0.5 * len, side};
}

Mesh build_connectivity(const MeshPrecursor& pre) {
  Mesh mesh;
  mesh.vertices = pre.vertices;
  const int n_vert = static_cast<int>(mesh.vertices.size());

  mesh.elements.resize(pre.triangles.size());
  for (std::size_t i = 0; i < pre.triangles.size(); ++i) {
    std::array<int, 3> v = pre.triangles[i];
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
      throw MeshError("triangle " + std::to_string(i) + " has repeated vertices");
    for (int k = 0; k < 3; ++k)
      if (v[k] < 0 || v[k] >= n_vert)
        throw MeshError("triangle " + std::to_string(i) + " references missing vertex");
    Vec2 a = mesh.vertices[v[0]], b = mesh.vertices[v[1]], c = mesh.vertices[v[2]];
    if (cross(b - a, c - a) < 0.0) std::swap(v[1], v[2]);
    mesh.elements[i].v = v;
    JacobianData jd = element_jacobian(mesh.vertices[v[0]], mesh.vertices[v[1]],
                                       mesh.vertices[v[2]]);
    mesh.elements[i].det_jac = jd.det;
    mesh.elements[i].tau = jd.tau;
    double perimeter = norm(mesh.vertices[v[1]] - mesh.vertices[v[0]]) +
                       norm(mesh.vertices[v[2]] - mesh.vertices[v[1]]) +
                       norm(mesh.vertices[v[0]] - mesh.vertices[v[2]]);
    mesh.elements[i].inradius = jd.det / perimeter;
  }

  // Boundary tags keyed by the unordered vertex pair.
  std::map<std::pair<int, int>, int> boundary_tag;
  for (const auto& bl : pre.boundary_lines) {
    if (bl.tag <= 0)
      throw MeshError("boundary line (" + std::to_string(bl.v0) + "," +
                      std::to_string(bl.v1) + ") has no positive physical tag");
    auto key = std::minmax(bl.v0, bl.v1);
    auto [it, inserted] = boundary_tag.emplace(key, bl.tag);
    if (!inserted && it->second != bl.tag)
      throw MeshError("conflicting boundary tags on edge (" + std::to_string(bl.v0) + "," +
                      std::to_string(bl.v1) + ")");
  }

  // Collect edge incidences; a key maps to at most two (element, side) pairs.
  struct Incidence {
    int elem = -1;
    int side = 0;  // 1..3
  };
  std::map<std::pair<int, int>, std::vector<Incidence>> incidences;
  for (int i = 0; i < mesh.n_elements(); ++i) {
    const auto& v = mesh.elements[i].v;
    for (int q = 0; q < 3; ++q) {
      auto key = std::minmax(v[q], v[(q + 1) % 3]);
      auto& list = incidences[key];
      list.push_back({i, q + 1});
      if (list.size() > 2)
        throw MeshError("non-manifold edge (" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + ") shared by more than two triangles");
    }
  }

  std::vector<Edge> edges;
  edges.reserve(incidences.size());
  for (const auto& [key, list] : incidences) {
    Edge e;
    if (list.size() == 2) {
      const Incidence& li = list[0].elem < list[1].elem ? list[0] : list[1];
      const Incidence& ri = list[0].elem < list[1].elem ? list[1] : list[0];
      e.left = li.elem;
      e.right = ri.elem;
      e.side_left = li.side;
      e.side_right = ri.side;
      if (auto it = boundary_tag.find(key); it != boundary_tag.end())
        throw MeshError("boundary tag on interior edge (" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + ")");
    } else {
      auto it = boundary_tag.find(key);
      if (it == boundary_tag.end())
        throw MeshError("hull edge (" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + ") has no boundary tag");
      e.left = list[0].elem;
      e.right = -it->second;
      e.side_left = list[0].side;
      e.side_right = 0;
    }
    const auto& lv = mesh.elements[e.left].v;
    e.v0 = lv[e.side_left - 1];
    e.v1 = lv[e.side_left % 3];
    Vec2 a = mesh.vertices[e.v0], b = mesh.vertices[e.v1];
    double len = norm(b - a);
    if (len == 0.0) throw MeshError("zero-length edge");
    Vec2 n = outward_normal(a, b);
    e.nx = n.x;
    e.ny = n.y;
    e.half_length = 0.5 * len;
    edges.push_back(e);
  }

  // Boundary edges first, grouped by code; (left, side_left) is unique per
  // edge and makes the order independent of discovery order.
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    bool ab = a.is_boundary(), bb = b.is_boundary();
    if (ab != bb) return ab;
    if (ab && a.right != b.right) return a.right > b.right;
    if (a.left != b.left) return a.left < b.left;
    return a.side_left < b.side_left;
  });

  mesh.edges = std::move(edges);
  mesh.n_boundary_edges = 0;
  for (const Edge& e : mesh.edges)
    if (e.is_boundary()) ++mesh.n_boundary_edges;

  for (int ei = 0; ei < mesh.n_edges(); ++ei) {
    const Edge& e = mesh.edges[ei];
    mesh.elements[e.left].edge[e.side_left - 1] = ei;
    if (!e.is_boundary()) mesh.elements[e.right].edge[e.side_right - 1] = ei;
  }
  for (int i = 0; i < mesh.n_elements(); ++i)
    for (int q = 0; q < 3; ++q)
      if (mesh.elements[i].edge[q] < 0)
        throw MeshError("element " + std::to_string(i) + " is missing edge on side " +
                        std::to_string(q + 1));
  return mesh;
}

void dump_edges(const Mesh& mesh, std::ostream& os) {
  os.precision(17);
  for (const Edge& e : mesh.edges)
    os << e.v0 << ' ' << e.v1 << ' ' << e.left << ' ' << e.right << ' ' << e.side_left << ' '
       << e.side_right << ' ' << e.nx << ' ' << e.ny << ' ' << e.half_length << '\n';
}

}  // namespace dg2d
