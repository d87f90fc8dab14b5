#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dg2d/geometry.hpp"

namespace dg2d {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Element vertices are stored counter-clockwise; clockwise input triangles
// are silently reordered.  edge[q] is the edge lying on canonical side q+1,
// side 1 spanning local vertices (0,1), side 2 (1,2), side 3 (2,0).
struct Element {
  std::array<int, 3> v{};
  std::array<int, 3> edge{-1, -1, -1};
  double det_jac = 0.0;               // (x2-x1)(y3-y1)-(x3-x1)(y2-y1), twice the area
  std::array<double, 4> tau{};        // det(J) * J^{-1}, row-major
  double inradius = 0.0;
};

// The endpoint pair (v0,v1) is ordered as the left element traverses it, so
// the k-th Gauss point of the edge and the k-th point of canonical side
// side_left coincide under the left element's mapping.  The unit normal
// points from the left element to the right one; for boundary edges, which
// carry a negative boundary code in `right`, it points out of the domain.
struct Edge {
  int v0 = -1, v1 = -1;
  int left = -1;
  int right = -1;      // element id, or boundary code if negative
  int side_left = 0;   // 1..3
  int side_right = 0;  // 1..3, 0 for boundary edges
  double nx = 0.0, ny = 0.0;
  double half_length = 0.0;

  bool is_boundary() const { return right < 0; }
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<Element> elements;
  std::vector<Edge> edges;
  int n_boundary_edges = 0;

  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  // Neighbor across canonical side q+1 of element i, or the boundary code.
  int neighbor(int i, int q) const {
    const Edge& e = edges[elements[i].edge[q]];
    return e.left == i ? e.right : e.left;
  }

  Vec2 vertex_of(int elem, int local) const { return vertices[elements[elem].v[local]]; }
  double total_area() const;
};

// Raw mesh-file content before connectivity is established.
struct MeshPrecursor {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // file order, 0-based vertex ids
  struct BoundaryLine {
    int v0, v1;
    int tag;  // positive physical tag; stored on the edge as code -tag
  };
  std::vector<BoundaryLine> boundary_lines;
};

// GMSH ASCII v2.2 only.  Errors carry the offending line number.
MeshPrecursor parse_msh(std::string_view text);
MeshPrecursor parse_msh_file(const std::string& path);

Mesh build_connectivity(const MeshPrecursor& pre);

// det(J) and tau = det(J) J^{-1} for a CCW vertex triple.
struct JacobianData {
  double det;
  std::array<double, 4> tau;
};
JacobianData element_jacobian(Vec2 a, Vec2 b, Vec2 c);

// Geometry of one directed edge as seen from its left element:
// unit outward normal, half length, and the canonical side it maps to.
struct EdgeGeometry {
  Vec2 normal;
  double half_length;
  int side;  // 1..3
};
EdgeGeometry edge_geometry(const Mesh& mesh, int elem, int local_from, int local_to);

// One edge per line: v0 v1 left right L R nx ny halflen
void dump_edges(const Mesh& mesh, std::ostream& os);

}  // namespace dg2d
