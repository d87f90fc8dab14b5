#include "dg2d/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dg2d {

namespace {

std::string format_msh(const std::vector<Vec2>& nodes,
                       const std::vector<std::array<int, 3>>& tris,
                       const std::vector<std::array<int, 3>>& lines /* v0, v1, tag */) {
  std::ostringstream os;
  os.precision(17);
  os << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  os << "$Nodes\n" << nodes.size() << "\n";
  for (std::size_t i = 0; i < nodes.size(); ++i)
    os << i + 1 << ' ' << nodes[i].x << ' ' << nodes[i].y << " 0\n";
  os << "$EndNodes\n$Elements\n" << tris.size() + lines.size() << "\n";
  int id = 1;
  for (const auto& ln : lines)
    os << id++ << " 1 2 " << ln[2] << ' ' << ln[2] << ' ' << ln[0] + 1 << ' ' << ln[1] + 1
       << "\n";
  for (const auto& tr : tris)
    os << id++ << " 2 2 10 10 " << tr[0] + 1 << ' ' << tr[1] + 1 << ' ' << tr[2] + 1 << "\n";
  os << "$EndElements\n";
  return os.str();
}

void split_quads(int nx, int ny, std::vector<std::array<int, 3>>& tris) {
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      // diagonal from (i+1,j) to (i,j+1)
      tris.push_back({vid(i, j), vid(i + 1, j), vid(i, j + 1)});
      tris.push_back({vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
}

}  // namespace

EulerState vortex_exact(Vec2 point, const VortexGeometry& geo, const GasModel& gas) {
  double r = norm(point);
  double margin = 0.05 * (geo.r_outer - geo.r_inner);
  if (r < geo.r_inner - margin || r > geo.r_outer + margin)
    throw std::domain_error("point at radius " + std::to_string(r) +
                            " is outside the annulus");
  double g = gas.gamma;
  double ri = geo.r_inner;
  double mi = geo.mach_inner;
  double rho = geo.rho_inner *
               std::pow(1.0 + 0.5 * (g - 1.0) * mi * mi * (1.0 - ri * ri / (r * r)),
                        1.0 / (g - 1.0));
  double vt = geo.sound_speed_inner * mi * ri / r;
  double p_inner = geo.rho_inner * geo.sound_speed_inner * geo.sound_speed_inner / g;
  double p = p_inner * std::pow(rho / geo.rho_inner, g);
  Vec2 tangent{-point.y / r, point.x / r};  // counter-clockwise flow
  EulerState u;
  u.rho = rho;
  u.mx = rho * vt * tangent.x;
  u.my = rho * vt * tangent.y;
  u.E = p / (g - 1.0) + 0.5 * rho * vt * vt;
  return u;
}

BoundaryConditions vortex_boundary(const VortexGeometry& geo, const GasModel& gas) {
  BoundaryConditions bc;
  bc.inflow_state = vortex_exact({0.5 * (geo.r_inner + geo.r_outer), 0.0}, geo, gas);
  bc.dirichlet = [geo, gas](Vec2 x, double) { return vortex_exact(x, geo, gas); };
  bc.wall_normal = [](Vec2 x) {
    double r = norm(x);
    return Vec2{x.x / r, x.y / r};
  };
  return bc;
}

EulerState rankine_hugoniot_post(const EulerState& pre, double mach, Vec2 n,
                                 const GasModel& gas) {
  double g = gas.gamma;
  double p1 = pressure(pre, gas);
  double c1 = std::sqrt(g * p1 / pre.rho);
  double m2 = mach * mach;
  double rho2 = pre.rho * ((g + 1.0) * m2) / ((g - 1.0) * m2 + 2.0);
  double p2 = p1 * (2.0 * g * m2 - (g - 1.0)) / (g + 1.0);
  double vn = 2.0 * (m2 - 1.0) / ((g + 1.0) * mach) * c1;  // piston speed, lab frame
  EulerState post;
  post.rho = rho2;
  post.mx = rho2 * vn * n.x;
  post.my = rho2 * vn * n.y;
  post.E = p2 / (g - 1.0) + 0.5 * rho2 * vn * vn;
  return post;
}

DoubleMachSetup::DoubleMachSetup() {
  pre = {1.4, 0.0, 0.0, 1.0 / 0.4};  // rho = 1.4, at rest, p = 1
  double rad = angle_deg * M_PI / 180.0;
  post = rankine_hugoniot_post(pre, shock_mach, {std::sin(rad), -std::cos(rad)}, GasModel{});
}

BoundaryConditions double_mach_boundary(const DoubleMachSetup& setup, const GasModel& gas) {
  (void)gas;
  BoundaryConditions bc;
  bc.inflow_state = setup.post;
  MovingShock shock;
  shock.x0 = setup.x0;
  shock.angle_deg = setup.angle_deg;
  double c_pre = std::sqrt(1.4 * pressure(setup.pre, GasModel{}) / setup.pre.rho);
  shock.speed = setup.shock_mach * c_pre;
  shock.post = setup.post;
  shock.pre = setup.pre;
  bc.shock = shock;
  return bc;
}

EulerState double_mach_initial(Vec2 point, const DoubleMachSetup& setup) {
  double rad = setup.angle_deg * M_PI / 180.0;
  double front_x = setup.x0 + point.y * std::cos(rad) / std::sin(rad);
  return point.x < front_x ? setup.post : setup.pre;
}

std::string gen_vortex_msh(int level, const VortexGeometry& geo) {
  if (level < 0 || level > 5) throw std::invalid_argument("vortex mesh level must be 0..5");
  int nr = 5 << level;
  int nt = 18 << level;
  std::vector<Vec2> nodes;
  nodes.reserve(static_cast<std::size_t>(nr + 1) * (nt + 1));
  for (int j = 0; j <= nt; ++j) {
    double theta = 0.5 * M_PI * j / nt;
    for (int i = 0; i <= nr; ++i) {
      double r = geo.r_inner + (geo.r_outer - geo.r_inner) * i / nr;
      nodes.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  std::vector<std::array<int, 3>> tris;
  split_quads(nr, nt, tris);

  std::vector<std::array<int, 3>> lines;
  auto vid = [nr](int i, int j) { return j * (nr + 1) + i; };
  for (int i = 0; i < nr; ++i) {
    lines.push_back({vid(i, 0), vid(i + 1, 0), 3});    // inlet at theta = 0
    lines.push_back({vid(i, nt), vid(i + 1, nt), 4});  // outlet at theta = pi/2
  }
  for (int j = 0; j < nt; ++j) {
    lines.push_back({vid(0, j), vid(0, j + 1), 2});    // inner arc, curved wall
    lines.push_back({vid(nr, j), vid(nr, j + 1), 2});  // outer arc, curved wall
  }
  return format_msh(nodes, tris, lines);
}

std::string gen_double_mach_msh(int nx, int ny, double x0) {
  if (nx < 2 || ny < 1) throw std::invalid_argument("double-mach mesh needs nx >= 2, ny >= 1");
  const double lx = 4.0, ly = 1.0;
  std::vector<Vec2> nodes;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) nodes.push_back({lx * i / nx, ly * j / ny});
  std::vector<std::array<int, 3>> tris;
  split_quads(nx, ny, tris);

  std::vector<std::array<int, 3>> lines;
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int i = 0; i < nx; ++i) {
    double xm = lx * (i + 0.5) / nx;
    lines.push_back({vid(i, 0), vid(i + 1, 0), xm < x0 ? 3 : 1});  // post-shock inflow, wall
    lines.push_back({vid(i, ny), vid(i + 1, ny), 5});              // moving shock
  }
  for (int j = 0; j < ny; ++j) {
    lines.push_back({vid(0, j), vid(0, j + 1), 3});    // inflow
    lines.push_back({vid(nx, j), vid(nx, j + 1), 4});  // outflow
  }
  return format_msh(nodes, tris, lines);
}

std::string gen_box_msh(int nx, int ny, double width, double height, int tag) {
  return gen_sheared_box_msh(nx, ny, width, height, 0.0, tag);
}

std::string gen_sheared_box_msh(int nx, int ny, double width, double height, double shear,
                                int tag) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("box mesh needs nx, ny >= 1");
  std::vector<Vec2> nodes;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      nodes.push_back({width * i / nx + shear * height * j / ny, height * j / ny});
  std::vector<std::array<int, 3>> tris;
  split_quads(nx, ny, tris);
  std::vector<std::array<int, 3>> lines;
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int i = 0; i < nx; ++i) {
    lines.push_back({vid(i, 0), vid(i + 1, 0), tag});
    lines.push_back({vid(i, ny), vid(i + 1, ny), tag});
  }
  for (int j = 0; j < ny; ++j) {
    lines.push_back({vid(0, j), vid(0, j + 1), tag});
    lines.push_back({vid(nx, j), vid(nx, j + 1), tag});
  }
  return format_msh(nodes, tris, lines);
}

int vortex_level_from_letter(char letter) {
  if (letter >= 'A' && letter <= 'F') return letter - 'A';
  if (letter >= 'a' && letter <= 'f') return letter - 'a';
  throw std::invalid_argument("mesh letter must be A..F");
}

}  // namespace dg2d
