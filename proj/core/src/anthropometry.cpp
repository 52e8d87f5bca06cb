// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/anthropometry.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "shapekit/convex_hull.hpp"
#include "shapekit/error.hpp"

namespace shapekit {

namespace {

std::string edge_name(const Edge& e) { return "edge " + std::to_string(e.a) + "-" + std::to_string(e.b); }

std::uint64_t pack(const std::pair<std::uint32_t, std::uint32_t>& key) {
  return (std::uint64_t{key.first} << 32) | key.second;
}

void compute_hull(PlaneSection& section) {
  std::vector<Eigen::Vector2d> xz;
  xz.reserve(section.points.size());
  for (const auto& p : section.points) xz.emplace_back(p.position.x(), p.position.z());
  const auto cycle = convex_hull_2d(xz);
  section.hull_edges.clear();
  if (cycle.size() < 2) return;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    section.hull_edges.emplace_back(cycle[k], cycle[(k + 1) % cycle.size()]);
  }
}

Vec3 reconstruct(const TriangleMesh& mesh, const IntersectionPoint& p) {
  const auto& tri = mesh.triangles()[p.triangle];
  return p.barycentric[0] * mesh.vertex(tri[0]) + p.barycentric[1] * mesh.vertex(tri[1]) +
         p.barycentric[2] * mesh.vertex(tri[2]);
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

void check_closed(const TriangleMesh& mesh) {
  if (!mesh.closed()) {
    throw Error(ErrorCode::open_mesh, "mesh is not closed; volume is undefined",
                edge_name(*mesh.boundary_edge()));
  }
  if (!mesh.consistently_oriented()) {
    throw Error(ErrorCode::inconsistent_winding, "mesh winding is inconsistent across an edge",
                edge_name(*mesh.misoriented_edge()));
  }
}

// Returns signed volume; throws when it cancels to (near) zero, which on a
// closed mesh indicates broken winding.
double checked_signed_volume(const TriangleMesh& mesh) {
  check_closed(mesh);
  double six_v = 0.0;
  double magnitude = 0.0;
  for (const auto& t : mesh.triangles()) {
    const double term = mesh.vertex(t[0]).dot(mesh.vertex(t[1]).cross(mesh.vertex(t[2])));
    six_v += term;
    magnitude += std::abs(term);
  }
  if (!(std::abs(six_v) > 1e-9 * magnitude) || six_v == 0.0) {
    throw Error(ErrorCode::inconsistent_winding,
                "signed volume is near zero; triangle winding is likely inconsistent", "volume");
  }
  return six_v / 6.0;
}

PlaneSection section_for(const TriangleMesh& mesh, std::uint32_t landmark, bool torso_only) {
  PlaneSection s = plane_section(mesh, mesh.vertices()(landmark, 1));
  if (torso_only) s = restrict_to_component(s, mesh.vertex(landmark));
  return s;
}

std::vector<std::uint64_t> hull_signature(const PlaneSection& s) {
  std::vector<std::uint64_t> sig;
  for (auto i : s.hull_cycle()) sig.push_back(pack(s.points[i].key));
  return sig;
}

}  // namespace

std::vector<std::size_t> PlaneSection::hull_cycle() const {
  std::vector<std::size_t> cycle;
  cycle.reserve(hull_edges.size());
  for (const auto& e : hull_edges) cycle.push_back(e.first);
  return cycle;
}

double height(const TriangleMesh& mesh, const LandmarkSet& landmarks) {
  if (landmarks.head_top >= mesh.num_vertices() || landmarks.left_heel >= mesh.num_vertices()) {
    throw Error(ErrorCode::missing_landmark, "height landmark out of range", "landmarks");
  }
  return std::abs(mesh.vertices()(landmarks.head_top, 1) - mesh.vertices()(landmarks.left_heel, 1));
}

double weight(const TriangleMesh& mesh, double density) {
  return density * std::abs(checked_signed_volume(mesh));
}

PlaneSection plane_section(const TriangleMesh& mesh, double h) {
  PlaneSection s;
  s.plane_height = h;
  std::unordered_map<std::uint64_t, std::size_t> index;
  const auto& v = mesh.vertices();
  const auto tris = mesh.triangles();

  for (std::size_t ti = 0; ti < tris.size(); ++ti) {
    const auto& tri = tris[ti];
    const bool up[3] = {v(tri[0], 1) >= h, v(tri[1], 1) >= h, v(tri[2], 1) >= h};
    const int n_up = up[0] + up[1] + up[2];
    if (n_up == 0 || n_up == 3) continue;

    std::size_t seg[2] = {0, 0};
    int n = 0;
    for (int k = 0; k < 3; ++k) {
      const int k2 = (k + 1) % 3;
      if (up[k] == up[k2]) continue;
      const int kl = up[k] ? k2 : k;
      const int kh = up[k] ? k : k2;
      const std::uint32_t lo = tri[kl];
      const std::uint32_t hi = tri[kh];
      const double t = (h - v(lo, 1)) / (v(hi, 1) - v(lo, 1));
      const std::pair<std::uint32_t, std::uint32_t> key =
          t == 1.0 ? std::make_pair(hi, hi) : std::make_pair(std::min(lo, hi), std::max(lo, hi));
      auto [it, inserted] = index.try_emplace(pack(key), s.points.size());
      if (inserted) {
        IntersectionPoint p;
        p.position = (1.0 - t) * mesh.vertex(lo) + t * mesh.vertex(hi);
        p.triangle = static_cast<std::uint32_t>(ti);
        p.barycentric = Eigen::Vector3d::Zero();
        p.barycentric[kl] = 1.0 - t;
        p.barycentric[kh] = t;
        p.below = lo;
        p.above = hi;
        p.t = t;
        p.key = key;
        s.points.push_back(p);
      }
      seg[n++] = it->second;
    }
    s.segments.emplace_back(seg[0], seg[1]);
  }
  if (s.points.empty()) {
    throw Error(ErrorCode::empty_intersection, "plane does not intersect the mesh",
                "y=" + std::to_string(h));
  }
  compute_hull(s);
  return s;
}

PlaneSection restrict_to_component(const PlaneSection& section, const Vec3& anchor) {
  if (section.points.empty()) return section;
  UnionFind uf(section.points.size());
  for (const auto& [a, b] : section.segments) uf.unite(a, b);

  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < section.points.size(); ++i) {
    const auto& p = section.points[i].position;
    const double d = std::hypot(p.x() - anchor.x(), p.z() - anchor.z());
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  const std::size_t root = uf.find(nearest);

  PlaneSection out;
  out.plane_height = section.plane_height;
  std::vector<std::size_t> remap(section.points.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < section.points.size(); ++i) {
    if (uf.find(i) == root) {
      remap[i] = out.points.size();
      out.points.push_back(section.points[i]);
    }
  }
  for (const auto& [a, b] : section.segments) {
    if (remap[a] != std::numeric_limits<std::size_t>::max()) out.segments.emplace_back(remap[a], remap[b]);
  }
  compute_hull(out);
  return out;
}

double hull_length(const TriangleMesh& mesh, const PlaneSection& section) {
  double total = 0.0;
  for (const auto& [i, j] : section.hull_edges) {
    total += (reconstruct(mesh, section.points[i]) - reconstruct(mesh, section.points[j])).norm();
  }
  return total;
}

double circumference(const TriangleMesh& mesh, std::uint32_t landmark_vertex, bool torso_only) {
  if (landmark_vertex >= mesh.num_vertices()) {
    throw Error(ErrorCode::missing_landmark, "landmark index out of range",
                "vertex " + std::to_string(landmark_vertex));
  }
  return hull_length(mesh, section_for(mesh, landmark_vertex, torso_only));
}

MeasurementSet measure_mesh(const TriangleMesh& mesh, const LandmarkSet& landmarks,
                            const MeasureOptions& options) {
  MeasurementSet m;
  m.height = height(mesh, landmarks);
  m.weight = weight(mesh, options.density);
  m.chest_circ = circumference(mesh, landmarks.chest, options.torso_only);
  m.waist_circ = circumference(mesh, landmarks.waist, options.torso_only);
  m.hip_circ = circumference(mesh, landmarks.hip, options.torso_only);

  const std::pair<const char*, double> circs[] = {
      {"chest_circ", m.chest_circ}, {"waist_circ", m.waist_circ}, {"hip_circ", m.hip_circ}};
  for (const auto& [name, c] : circs) {
    if (!(c > 0.0) || c > options.max_circumference) {
      throw Error(ErrorCode::invalid_mesh,
                  "circumference " + std::to_string(c) + " m outside (0, " +
                      std::to_string(options.max_circumference) + "]",
                  name);
    }
  }
  if (!(m.height > 0.0)) throw Error(ErrorCode::invalid_mesh, "height is not positive", "height");
  return m;
}

MeasurementSet measure(const BodyModel& model, const ShapeVector& beta, const MeasureOptions& options) {
  return measure_mesh(model.shaped_mesh(beta), model.landmarks(), options);
}

VertexGradient height_vertex_gradient(const TriangleMesh& mesh, const LandmarkSet& landmarks) {
  const double dy = mesh.vertices()(landmarks.head_top, 1) - mesh.vertices()(landmarks.left_heel, 1);
  const double sign = dy >= 0.0 ? 1.0 : -1.0;
  return {{landmarks.head_top, Vec3(0, sign, 0)}, {landmarks.left_heel, Vec3(0, -sign, 0)}};
}

VertexGradient weight_vertex_gradient(const TriangleMesh& mesh, double density) {
  const double sign = checked_signed_volume(mesh) >= 0.0 ? 1.0 : -1.0;
  const double scale = sign * density / 6.0;
  std::vector<Vec3> acc(mesh.num_vertices(), Vec3::Zero());
  for (const auto& t : mesh.triangles()) {
    const Vec3 a = mesh.vertex(t[0]);
    const Vec3 b = mesh.vertex(t[1]);
    const Vec3 c = mesh.vertex(t[2]);
    acc[t[0]] += b.cross(c);
    acc[t[1]] += c.cross(a);
    acc[t[2]] += a.cross(b);
  }
  VertexGradient out;
  out.reserve(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out.emplace_back(static_cast<std::uint32_t>(i), scale * acc[i]);
  return out;
}

VertexGradient circumference_vertex_gradient(const TriangleMesh& mesh, const PlaneSection& section,
                                             std::uint32_t landmark_vertex) {
  // dC/dp for every hull point.
  std::vector<Vec3> dp(section.points.size(), Vec3::Zero());
  for (const auto& [i, j] : section.hull_edges) {
    const Vec3 d = reconstruct(mesh, section.points[i]) - reconstruct(mesh, section.points[j]);
    const double len = d.norm();
    if (len == 0.0) continue;
    dp[i] += d / len;
    dp[j] -= d / len;
  }

  // p = (1-t) a + t b with t = (h - a_y) / (b_y - a_y) and h = y(landmark):
  //   dp/da = (1-t) I - (b - a)(1-t) e_y^T / dy
  //   dp/db =    t  I - (b - a)   t  e_y^T / dy
  //   dp/dh =          (b - a)          / dy
  VertexGradient out;
  const Vec3 ey(0, 1, 0);
  double dh = 0.0;
  for (std::size_t k = 0; k < section.points.size(); ++k) {
    if (dp[k].isZero(0.0)) continue;
    const auto& p = section.points[k];
    const Vec3 a = mesh.vertex(p.below);
    const Vec3 b = mesh.vertex(p.above);
    const double dy = b.y() - a.y();
    const double s = dp[k].dot(b - a) / dy;
    out.emplace_back(p.below, (1.0 - p.t) * (dp[k] - s * ey));
    out.emplace_back(p.above, p.t * (dp[k] - s * ey));
    dh += s;
  }
  out.emplace_back(landmark_vertex, dh * ey);
  return out;
}

Eigen::VectorXd to_beta_gradient(const BodyModel& model, const VertexGradient& grad) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(model.num_betas());
  for (const auto& [v, d] : grad) g.noalias() += model.vertex_jacobian(v).transpose() * d;
  return g;
}

MeasurementGradients measure_gradients(const BodyModel& model, const ShapeVector& beta,
                                       const MeasureOptions& options) {
  const TriangleMesh mesh = model.shaped_mesh(beta);
  const auto& lm = model.landmarks();
  const std::uint32_t circ_landmarks[3] = {lm.chest, lm.waist, lm.hip};

  MeasurementGradients out;
  out.values.height = height(mesh, lm);
  out.values.weight = weight(mesh, options.density);
  out.height = to_beta_gradient(model, height_vertex_gradient(mesh, lm));
  out.weight = to_beta_gradient(model, weight_vertex_gradient(mesh, options.density));

  Eigen::VectorXd* circ_grads[3] = {&out.chest_circ, &out.waist_circ, &out.hip_circ};
  double* circ_values[3] = {&out.values.chest_circ, &out.values.waist_circ, &out.values.hip_circ};
  std::vector<std::uint64_t> signatures[3];
  for (int c = 0; c < 3; ++c) {
    const PlaneSection s = section_for(mesh, circ_landmarks[c], options.torso_only);
    *circ_values[c] = hull_length(mesh, s);
    *circ_grads[c] = to_beta_gradient(model, circumference_vertex_gradient(mesh, s, circ_landmarks[c]));
    signatures[c] = hull_signature(s);
  }

  // Probe the hull combinatorics along each beta axis.
  const auto& basis = model.shape_basis();
  const auto rows = static_cast<Eigen::Index>(model.num_vertices());
  for (int b = 0; b < model.num_betas() && !(out.circ_non_smooth[0] && out.circ_non_smooth[1] && out.circ_non_smooth[2]); ++b) {
    const Eigen::Map<const Vertices> column(basis.col(b).data(), rows, 3);
    for (double sign : {1.0, -1.0}) {
      const TriangleMesh probe = mesh.with_vertices(mesh.vertices() + (sign * kNonSmoothProbe) * column);
      for (int c = 0; c < 3; ++c) {
        if (out.circ_non_smooth[c]) continue;
        if (hull_signature(section_for(probe, circ_landmarks[c], options.torso_only)) != signatures[c]) {
          out.circ_non_smooth[c] = true;
        }
      }
    }
  }
  return out;
}

}  // namespace shapekit
