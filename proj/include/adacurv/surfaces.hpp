#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adacurv/geometry.hpp"

namespace adacurv {

enum class SurfaceKind { Torus, Ellipsoid, HyperbolicParaboloid, Sphere, Plane };

/// Parametric benchmark surface. Parameter meaning per kind:
///   torus(R, r)                     ring radius R > tube radius r > 0
///   ellipsoid(a, b, c)              semi-axes
///   hyperbolic_paraboloid(a, b, e)  z = a x^2 - b y^2 over [-e, e]^2
///   sphere(R)
///   plane(e)                        z = 0 over [-e, e]^2
struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::Sphere;
  double p0 = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;

  static SurfaceSpec torus(double R = 2.0, double r = 1.0) {
    if (!(R > r && r > 0.0))
      fail(Errc::InvalidSurface, "torus requires R > r > 0");
    return SurfaceSpec{SurfaceKind::Torus, R, r, 0.0};
  }
  static SurfaceSpec ellipsoid(double a = 3.0, double b = 2.0, double c = 1.0) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
      fail(Errc::InvalidSurface, "ellipsoid requires positive semi-axes");
    return SurfaceSpec{SurfaceKind::Ellipsoid, a, b, c};
  }
  static SurfaceSpec hyperbolic_paraboloid(double a = 1.0, double b = 1.0,
                                           double extent = 1.0) {
    if (!(a > 0.0 && b > 0.0 && extent > 0.0))
      fail(Errc::InvalidSurface, "hyperbolic_paraboloid requires positive parameters");
    return SurfaceSpec{SurfaceKind::HyperbolicParaboloid, a, b, extent};
  }
  static SurfaceSpec sphere(double R = 1.0) {
    if (!(R > 0.0)) fail(Errc::InvalidSurface, "sphere requires R > 0");
    return SurfaceSpec{SurfaceKind::Sphere, R, 0.0, 0.0};
  }
  static SurfaceSpec plane(double extent = 1.0) {
    if (!(extent > 0.0)) fail(Errc::InvalidSurface, "plane requires extent > 0");
    return SurfaceSpec{SurfaceKind::Plane, extent, 0.0, 0.0};
  }

  const char* name() const {
    switch (kind) {
      case SurfaceKind::Torus: return "torus";
      case SurfaceKind::Ellipsoid: return "ellipsoid";
      case SurfaceKind::HyperbolicParaboloid: return "saddle";
      case SurfaceKind::Sphere: return "sphere";
      case SurfaceKind::Plane: return "plane";
    }
    return "unknown";
  }
};

/// A sampled surface point with its analytic ground truth. Curvature signs
/// follow the normal-section convention (the component of curve acceleration
/// along the stored normal), so a sphere with outward normal has mean
/// curvature -1/R. `mean` is the classical (kappa1 + kappa2) / 2. Normals
/// point outward for closed surfaces, toward +z for the saddle and plane.
struct GroundTruthPoint {
  Point3 position = Point3::Zero();
  double gauss = 0.0;
  double mean = 0.0;
  Point3 normal = Point3::UnitZ();
  Point3 noisy_position = Point3::Zero();
};

struct CurvatureTruth {
  double gauss = 0.0;
  double mean = 0.0;
  Point3 normal = Point3::UnitZ();
};

enum class SamplingMode { AreaUniform, ParamUniform };

/// Embedding map of the surface chart. Torus/ellipsoid/sphere use angles
/// (u, v); the saddle and plane use (x, y) directly.
inline Point3 surface_point(const SurfaceSpec& spec, double u, double v) {
  switch (spec.kind) {
    case SurfaceKind::Torus: {
      const double ring = spec.p0 + spec.p1 * std::cos(v);
      return Point3(ring * std::cos(u), ring * std::sin(u), spec.p1 * std::sin(v));
    }
    case SurfaceKind::Ellipsoid:
      return Point3(spec.p0 * std::sin(v) * std::cos(u), spec.p1 * std::sin(v) * std::sin(u),
                    spec.p2 * std::cos(v));
    case SurfaceKind::HyperbolicParaboloid:
      return Point3(u, v, spec.p0 * u * u - spec.p1 * v * v);
    case SurfaceKind::Sphere:
      return Point3(spec.p0 * std::sin(v) * std::cos(u), spec.p0 * std::sin(v) * std::sin(u),
                    spec.p0 * std::cos(v));
    case SurfaceKind::Plane:
      return Point3(u, v, 0.0);
  }
  fail(Errc::InvalidSurface, "surface_point: unknown surface kind");
}

/// Closed-form Gaussian/mean curvature and unit normal at chart parameters
/// (u, v). Out-of-domain parameters raise InvalidArgument.
inline CurvatureTruth analytic_curvature(const SurfaceSpec& spec, double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v))
    fail(Errc::InvalidArgument, "analytic_curvature: non-finite parameters");
  CurvatureTruth out;
  switch (spec.kind) {
    case SurfaceKind::Torus: {
      const double R = spec.p0;
      const double r = spec.p1;
      const double ring = R + r * std::cos(v);
      out.normal = Point3(std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v));
      out.gauss = std::cos(v) / (r * ring);
      out.mean = -(R + 2.0 * r * std::cos(v)) / (2.0 * r * ring);
      return out;
    }
    case SurfaceKind::Sphere: {
      const double R = spec.p0;
      if (v < 0.0 || v > M_PI)
        fail(Errc::InvalidArgument, "analytic_curvature: polar angle outside [0,pi]");
      // Constant-curvature surface: emit the exact constants so downstream
      // consumers see a bitwise-constant truth column.
      out.normal = Point3(std::sin(v) * std::cos(u), std::sin(v) * std::sin(u), std::cos(v));
      out.gauss = 1.0 / (R * R);
      out.mean = -1.0 / R;
      return out;
    }
    case SurfaceKind::Ellipsoid: {
      const double a = spec.p0;
      const double b = spec.p1;
      const double c = spec.p2;
      if (v < 0.0 || v > M_PI)
        fail(Errc::InvalidArgument, "analytic_curvature: polar angle outside [0,pi]");
      const Point3 x = surface_point(spec, u, v);
      const Point3 g(x.x() / (a * a), x.y() / (b * b), x.z() / (c * c));
      const double h = g.norm();
      out.normal = g / h;
      out.gauss = 1.0 / (a * a * b * b * c * c * h * h * h * h);
      // Mean curvature from the divergence of the outward unit normal field.
      const double trace = 1.0 / (a * a) + 1.0 / (b * b) + 1.0 / (c * c);
      const double q = x.x() * x.x() / std::pow(a, 6) + x.y() * x.y() / std::pow(b, 6) +
                       x.z() * x.z() / std::pow(c, 6);
      out.mean = -0.5 * (trace / h - q / (h * h * h));
      return out;
    }
    case SurfaceKind::HyperbolicParaboloid: {
      const double a = spec.p0;
      const double b = spec.p1;
      const double extent = spec.p2;
      if (std::abs(u) > extent || std::abs(v) > extent)
        fail(Errc::InvalidArgument, "analytic_curvature: point outside the saddle extent");
      const double fx = 2.0 * a * u;
      const double fy = -2.0 * b * v;
      const double w_sq = 1.0 + fx * fx + fy * fy;
      const double w = std::sqrt(w_sq);
      out.normal = Point3(-fx, -fy, 1.0) / w;
      out.gauss = -4.0 * a * b / (w_sq * w_sq);
      out.mean = ((1.0 + fy * fy) * 2.0 * a + (1.0 + fx * fx) * -2.0 * b) / (2.0 * w_sq * w);
      return out;
    }
    case SurfaceKind::Plane: {
      const double extent = spec.p0;
      if (std::abs(u) > extent || std::abs(v) > extent)
        fail(Errc::InvalidArgument, "analytic_curvature: point outside the plane extent");
      return out;  // gauss = mean = 0, normal = +z
    }
  }
  fail(Errc::InvalidSurface, "analytic_curvature: unknown surface kind");
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent generator per (seed, stream, point index), so generation is
/// order-deterministic no matter how the points are partitioned.
inline std::mt19937_64 point_rng(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) {
  const std::uint64_t s = splitmix64(splitmix64(seed ^ (0xA076'1D64'78BD'642Full * (stream + 1))) ^ index);
  return std::mt19937_64(s);
}

inline constexpr std::uint64_t kSampleStream = 1;
inline constexpr std::uint64_t kNoiseStream = 2;

}  // namespace detail

/// Draw n surface samples with analytic ground truth, deterministically for a
/// fixed seed. Torus and ellipsoid are area-uniform by rejection against the
/// area element (ParamUniform skips the rejection); the sphere is always
/// area-uniform via a normalised Gaussian triple; the saddle and plane are
/// uniform over the parameter box, which weights space by the inverse area
/// element on the saddle.
inline std::vector<GroundTruthPoint> sample_surface(
    const SurfaceSpec& spec, int n, std::uint64_t seed,
    SamplingMode mode = SamplingMode::AreaUniform) {
  if (n < 1) fail(Errc::InvalidCount, "sample_surface: sample count must be >= 1");
  std::vector<GroundTruthPoint> points(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng = detail::point_rng(seed, detail::kSampleStream, i);
    double u = 0.0;
    double v = 0.0;
    switch (spec.kind) {
      case SurfaceKind::Torus: {
        const double R = spec.p0;
        const double r = spec.p1;
        u = 2.0 * M_PI * unit(rng);
        for (;;) {
          v = 2.0 * M_PI * unit(rng);
          if (mode == SamplingMode::ParamUniform) break;
          if (unit(rng) * (R + r) <= R + r * std::cos(v)) break;
        }
        break;
      }
      case SurfaceKind::Ellipsoid: {
        const double a = spec.p0;
        const double b = spec.p1;
        const double c = spec.p2;
        const double bound = std::max(a * b, std::max(b * c, a * c));
        for (;;) {
          u = 2.0 * M_PI * unit(rng);
          v = M_PI * unit(rng);
          if (mode == SamplingMode::ParamUniform) break;
          const double sv = std::sin(v);
          const double cu = std::cos(u);
          const double su = std::sin(u);
          const double area = sv * std::sqrt(b * c * b * c * sv * sv * cu * cu +
                                             a * c * a * c * sv * sv * su * su +
                                             a * b * a * b * std::cos(v) * std::cos(v));
          if (unit(rng) * bound <= area) break;
        }
        break;
      }
      case SurfaceKind::Sphere: {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Point3 dir;
        do {
          dir = Point3(gauss(rng), gauss(rng), gauss(rng));
        } while (dir.norm() < 1e-12);
        dir.normalize();
        v = std::acos(std::clamp(dir.z(), -1.0, 1.0));
        u = std::atan2(dir.y(), dir.x());
        break;
      }
      case SurfaceKind::HyperbolicParaboloid:
      case SurfaceKind::Plane: {
        const double extent =
            spec.kind == SurfaceKind::Plane ? spec.p0 : spec.p2;
        u = extent * (2.0 * unit(rng) - 1.0);
        v = extent * (2.0 * unit(rng) - 1.0);
        break;
      }
    }
    GroundTruthPoint& pt = points[i];
    pt.position = surface_point(spec, u, v);
    const CurvatureTruth truth = analytic_curvature(spec, u, v);
    pt.gauss = truth.gauss;
    pt.mean = truth.mean;
    pt.normal = truth.normal;
    pt.noisy_position = pt.position;
  }
  return points;
}

/// Corrupt positions with isotropic Gaussian noise of per-coordinate standard
/// deviation sigma. Ground-truth fields keep the clean point's values;
/// sigma = 0 leaves positions bit-identical.
inline void add_noise(std::vector<GroundTruthPoint>& points, double sigma,
                      std::uint64_t seed) {
  if (!(sigma >= 0.0)) fail(Errc::InvalidArgument, "add_noise: sigma must be >= 0");
  if (sigma == 0.0) {
    for (GroundTruthPoint& pt : points) pt.noisy_position = pt.position;
    return;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::mt19937_64 rng = detail::point_rng(seed, detail::kNoiseStream, i);
    std::normal_distribution<double> gauss(0.0, sigma);
    const Point3 eps(gauss(rng), gauss(rng), gauss(rng));
    points[i].noisy_position = points[i].position + eps;
  }
}

}  // namespace adacurv
