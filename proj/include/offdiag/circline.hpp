#pragma once

// Geometry of finite point sets in the plane: is the set contained in a
// line or a circle ("circlinear"), the resulting decomposition
// T = lambda I + mu A of a normal matrix, and containment of unimodular
// points in a closed half-circle.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "offdiag/linalg.hpp"

namespace offdiag {

enum class CirclineKind { Line, Circle, None };

struct Circline {
  struct LineParams {
    cplx anchor;     // foot of the perpendicular from the origin
    cplx direction;  // unimodular; Re > 0, or Re == 0 and Im > 0
  };
  struct CircleParams {
    cplx center;
    double radius = 0.0;
  };

  CirclineKind kind = CirclineKind::None;
  LineParams line{};
  CircleParams circle{};
  double max_residual = 0.0;  // absolute distance of the worst point
  double threshold = 0.0;     // absolute acceptance threshold tol_geom * diameter

  /// Distance from z to the fitted curve; +inf for None.
  double distance(cplx z) const {
    switch (kind) {
      case CirclineKind::Line: return std::abs((std::conj(line.direction) * (z - line.anchor)).imag());
      case CirclineKind::Circle: return std::abs(std::abs(z - circle.center) - circle.radius);
      case CirclineKind::None: break;
    }
    return std::numeric_limits<double>::infinity();
  }
};

/// Largest pairwise distance.
inline double diameter(std::span<const cplx> points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, std::abs(points[i] - points[j]));
  }
  return d;
}

/// Points with near-duplicates (within rel * diameter) removed; first
/// occurrence wins.
inline std::vector<cplx> distinct_points(std::span<const cplx> points, double rel = 1e-9) {
  const double cluster = rel * diameter(points);
  std::vector<cplx> out;
  for (const cplx& p : points) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const cplx& q) { return std::abs(p - q) <= cluster; });
    if (!seen) out.push_back(p);
  }
  return out;
}

namespace detail {

inline cplx canonical_direction(cplx u) {
  u /= std::abs(u);
  if (std::abs(u.real()) < 1e-12) return {0.0, u.imag() >= 0 ? 1.0 : -1.0};
  return u.real() > 0 ? u : -u;
}

inline Circline fit_line(std::span<const cplx> pts, double threshold) {
  cplx centroid{0.0};
  for (const cplx& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  // Principal axis of centered 2D points: half the argument of sum q^2.
  cplx second{0.0};
  for (const cplx& p : pts) second += (p - centroid) * (p - centroid);
  cplx u = std::abs(second) > 0.0 ? std::polar(1.0, std::arg(second) / 2.0) : cplx{1.0};
  u = canonical_direction(u);

  Circline c;
  c.kind = CirclineKind::Line;
  c.line.direction = u;
  c.line.anchor = cplx{0.0, 1.0} * u * (std::conj(u) * centroid).imag();
  c.threshold = threshold;
  for (const cplx& p : pts) c.max_residual = std::max(c.max_residual, c.distance(p));
  return c;
}

/// Algebraic least squares on x^2 + y^2 + Dx + Ey + F = 0, in coordinates
/// centered at the centroid and scaled by the diameter.
inline std::optional<Circline> fit_circle(std::span<const cplx> pts, double scale, double threshold) {
  cplx centroid{0.0};
  for (const cplx& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());

  const Index m = static_cast<Index>(pts.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for (Index i = 0; i < m; ++i) {
    const cplx q = (pts[static_cast<std::size_t>(i)] - centroid) / scale;
    design(i, 0) = q.real();
    design(i, 1) = q.imag();
    design(i, 2) = 1.0;
    rhs(i) = -std::norm(q);
  }
  const Eigen::Vector3d sol = design.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  const cplx center_n{-sol(0) / 2.0, -sol(1) / 2.0};
  const double r2 = std::norm(center_n) - sol(2);
  if (!(r2 > 0.0) || !std::isfinite(r2)) return std::nullopt;

  Circline c;
  c.kind = CirclineKind::Circle;
  c.circle.center = centroid + scale * center_n;
  c.circle.radius = scale * std::sqrt(r2);
  c.threshold = threshold;
  for (const cplx& p : pts) c.max_residual = std::max(c.max_residual, c.distance(p));
  return c;
}

}  // namespace detail

/// Fits a line or circle through the distinct points. Up to three distinct
/// points always fit (a line when collinear); for more, a line is tried
/// first and wins ties, then a circle; otherwise kind = None.
inline Circline fit_circline(std::span<const cplx> points, double tol_geom = Tolerances{}.tol_geom) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "fit_circline: no points");
  for (const cplx& p : points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) throw Error(ErrorCode::NonFinite, "fit_circline");
  }
  const std::vector<cplx> pts = distinct_points(points);
  const double scale = diameter(pts);
  const double threshold = tol_geom * scale;

  if (pts.size() == 1) {
    Circline c;
    c.kind = CirclineKind::Line;
    c.line = {pts.front(), cplx{1.0}};
    c.threshold = threshold;
    return c;
  }

  const Circline line = detail::fit_line(pts, threshold);
  if (pts.size() == 2 || line.max_residual <= threshold) return line;

  const std::optional<Circline> circle = detail::fit_circle(pts, scale, threshold);
  if (circle && (pts.size() == 3 || circle->max_residual <= threshold)) return *circle;

  Circline none;
  none.kind = CirclineKind::None;
  none.threshold = threshold;
  none.max_residual = circle ? std::min(line.max_residual, circle->max_residual) : line.max_residual;
  return none;
}

enum class CanonicalKind { Hermitian, Unitary };

/// T = lambda I + mu A with A Hermitian (collinear spectrum) or unitary
/// (concyclic spectrum).
struct CanonicalForm {
  cplx lambda;
  cplx mu;
  CanonicalKind kind = CanonicalKind::Hermitian;
  CMatrix a;
  double reconstruction_residual = 0.0;  // ||T - (lambda I + mu A)||
};

inline CanonicalForm canonical_decomposition(const CMatrix& t, const Tolerances& tols = {}) {
  if (!is_normal(t, tols)) throw Error(ErrorCode::NotNormal, "canonical_decomposition");
  const SpectralDecomposition sd = eig_normal(t, tols);
  const Circline fit = fit_circline(sd.eigenvalues, tols.tol_geom);
  if (fit.kind == CirclineKind::None) {
    throw Error(ErrorCode::NotCirclinear, "canonical_decomposition: spectrum is neither collinear nor concyclic");
  }

  const Index n = t.rows();
  CVector values(n);
  CanonicalForm out;
  if (fit.kind == CirclineKind::Line) {
    out.kind = CanonicalKind::Hermitian;
    out.lambda = fit.line.anchor;
    out.mu = fit.line.direction;
    for (Index i = 0; i < n; ++i) {
      const cplx z = sd.eigenvalues[static_cast<std::size_t>(i)];
      values(i) = (std::conj(out.mu) * (z - out.lambda)).real();
    }
  } else {
    out.kind = CanonicalKind::Unitary;
    out.lambda = fit.circle.center;
    out.mu = fit.circle.radius;
    for (Index i = 0; i < n; ++i) {
      const cplx w = (sd.eigenvalues[static_cast<std::size_t>(i)] - out.lambda) / out.mu;
      values(i) = w / std::abs(w);  // projected onto the unit circle
    }
  }
  const CMatrix& f = sd.eigenframe.columns();
  out.a = f * values.asDiagonal() * f.adjoint();
  if (out.kind == CanonicalKind::Hermitian) out.a = (out.a + out.a.adjoint()) / 2.0;
  out.reconstruction_residual = operator_norm(t - (out.lambda * CMatrix::Identity(n, n) + out.mu * out.a));
  return out;
}

struct HalfCircleResult {
  bool contained = false;
  std::optional<cplx> witness_mu;  // all points satisfy Re(z / mu) >= 0
};

/// Is there a closed half-circle {mu z : |z| = 1, Re z >= 0} holding all
/// points? Equivalent to the largest circular gap between consecutive
/// arguments being at least pi (boundary accepted to 1e-9).
inline HalfCircleResult half_circle_containment(std::span<const cplx> points) {
  std::vector<double> angles;
  angles.reserve(points.size());
  for (const cplx& p : points) {
    if (!(std::abs(std::abs(p) - 1.0) <= 1e-9)) {
      throw Error(ErrorCode::NotUnimodular, "half_circle_containment: point off the unit circle");
    }
    angles.push_back(std::arg(p));
  }
  if (angles.empty()) return {true, cplx{1.0}};
  std::sort(angles.begin(), angles.end());

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const std::size_t m = angles.size();
  double best_gap = angles.front() + two_pi - angles.back();
  std::size_t after_gap = 0;  // index of the first point following the widest gap
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double gap = angles[i + 1] - angles[i];
    if (gap > best_gap) {
      best_gap = gap;
      after_gap = i + 1;
    }
  }
  if (best_gap < std::numbers::pi - 1e-9) return {false, std::nullopt};
  const double mid = angles[after_gap] + (two_pi - best_gap) / 2.0;
  return {true, std::polar(1.0, mid)};
}

}  // namespace offdiag
