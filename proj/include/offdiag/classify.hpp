#pragma once

// End-to-end decision of the common-norm (CN) and common-rank (CR)
// properties for a finite matrix, plus cyclic-subspace and numerical-range
// utilities used to check hypotheses on concrete matrices.
//
// A matrix has CN (resp. CR) when ||P T P^perp|| = ||P^perp T P|| (resp.
// the ranks agree) for every orthogonal projection P. For n <= 3 this is
// exactly normality; for n >= 4 it is normality plus a spectrum lying on
// one line or one circle.

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "offdiag/circline.hpp"
#include "offdiag/corners.hpp"
#include "offdiag/linalg.hpp"
#include "offdiag/witness.hpp"

namespace offdiag {

enum class Verdict { Holds, Fails, Unknown };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

struct ClassificationReport {
  Index n = 0;
  bool normal = false;
  std::vector<cplx> spectrum;
  Circline circline;
  Verdict verdict_cn = Verdict::Unknown;
  Verdict verdict_cr = Verdict::Unknown;
  std::optional<CanonicalForm> canonical;
  std::optional<Witness> witness;
  Tolerances tolerances;
  std::string path;  // which branch produced the verdict
};

struct ClassifyOptions {
  SearchBudget budget{};
  std::uint64_t seed = 0;
};

/// Eigenvalues of an arbitrary square matrix, descending in (Re, Im).
inline std::vector<cplx> sorted_eigenvalues(const CMatrix& t) {
  Eigen::ComplexEigenSolver<CMatrix> es(t, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "sorted_eigenvalues");
  std::vector<cplx> out(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(out.begin(), out.end(), lex_greater);
  return out;
}

inline ClassificationReport classify(const CMatrix& t, const Tolerances& tols = {}, const ClassifyOptions& opts = {}) {
  tols.validate();
  require_square(t, "classify");
  require_finite(t, "classify");
  if (t.rows() < 2) throw Error(ErrorCode::InvalidArgument, "classify: need n >= 2");

  ClassificationReport rep;
  rep.n = t.rows();
  rep.tolerances = tols;
  rep.normal = is_normal(t, tols);
  rep.spectrum = rep.normal ? eig_normal(t, tols).eigenvalues : sorted_eigenvalues(t);
  rep.circline = fit_circline(rep.spectrum, tols.tol_geom);

  auto fail_with = [&](std::optional<Witness> w, std::string path) {
    if (!w || !reverify(t, *w, tols)) {
      throw Error(ErrorCode::VerificationFailed, "classify: witness did not re-verify");
    }
    rep.witness = std::move(w);
    rep.verdict_cn = rep.verdict_cr = Verdict::Fails;
    rep.path = std::move(path);
  };

  if (!rep.normal) {
    if (auto w = falsify_schur(t, tols)) {
      fail_with(std::move(w), "non-normal:schur");
    } else if (auto s = falsify_search(t, std::max<Index>(1, rep.n / 2), opts.budget, opts.seed, tols)) {
      fail_with(std::move(s), "non-normal:search");
    } else {
      rep.verdict_cn = rep.verdict_cr = Verdict::Unknown;
      rep.path = "non-normal:no-witness";
    }
    return rep;
  }

  if (rep.n <= 3 || rep.circline.kind != CirclineKind::None) {
    rep.verdict_cn = rep.verdict_cr = Verdict::Holds;
    rep.path = rep.n <= 3 ? "normal:dim<=3" : "normal:circlinear";
    if (rep.circline.kind != CirclineKind::None) rep.canonical = canonical_decomposition(t, tols);
    return rep;
  }

  fail_with(falsify_deterministic(t, tols), "normal:moebius-t2");
  return rep;
}

struct KrylovFrame {
  CVector generator;
  Frame frame;
};

/// Orthonormal basis of span{x, Tx, T^2 x, ...}, built by Arnoldi with
/// two Gram-Schmidt passes. Stops once the new direction's residual is at
/// most 1e-10 ||T|| (basis vectors have unit norm).
inline KrylovFrame krylov_frame(const CMatrix& t, const CVector& x, const Tolerances& /*tols*/ = {}) {
  require_square(t, "krylov_frame");
  if (x.size() != t.rows()) throw Error(ErrorCode::DimensionMismatch, "krylov_frame");
  const double xn = x.norm();
  if (!(xn > 0.0)) throw Error(ErrorCode::ZeroVector, "krylov_frame: generator is zero");

  const Index n = t.rows();
  const double stop = 1e-10 * operator_norm(t);
  CMatrix basis(n, n);
  basis.col(0) = x / xn;
  Index dim = 1;
  while (dim < n) {
    CVector w = t * basis.col(dim - 1);
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(dim) * (basis.leftCols(dim).adjoint() * w);
    }
    const double r = w.norm();
    if (r <= stop) break;
    basis.col(dim) = w / r;
    ++dim;
  }
  return {x, Frame::from_orthonormal(basis.leftCols(dim))};
}

/// T and T^* generate the same cyclic subspace from x.
inline bool cyclic_invariance_check(const CMatrix& t, const CVector& x, const Tolerances& tols = {}) {
  const KrylovFrame forward = krylov_frame(t, x, tols);
  const CMatrix t_adj = t.adjoint();
  const KrylovFrame backward = krylov_frame(t_adj, x, tols);
  const CMatrix& f = forward.frame.columns();
  const CMatrix& b = backward.frame.columns();
  return operator_norm(f * f.adjoint() - b * b.adjoint()) <= 1e-8;
}

namespace detail {

/// Top eigenpair of Re(e^{-i theta} T).
inline std::pair<double, CVector> rotated_hermitian_top(const CMatrix& t, double theta) {
  const cplx rot = std::polar(1.0, -theta);
  const CMatrix h = (rot * t + std::conj(rot) * t.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Index top = h.rows() - 1;  // eigenvalues ascending
  return {es.eigenvalues()(top), es.eigenvectors().col(top)};
}

inline void require_grid(const CMatrix& t, Index m, const char* who) {
  require_square(t, who);
  if (m < 8) throw Error(ErrorCode::InvalidArgument, std::string(who) + ": need m >= 8");
  if (t.rows() == 0) throw Error(ErrorCode::InvalidArgument, std::string(who) + ": empty matrix");
}

}  // namespace detail

/// Points <T v, v> of the numerical range at m equally spaced support
/// directions; their convex hull approximates W(T) from inside.
inline std::vector<cplx> numerical_range_boundary(const CMatrix& t, Index m = 720) {
  detail::require_grid(t, m, "numerical_range_boundary");
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    const CVector v = detail::rotated_hermitian_top(t, theta).second;
    pts.push_back(v.dot(t * v));  // Eigen's dot conjugates the left operand
  }
  return pts;
}

inline double numerical_radius(const CMatrix& t, Index m = 720) {
  detail::require_grid(t, m, "numerical_radius");
  double w = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    w = std::max(w, detail::rotated_hermitian_top(t, theta).first);
  }
  return w;
}

}  // namespace offdiag
