#pragma once

// Off-diagonal corners of an operator relative to an orthogonal projection.
//
// With C^n = ran P (+) ran P^perp and T = [[A, B], [C, D]] in that
// decomposition, "ne" is B = P T P^perp and "sw" is C = P^perp T P, both
// stored as rectangular compressions in the frame bases.

#include <cmath>
#include <string>

#include "offdiag/linalg.hpp"

namespace offdiag {

class Projection {
 public:
  /// Completes the frame to a unitary; the complement is the tail of a
  /// full Householder basis rather than I - F F^*.
  static Projection from_frame(const Frame& range) {
    const Index n = range.ambient_dim();
    const Index k = range.k();
    if (k < 1 || k >= n) {
      throw Error(ErrorCode::FullOrZeroRank, "projection_from_frame: need 1 <= k < n");
    }
    Eigen::HouseholderQR<CMatrix> qr(range.columns());
    const CMatrix q = qr.householderQ();
    return Projection(range, Frame::from_orthonormal(q.rightCols(n - k)));
  }

  /// Projection onto span(e_1, ..., e_k) in C^n.
  static Projection coordinate(Index n, Index k) {
    if (k < 1 || k >= n) throw Error(ErrorCode::FullOrZeroRank, "coordinate projection: need 1 <= k < n");
    return Projection(Frame::from_orthonormal(CMatrix::Identity(n, k)),
                      Frame::from_orthonormal(CMatrix::Identity(n, n).rightCols(n - k)));
  }

  const Frame& range() const noexcept { return range_; }
  const Frame& complement() const noexcept { return complement_; }
  Index dim() const noexcept { return range_.ambient_dim(); }
  Index rank() const noexcept { return range_.k(); }

  /// P = F F^* as an n x n matrix.
  CMatrix matrix() const { return range_.columns() * range_.columns().adjoint(); }

  /// [F, F_perp], unitary.
  CMatrix basis() const {
    CMatrix u(dim(), dim());
    u << range_.columns(), complement_.columns();
    return u;
  }

 private:
  Projection(Frame range, Frame complement) : range_(std::move(range)), complement_(std::move(complement)) {}

  Frame range_;
  Frame complement_;
};

inline Projection projection_from_frame(const Frame& f) { return Projection::from_frame(f); }

struct CornerReport {
  CMatrix ne;  // k x (n-k): P T P^perp
  CMatrix sw;  // (n-k) x k: P^perp T P
  double norm_ne = 0.0;
  double norm_sw = 0.0;
  double hs_ne = 0.0;
  double hs_sw = 0.0;
  Index rank_ne = 0;
  Index rank_sw = 0;

  double norm_gap() const { return std::abs(norm_ne - norm_sw); }
  bool ranks_equal() const { return rank_ne == rank_sw; }
};

inline CornerReport corner_pair(const CMatrix& t, const Projection& p, const Tolerances& tols = {}) {
  require_square(t, "corner_pair");
  if (t.rows() != p.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "corner_pair: operator is " + std::to_string(t.rows()) +
                                                  "-dimensional, projection is " + std::to_string(p.dim()));
  }
  const CMatrix& f = p.range().columns();
  const CMatrix& g = p.complement().columns();
  CornerReport r;
  r.ne = f.adjoint() * t * g;
  r.sw = g.adjoint() * t * f;
  r.norm_ne = operator_norm(r.ne);
  r.norm_sw = operator_norm(r.sw);
  r.hs_ne = frobenius_norm(r.ne);
  r.hs_sw = frobenius_norm(r.sw);
  r.rank_ne = numerical_rank(r.ne, tols);
  r.rank_sw = numerical_rank(r.sw, tols);
  return r;
}

/// For unitary U = [[A, B], [C, D]]: max of ||BB^* - (I - AA^*)|| and
/// ||C^*C - (I - A^*A)||.
inline double check_unitary_corner_identity(const CMatrix& u, const Projection& p) {
  require_square(u, "check_unitary_corner_identity");
  if (u.rows() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "check_unitary_corner_identity");
  if (unitarity_defect(u) > 1e-10) throw Error(ErrorCode::NotUnitary, "check_unitary_corner_identity");
  const CMatrix& f = p.range().columns();
  const CMatrix& g = p.complement().columns();
  const CMatrix a = f.adjoint() * u * f;
  const CMatrix b = f.adjoint() * u * g;
  const CMatrix c = g.adjoint() * u * f;
  const CMatrix id = CMatrix::Identity(a.rows(), a.cols());
  const double row_identity = operator_norm(b * b.adjoint() - (id - a * a.adjoint()));
  const double col_identity = operator_norm(c.adjoint() * c - (id - a.adjoint() * a));
  return std::max(row_identity, col_identity);
}

/// Hilbert-Schmidt norms of the two corners of a normal operator agree.
inline bool check_hs_equality(const CMatrix& t, const Projection& p, const Tolerances& tols = {}) {
  if (!is_normal(t, tols)) throw Error(ErrorCode::NotNormal, "check_hs_equality");
  const CornerReport r = corner_pair(t, p, tols);
  const double scale = std::max(1.0, std::pow(operator_norm(t), 2));
  return std::abs(r.hs_ne * r.hs_ne - r.hs_sw * r.hs_sw) <= tols.tol_gap * scale;
}

/// Unitarily invariant quantities of a 2x2 matrix X. With the
/// Hilbert-Schmidt norm fixed, tr((X^*X)^2) = ||X||_2^4 - 2 |det X|^2 and the
/// operator norm are both determined by |det X|.
struct TwoByTwoInvariants {
  double hs = 0.0;
  double op = 0.0;
  double trace_square = 0.0;  // tr((X^*X)^2)
  double abs_det = 0.0;
};

inline TwoByTwoInvariants two_by_two_invariants(const CMatrix& x) {
  if (x.rows() != 2 || x.cols() != 2) throw Error(ErrorCode::InvalidArgument, "two_by_two_invariants: need 2x2");
  const CMatrix g = x.adjoint() * x;
  return {frobenius_norm(x), operator_norm(x), (g * g).trace().real(),
          std::abs(x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0))};
}

}  // namespace offdiag
