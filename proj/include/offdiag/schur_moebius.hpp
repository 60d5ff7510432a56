#pragma once

// Schur complements and block-inverse identities, plus Moebius maps
// z -> (az + b)/(cz + d) applied to normal matrices through the spectral
// decomposition or directly as (aT + bI)(cT + dI)^-1.

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "offdiag/corners.hpp"
#include "offdiag/linalg.hpp"

namespace offdiag {

/// T = [[a, b], [c, d]] with a of size k x k.
struct BlockPartition {
  CMatrix a, b, c, d;
  Index k = 0;

  static BlockPartition split(const CMatrix& t, Index k) {
    require_square(t, "BlockPartition");
    const Index n = t.rows();
    if (k < 1 || k >= n) throw Error(ErrorCode::InvalidArgument, "BlockPartition: need 1 <= k < n");
    return {t.topLeftCorner(k, k), t.topRightCorner(k, n - k), t.bottomLeftCorner(n - k, k),
            t.bottomRightCorner(n - k, n - k), k};
  }

  CMatrix assemble() const {
    CMatrix t(a.rows() + c.rows(), a.cols() + b.cols());
    t << a, b, c, d;
    return t;
  }
};

enum class Pivot { NW, NE, SW, SE };

namespace detail {

inline constexpr double kPivotRelTol = 1e-10;

inline CMatrix invert_or(const CMatrix& m, ErrorCode code, const char* what) {
  if (!is_invertible(m, kPivotRelTol)) throw Error(code, what);
  return m.partialPivLu().inverse();
}

inline double relative_residual(const CMatrix& reference, const CMatrix& candidate) {
  const double diff = operator_norm(reference - candidate);
  const double scale = operator_norm(reference);
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace detail

/// NW: D - C A^-1 B.  NE: C - D B^-1 A.  SW: B - A C^-1 D.  SE: A - B D^-1 C.
/// When T is invertible the inverse of the result is, respectively, the
/// SE, NE, SW and NW block of T^-1.
inline CMatrix schur_complement(const BlockPartition& p, Pivot pivot) {
  auto pivot_inverse = [](const CMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::PivotNotSquare, "schur_complement: pivot block not square");
    return detail::invert_or(m, ErrorCode::PivotSingular, "schur_complement: pivot block is singular");
  };
  switch (pivot) {
    case Pivot::NW: return p.d - p.c * pivot_inverse(p.a) * p.b;
    case Pivot::NE: return p.c - p.d * pivot_inverse(p.b) * p.a;
    case Pivot::SW: return p.b - p.a * pivot_inverse(p.c) * p.d;
    case Pivot::SE: return p.a - p.b * pivot_inverse(p.d) * p.c;
  }
  throw Error(ErrorCode::InvalidArgument, "schur_complement: unknown pivot");
}

/// Largest normalized residual between blocks of T^-1 (computed directly)
/// and their Schur-complement expressions.
inline double verify_block_inverse(const CMatrix& t, Index k) {
  require_square(t, "verify_block_inverse");
  require_finite(t, "verify_block_inverse");
  const BlockPartition p = BlockPartition::split(t, k);
  const Index n = t.rows();
  const CMatrix t_inv = detail::invert_or(t, ErrorCode::Singular, "verify_block_inverse: T is singular");
  const CMatrix a_inv = detail::invert_or(p.a, ErrorCode::Singular, "verify_block_inverse: A is singular");
  const CMatrix s = schur_complement(p, Pivot::NW);
  const CMatrix s_inv = detail::invert_or(s, ErrorCode::Singular, "verify_block_inverse: T|A is singular");

  const CMatrix ne = t_inv.topRightCorner(k, n - k);
  const CMatrix sw = t_inv.bottomLeftCorner(n - k, k);
  const CMatrix se = t_inv.bottomRightCorner(n - k, n - k);

  double worst = detail::relative_residual(se, s_inv);
  worst = std::max(worst, detail::relative_residual(sw, -s_inv * p.c * a_inv));
  worst = std::max(worst, detail::relative_residual(ne, -a_inv * p.b * s_inv));
  if (2 * k == n && is_invertible(p.b, detail::kPivotRelTol)) {
    const CMatrix s_b = schur_complement(p, Pivot::NE);
    const CMatrix s_b_inv = detail::invert_or(s_b, ErrorCode::Singular, "verify_block_inverse: T|B is singular");
    worst = std::max(worst, detail::relative_residual(ne, s_b_inv));
  }
  return worst;
}

/// z -> (az + b)/(cz + d), normalized so the largest-modulus coefficient
/// equals 1 (ties resolved in the order a, b, c, d).
class MoebiusMap {
 public:
  static MoebiusMap make(cplx a, cplx b, cplx c, cplx d) {
    const std::array<cplx, 4> coef{a, b, c, d};
    std::size_t lead = 0;
    for (std::size_t i = 1; i < coef.size(); ++i) {
      if (std::abs(coef[i]) > std::abs(coef[lead])) lead = i;
    }
    const cplx s = coef[lead];
    if (!(std::abs(s) > 0.0) || !std::isfinite(std::abs(s))) {
      throw Error(ErrorCode::InvalidArgument, "MoebiusMap: coefficients must be finite and not all zero");
    }
    MoebiusMap m(a / s, b / s, c / s, d / s);
    if (!(std::abs(m.determinant()) > 1e-12)) {
      throw Error(ErrorCode::InvalidArgument, "MoebiusMap: ad - bc vanishes");
    }
    return m;
  }

  static MoebiusMap identity() { return MoebiusMap(1.0, 0.0, 0.0, 1.0); }

  cplx a() const noexcept { return a_; }
  cplx b() const noexcept { return b_; }
  cplx c() const noexcept { return c_; }
  cplx d() const noexcept { return d_; }
  cplx determinant() const { return a_ * d_ - b_ * c_; }

  /// |cz + d| is not within 1e-10 (relative) of zero.
  bool finite_at(cplx z) const {
    return std::abs(c_ * z + d_) > 1e-10 * (std::abs(c_) * std::abs(z) + std::abs(d_));
  }

  cplx operator()(cplx z) const { return (a_ * z + b_) / (c_ * z + d_); }

  MoebiusMap inverse() const { return make(d_, -b_, -c_, a_); }

  /// (*this) o inner
  MoebiusMap compose(const MoebiusMap& inner) const {
    return make(a_ * inner.a_ + b_ * inner.c_, a_ * inner.b_ + b_ * inner.d_, c_ * inner.a_ + d_ * inner.c_,
                c_ * inner.b_ + d_ * inner.d_);
  }

 private:
  MoebiusMap(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d) {}
  cplx a_, b_, c_, d_;
};

namespace detail {

inline void require_distinct(const std::array<cplx, 3>& p, const char* what) {
  double scale = 1.0;
  for (const cplx& z : p) scale = std::max(scale, std::abs(z));
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag())) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": non-finite point");
    }
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (std::abs(p[i] - p[j]) <= 1e-12 * scale) {
        throw Error(ErrorCode::CoincidentPoints, std::string(what) + ": points must be pairwise distinct");
      }
    }
  }
}

/// The map sending (p0, p1, p2) to (0, 1, infinity).
inline MoebiusMap to_zero_one_infinity(const std::array<cplx, 3>& p) {
  const cplx u = p[1] - p[2];
  const cplx v = p[1] - p[0];
  return MoebiusMap::make(u, -p[0] * u, v, -p[2] * v);
}

}  // namespace detail

/// The unique Moebius map with M(z_i) = w_i, i = 0, 1, 2.
inline MoebiusMap moebius_three_point(const std::array<cplx, 3>& z, const std::array<cplx, 3>& w) {
  detail::require_distinct(z, "moebius_three_point (sources)");
  detail::require_distinct(w, "moebius_three_point (targets)");
  return detail::to_zero_one_infinity(w).inverse().compose(detail::to_zero_one_infinity(z));
}

/// M(T) = U diag(M(lambda_i)) U^* for normal T.
inline CMatrix moebius_apply_spectral(const CMatrix& t, const MoebiusMap& m, const Tolerances& tols = {}) {
  if (!is_normal(t, tols)) throw Error(ErrorCode::NotNormal, "moebius_apply_spectral");
  const SpectralDecomposition sd = eig_normal(t, tols);
  CVector image(static_cast<Index>(sd.eigenvalues.size()));
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    if (!m.finite_at(sd.eigenvalues[i])) {
      throw Error(ErrorCode::PoleOnSpectrum, "moebius_apply_spectral: map has a pole on the spectrum");
    }
    image(static_cast<Index>(i)) = m(sd.eigenvalues[i]);
  }
  const CMatrix& u = sd.eigenframe.columns();
  return u * image.asDiagonal() * u.adjoint();
}

/// M(T) = (cT + dI)^-1 (aT + bI); the two factors commute.
inline CMatrix moebius_apply_direct(const CMatrix& t, const MoebiusMap& m) {
  require_square(t, "moebius_apply_direct");
  const Index n = t.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix numerator = m.a() * t + m.b() * id;
  if (m.c() == cplx{0.0}) return numerator / m.d();
  const CMatrix denominator = m.c() * t + m.d() * id;
  if (!is_invertible(denominator, detail::kPivotRelTol)) {
    throw Error(ErrorCode::Singular, "moebius_apply_direct: cT + dI is singular");
  }
  return denominator.partialPivLu().solve(numerator);
}

/// Equal-rank / equal-norm status of the off-diagonal corners.
struct CornerStatus {
  bool ranks_equal = false;
  bool norms_equal = false;

  bool operator==(const CornerStatus&) const = default;
};

inline CornerStatus corner_status(const CMatrix& t, const Projection& p, const Tolerances& tols = {}) {
  const CornerReport r = corner_pair(t, p, tols);
  return {r.ranks_equal(), r.norm_gap() < tols.tol_gap};
}

/// For invertible normal 4x4 T split into 2x2 blocks by p: the corner
/// status of T and of T^-1 agree.
inline bool check_t1_invariance(const CMatrix& t, const Projection& p, const Tolerances& tols = {}) {
  require_square(t, "check_t1_invariance");
  if (t.rows() != 4 || p.dim() != 4 || p.rank() != 2) {
    throw Error(ErrorCode::InvalidArgument, "check_t1_invariance: needs a 4x4 operator with 2x2 blocks");
  }
  if (!is_normal(t, tols)) throw Error(ErrorCode::NotNormal, "check_t1_invariance");
  const CMatrix t_inv = detail::invert_or(t, ErrorCode::Singular, "check_t1_invariance: T is singular");
  return corner_status(t, p, tols) == corner_status(t_inv, p, tols);
}

inline bool check_t1_invariance(const CMatrix& t, Index k, const Tolerances& tols = {}) {
  require_square(t, "check_t1_invariance");
  return check_t1_invariance(t, Projection::coordinate(t.rows(), k), tols);
}

}  // namespace offdiag
