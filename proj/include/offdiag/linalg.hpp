#pragma once

// Dense complex linear algebra used by every other header: norms, singular
// values, numerical rank, normality, spectral decomposition of normal
// matrices, orthonormal frames and seeded random generators.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "offdiag/error.hpp"

namespace offdiag {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical thresholds shared by all decisions. All values must be > 0.
struct Tolerances {
  double tol_normal = 1e-10;  // relative to ||T||^2
  double tol_rank = 1e-8;     // relative to max(1, ||M||)
  double tol_geom = 1e-8;     // relative to point-set diameter
  double tol_gap = 1e-6;      // absolute

  void validate() const {
    if (!(tol_normal > 0 && tol_rank > 0 && tol_geom > 0 && tol_gap > 0)) {
      throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
    }
  }
};

inline bool all_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

inline void require_finite(const CMatrix& m, const char* who) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, std::string(who) + ": matrix has NaN/Inf entries");
}

inline void require_square(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare, std::string(who) + ": expected a square matrix, got " +
                                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

/// Singular values in descending order; length min(rows, cols).
inline Eigen::VectorXd singular_values(const CMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd(0);
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();  // Eigen already sorts them descending
}

inline double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

inline double frobenius_norm(const CMatrix& m) { return m.norm(); }

/// Number of singular values above tol_rank * max(1, ||M||).
inline Index numerical_rank(const CMatrix& m, const Tolerances& tols = {}) {
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0) return 0;
  const double cutoff = tols.tol_rank * std::max(1.0, sv(0));
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

/// Smallest singular value exceeds rel * ||M|| (and M is nonzero square).
inline bool is_invertible(const CMatrix& m, double rel = 1e-10) {
  if (m.rows() != m.cols() || m.size() == 0) return false;
  const Eigen::VectorXd sv = singular_values(m);
  return sv(0) > 0.0 && sv(sv.size() - 1) > rel * sv(0);
}

inline double unitarity_defect(const CMatrix& u) {
  return operator_norm(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

inline bool is_normal(const CMatrix& t, const Tolerances& tols = {}) {
  require_square(t, "is_normal");
  const double norm = operator_norm(t);
  if (norm == 0.0) return true;
  const CMatrix commutator = t * t.adjoint() - t.adjoint() * t;
  return operator_norm(commutator) <= tols.tol_normal * norm * norm;
}

/// Orthonormal k-frame in C^n; the columns satisfy F^* F = I_k to 1e-12.
class Frame {
 public:
  static constexpr double kOrthonormalityTol = 1e-12;

  static Frame from_orthonormal(CMatrix columns) {
    require_finite(columns, "Frame");
    const Index k = columns.cols();
    if (k < 1 || k > columns.rows()) {
      throw Error(ErrorCode::InvalidArgument, "Frame: need 1 <= k <= ambient dimension");
    }
    const CMatrix gram = columns.adjoint() * columns - CMatrix::Identity(k, k);
    if (gram.cwiseAbs().maxCoeff() > kOrthonormalityTol) {
      throw Error(ErrorCode::InvalidArgument, "Frame: columns are not orthonormal");
    }
    return Frame(std::move(columns));
  }

  const CMatrix& columns() const noexcept { return columns_; }
  Index ambient_dim() const noexcept { return columns_.rows(); }
  Index k() const noexcept { return columns_.cols(); }

 private:
  explicit Frame(CMatrix columns) : columns_(std::move(columns)) {}
  CMatrix columns_;
};

/// Orthonormal basis of the column space of a full-column-rank matrix.
/// The triangular factor is normalized to a positive diagonal, so the
/// result is unique.
inline Frame qr_orthonormal_frame(const CMatrix& a) {
  require_finite(a, "qr_orthonormal_frame");
  if (a.cols() < 1 || a.cols() > a.rows()) {
    throw Error(ErrorCode::RankDeficient, "qr_orthonormal_frame: need 1 <= cols <= rows");
  }
  const Eigen::VectorXd sv = singular_values(a);
  if (!(sv(0) > 0.0) || sv(sv.size() - 1) <= 1e-12 * sv(0)) {
    throw Error(ErrorCode::RankDeficient, "qr_orthonormal_frame: columns are linearly dependent");
  }
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(a.rows(), a.cols());
  const CMatrix& r = qr.matrixQR();
  for (Index j = 0; j < a.cols(); ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return Frame::from_orthonormal(std::move(q));
}

/// Eigenvalues and a unitary eigenframe of a normal matrix.
struct SpectralDecomposition {
  std::vector<cplx> eigenvalues;
  Frame eigenframe;

  CMatrix diagonal() const {
    CVector d(static_cast<Index>(eigenvalues.size()));
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) d(static_cast<Index>(i)) = eigenvalues[i];
    return d.asDiagonal();
  }
};

/// Descending lexicographic order on (real, imag).
inline bool lex_greater(const cplx& x, const cplx& y) {
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

inline SpectralDecomposition eig_normal(const CMatrix& t, const Tolerances& tols = {}) {
  require_square(t, "eig_normal");
  require_finite(t, "eig_normal");
  if (t.rows() == 0) throw Error(ErrorCode::InvalidArgument, "eig_normal: empty matrix");
  if (!is_normal(t, tols)) throw Error(ErrorCode::NotNormal, "eig_normal: matrix is not normal");

  // For a normal matrix the complex Schur form is diagonal.
  Eigen::ComplexSchur<CMatrix> schur(t);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "eig_normal: Schur iteration did not converge");
  }
  const CMatrix& r = schur.matrixT();
  const CMatrix& q = schur.matrixU();
  const Index n = t.rows();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return lex_greater(r(i, i), r(j, j)); });

  std::vector<cplx> values;
  values.reserve(order.size());
  CMatrix frame(n, n);
  for (Index c = 0; c < n; ++c) {
    const Index src = order[static_cast<std::size_t>(c)];
    values.push_back(r(src, src));
    frame.col(c) = q.col(src);
  }
  SpectralDecomposition out{std::move(values), Frame::from_orthonormal(std::move(frame))};

  const double norm = operator_norm(t);
  const CMatrix residual = t * out.eigenframe.columns() - out.eigenframe.columns() * out.diagonal();
  if (residual.cwiseAbs().maxCoeff() > 1e-10 * norm) {
    throw Error(ErrorCode::NoConvergence, "eig_normal: Schur form is not diagonal to tolerance");
  }
  return out;
}

/// Seeded random source. Each instance owns its engine; there is no global state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream index for (seed, stream), via splitmix64.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  Index uniform_int(Index lo, Index hi) {  // inclusive
    return std::uniform_int_distribution<Index>(lo, hi)(engine_);
  }
  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }
  cplx unimodular() { return std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi)); }

  CMatrix gaussian(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    }
    return m;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix, with the
/// phases of R's diagonal folded back into Q.
inline CMatrix random_unitary(Index n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "random_unitary: n must be >= 1");
  const CMatrix z = rng.gaussian(n, n);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline CMatrix random_unitary(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(n, rng);
}

inline CMatrix random_normal(Index n, std::span<const cplx> spectrum, Rng& rng) {
  if (n < 1 || static_cast<Index>(spectrum.size()) != n) {
    throw Error(ErrorCode::InvalidArgument, "random_normal: spectrum length must equal n >= 1");
  }
  CVector d(n);
  for (Index i = 0; i < n; ++i) d(i) = spectrum[static_cast<std::size_t>(i)];
  if (n == 1) return d;  // the 1x1 case is exactly [[c]]
  const CMatrix u = random_unitary(n, rng);
  return u * d.asDiagonal() * u.adjoint();
}

inline CMatrix random_normal(Index n, std::span<const cplx> spectrum, std::uint64_t seed) {
  Rng rng(seed);
  return random_normal(n, spectrum, rng);
}

inline CMatrix random_hermitian(Index n, Rng& rng) {
  const CMatrix g = rng.gaussian(n, n);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace offdiag
