#pragma once

// Projections certifying that an operator's off-diagonal corners differ in
// rank or norm.
//
// For a normal matrix with a non-circlinear spectrum the construction is
// explicit: four eigenvalues that do not lie on a common line or circle are
// sent to {0, 1, 2, delta} by a Moebius map, and a fixed 4x4 unitary built
// from delta produces a corner pair of ranks 1 and 2. Moebius maps preserve
// this, so the same projection works for the original matrix. For
// non-normal input, the Schur triangular form gives an invariant subspace
// that is not reducing. A randomized Grassmannian search covers the rest.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "offdiag/circline.hpp"
#include "offdiag/corners.hpp"
#include "offdiag/linalg.hpp"
#include "offdiag/schur_moebius.hpp"

namespace offdiag {

/// sigma^2 + gamma^2 = 1, sigma != gamma, theta not a multiple of pi, and
/// zeta = e^{i theta} sigma^2 / gamma^2 solves zeta + 1/zeta = beta.
struct T2Parameters {
  cplx beta;
  cplx zeta;
  double sigma = 0.0;
  double gamma = 0.0;
  double theta = 0.0;

  void validate() const {
    const double s2 = sigma * sigma;
    const double g2 = gamma * gamma;
    const double from_pi = std::abs(std::remainder(theta, std::numbers::pi));
    const cplx z = std::polar(s2 / g2, theta);
    if (!(sigma > 0 && gamma > 0) || std::abs(s2 + g2 - 1.0) > 1e-12 || std::abs(sigma - gamma) <= 1e-9 ||
        from_pi <= 1e-9 || std::abs(z + 1.0 / z - beta) > 1e-9 * std::max(1.0, std::abs(beta))) {
      throw Error(ErrorCode::InvalidArgument, "T2Parameters: invariants violated");
    }
  }
};

inline T2Parameters solve_t2_parameters(cplx beta) {
  if (!(std::abs(beta.imag()) > 1e-9 * (1.0 + std::abs(beta)))) {
    throw Error(ErrorCode::BetaReal, "solve_t2_parameters: beta must be non-real");
  }
  // Roots of z^2 - beta z + 1 have product 1; keep the one outside the unit disc.
  const cplx disc = std::sqrt(beta * beta - 4.0);
  const cplx r1 = (beta + disc) / 2.0;
  const cplx r2 = (beta - disc) / 2.0;
  const cplx zeta = std::abs(r1) >= std::abs(r2) ? r1 : r2;
  const double rho = std::abs(zeta);

  T2Parameters p;
  p.beta = beta;
  p.zeta = zeta;
  p.sigma = std::sqrt(rho / (1.0 + rho));
  p.gamma = std::sqrt(1.0 / (1.0 + rho));
  p.theta = std::arg(zeta);
  p.validate();
  return p;
}

/// The 4x4 unitary W V, with
///   V = [[s, 0, g, 0], [0, g, 0, s], [g, 0, -s, 0], [0, s, 0, -g]],
///   W = 2^{-1/2} [[1, e, 0, 0], [1, -e, 0, 0], [0, 0, 1, 1], [0, 0, 1, -1]],
/// s = sigma, g = gamma, e = e^{i theta}. For T = diag(0, 1, 2, 2 - 8/(beta+6))
/// the NE block of U^* T U is singular while the SW block is not.
inline CMatrix build_t2_unitary(const T2Parameters& p) {
  p.validate();
  const double s = p.sigma;
  const double g = p.gamma;
  CMatrix v(4, 4);
  v << s, 0, g, 0,  //
      0, g, 0, s,   //
      g, 0, -s, 0,  //
      0, s, 0, -g;
  const cplx e = std::polar(1.0, p.theta);
  const double h = 1.0 / std::numbers::sqrt2;
  CMatrix w(4, 4);
  w << h, e * h, 0, 0,  //
      h, -e * h, 0, 0,  //
      0, 0, h, h,       //
      0, 0, h, -h;
  return w * v;
}

/// 4i (gamma^4 - sigma^4) sin(theta) / (beta + 6).
inline cplx t2_determinant_gap(const T2Parameters& p) {
  const double g4 = std::pow(p.gamma, 4);
  const double s4 = std::pow(p.sigma, 4);
  return cplx{0.0, 4.0} * (g4 - s4) * std::sin(p.theta) / (p.beta + 6.0);
}

enum class WitnessKind { RankGap, NormGap, Both };

struct Witness {
  Projection projection;
  Index rank_ne = 0;
  Index rank_sw = 0;
  double norm_ne = 0.0;
  double norm_sw = 0.0;
  WitnessKind kind = WitnessKind::Both;
  std::string origin;  // "moebius-t2", "schur", "search"

  double norm_gap() const { return std::abs(norm_ne - norm_sw); }
  bool has_rank_gap() const { return rank_ne != rank_sw; }
};

/// Measures the corners of t relative to p; a Witness if they differ.
inline std::optional<Witness> make_witness(const CMatrix& t, const Projection& p, const Tolerances& tols,
                                           std::string origin) {
  const CornerReport r = corner_pair(t, p, tols);
  const bool rank_gap = r.rank_ne != r.rank_sw;
  const bool norm_gap = r.norm_gap() > tols.tol_gap;
  if (!rank_gap && !norm_gap) return std::nullopt;
  const WitnessKind kind = rank_gap && norm_gap ? WitnessKind::Both
                           : rank_gap           ? WitnessKind::RankGap
                                                : WitnessKind::NormGap;
  return Witness{p, r.rank_ne, r.rank_sw, r.norm_ne, r.norm_sw, kind, std::move(origin)};
}

/// Recomputes the corners from the stored projection and checks that the
/// recorded statistics and gap still hold.
inline bool reverify(const CMatrix& t, const Witness& w, const Tolerances& tols = {}) {
  const CornerReport r = corner_pair(t, w.projection, tols);
  const double scale = std::max(1.0, std::max(r.norm_ne, r.norm_sw));
  if (r.rank_ne != w.rank_ne || r.rank_sw != w.rank_sw) return false;
  if (std::abs(r.norm_ne - w.norm_ne) > 1e-12 * scale || std::abs(r.norm_sw - w.norm_sw) > 1e-12 * scale) return false;
  const bool rank_gap = r.rank_ne != r.rank_sw;
  const bool norm_gap = r.norm_gap() > tols.tol_gap;
  switch (w.kind) {
    case WitnessKind::RankGap: return rank_gap;
    case WitnessKind::NormGap: return norm_gap;
    case WitnessKind::Both: return rank_gap && norm_gap;
  }
  return false;
}

struct T2Witness {
  CMatrix t;  // diag(0, 1, 2, delta)
  CMatrix u;
  T2Parameters params;
  Witness witness;
};

/// For T = diag(0, 1, 2, delta) with delta non-real: P = span of the first
/// two columns of the T2 unitary, giving corner ranks 1 (NE) and 2 (SW).
inline T2Witness witness_4x4(cplx delta, const Tolerances& tols = {}) {
  for (double j : {0.0, 1.0, 2.0}) {
    if (std::abs(delta - j) <= 1e-9) throw Error(ErrorCode::DeltaDegenerate, "witness_4x4: delta in {0, 1, 2}");
  }
  if (!(std::abs(delta.imag()) > 1e-9 * (1.0 + std::abs(delta)))) {
    throw Error(ErrorCode::DeltaReal, "witness_4x4: delta must be non-real");
  }
  const cplx beta = 8.0 / (2.0 - delta) - 6.0;
  const T2Parameters params = solve_t2_parameters(beta);
  const CMatrix u = build_t2_unitary(params);

  CMatrix t = CMatrix::Zero(4, 4);
  t(1, 1) = 1.0;
  t(2, 2) = 2.0;
  t(3, 3) = delta;
  const Projection p = Projection::from_frame(Frame::from_orthonormal(u.leftCols(2)));
  std::optional<Witness> w = make_witness(t, p, tols, "moebius-t2");
  if (!w || w->kind != WitnessKind::Both || w->rank_ne > 1 || w->rank_sw != 2) {
    throw Error(ErrorCode::VerificationFailed, "witness_4x4: expected corner ranks 1 and 2 with a norm gap");
  }
  return {std::move(t), u, params, std::move(*w)};
}

namespace detail {

/// Distinct eigenvalues (first of each cluster, in eig_normal order) with
/// the eigenframe column that carries each.
struct DistinctSpectrum {
  std::vector<cplx> values;
  std::vector<Index> columns;
};

inline DistinctSpectrum distinct_spectrum(const SpectralDecomposition& sd) {
  const double cluster = 1e-9 * diameter(sd.eigenvalues);
  DistinctSpectrum out;
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    const cplx z = sd.eigenvalues[i];
    const bool seen =
        std::any_of(out.values.begin(), out.values.end(), [&](const cplx& q) { return std::abs(z - q) <= cluster; });
    if (!seen) {
      out.values.push_back(z);
      out.columns.push_back(static_cast<Index>(i));
    }
  }
  return out;
}

}  // namespace detail

/// Explicit witness for a normal matrix with a non-circlinear spectrum;
/// nullopt when the spectrum is circlinear (or n <= 3, where every normal
/// matrix has equal corners).
inline std::optional<Witness> falsify_deterministic(const CMatrix& t, const Tolerances& tols = {}) {
  if (!is_normal(t, tols)) throw Error(ErrorCode::NotNormal, "falsify_deterministic");
  if (t.rows() < 4) return std::nullopt;
  const SpectralDecomposition sd = eig_normal(t, tols);
  if (fit_circline(sd.eigenvalues, tols.tol_geom).kind != CirclineKind::None) return std::nullopt;

  const detail::DistinctSpectrum spec = detail::distinct_spectrum(sd);
  const std::size_t m = spec.values.size();
  std::optional<std::array<std::size_t, 4>> chosen;
  for (std::size_t i = 0; i < m && !chosen; ++i) {
    for (std::size_t j = i + 1; j < m && !chosen; ++j) {
      for (std::size_t k = j + 1; k < m && !chosen; ++k) {
        for (std::size_t l = k + 1; l < m && !chosen; ++l) {
          const std::array<cplx, 4> quad{spec.values[i], spec.values[j], spec.values[k], spec.values[l]};
          if (fit_circline(quad, tols.tol_geom).kind == CirclineKind::None) chosen = std::array{i, j, k, l};
        }
      }
    }
  }
  if (!chosen) {
    throw Error(ErrorCode::VerificationFailed, "falsify_deterministic: no non-circlinear 4-subset found");
  }

  std::array<cplx, 4> lambda;
  CMatrix e(t.rows(), 4);
  for (std::size_t i = 0; i < 4; ++i) {
    lambda[i] = spec.values[(*chosen)[i]];
    e.col(static_cast<Index>(i)) = sd.eigenframe.columns().col(spec.columns[(*chosen)[i]]);
  }
  const MoebiusMap normalizer = moebius_three_point({lambda[0], lambda[1], lambda[2]}, {0.0, 1.0, 2.0});
  if (!normalizer.finite_at(lambda[3])) {
    throw Error(ErrorCode::VerificationFailed, "falsify_deterministic: normalizing map has a pole at the 4th point");
  }
  const cplx delta = normalizer(lambda[3]);

  // The restriction to the reducing subspace spanned by e, normalized to
  // diag(0, 1, 2, delta).
  const CMatrix restricted = e.adjoint() * t * e;
  const CMatrix normalized = moebius_apply_spectral(restricted, normalizer, tols);
  const T2Witness t2 = witness_4x4(delta, tols);

  const Projection inner = Projection::from_frame(Frame::from_orthonormal(t2.u.leftCols(2)));
  const std::optional<Witness> normalized_witness = make_witness(normalized, inner, tols, "moebius-t2");
  if (!normalized_witness || !normalized_witness->has_rank_gap()) {
    throw Error(ErrorCode::VerificationFailed, "falsify_deterministic: no rank gap after Moebius normalization");
  }

  const CMatrix range = e * t2.u.leftCols(2);
  const Projection p = Projection::from_frame(Frame::from_orthonormal(range));
  std::optional<Witness> w = make_witness(t, p, tols, "moebius-t2");
  if (!w || w->kind != WitnessKind::Both) {
    throw Error(ErrorCode::VerificationFailed,
                "falsify_deterministic: constructed projection shows no measurable rank and norm gap");
  }
  return w;
}

/// For non-normal t: the span of the leading j Schur vectors is invariant
/// (SW corner vanishes) while the NE corner is the off-diagonal Schur
/// block. j maximizes that block's norm.
inline std::optional<Witness> falsify_schur(const CMatrix& t, const Tolerances& tols = {}) {
  require_square(t, "falsify_schur");
  const Index n = t.rows();
  if (n < 2) return std::nullopt;
  Eigen::ComplexSchur<CMatrix> schur(t);
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "falsify_schur");
  const CMatrix& r = schur.matrixT();
  Index best_j = 1;
  double best = -1.0;
  for (Index j = 1; j < n; ++j) {
    const double b = operator_norm(r.topRightCorner(j, n - j));
    if (b > best) {
      best = b;
      best_j = j;
    }
  }
  const Projection p = Projection::from_frame(Frame::from_orthonormal(schur.matrixU().leftCols(best_j)));
  return make_witness(t, p, tols, "schur");
}

struct SearchBudget {
  int restarts = 32;
  int steps = 200;
};

namespace detail {

struct SearchPoint {
  double gap = 0.0;
  bool rank_gap = false;
};

inline SearchPoint evaluate_frame(const CMatrix& t, const CMatrix& q, Index k, const Tolerances& tols) {
  const Index n = q.rows();
  const CMatrix ne = q.leftCols(k).adjoint() * t * q.rightCols(n - k);
  const CMatrix sw = q.rightCols(n - k).adjoint() * t * q.leftCols(k);
  const Eigen::VectorXd s_ne = singular_values(ne);
  const Eigen::VectorXd s_sw = singular_values(sw);
  auto rank = [&](const Eigen::VectorXd& s) {
    const double cutoff = tols.tol_rank * std::max(1.0, s(0));
    return (s.array() > cutoff).count();
  };
  return {std::abs(s_ne(0) - s_sw(0)), rank(s_ne) != rank(s_sw)};
}

/// exp(i eps H) for Hermitian H.
inline CMatrix unitary_step(const CMatrix& h, double eps) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases = (cplx{0.0, eps} * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Randomized hill climb over rank-k projections maximizing
/// | ||P T P^perp|| - ||P^perp T P|| |. Each restart starts from a random
/// frame and moves it by exp(eps K) for random skew-Hermitian K; eps halves
/// whenever neither K nor -K improves (from 0.1 down to a floor of 1e-6).
/// Restart r draws from the stream Rng::derive(seed, r); the lowest restart
/// wins ties.
inline std::optional<Witness> falsify_search(const CMatrix& t, Index k, SearchBudget budget, std::uint64_t seed,
                                             const Tolerances& tols = {}) {
  require_square(t, "falsify_search");
  require_finite(t, "falsify_search");
  const Index n = t.rows();
  if (k < 1 || k >= n) throw Error(ErrorCode::InvalidArgument, "falsify_search: need 1 <= k < n");

  double best_gap = -1.0;
  CMatrix best_q;
  std::optional<CMatrix> first_rank_gap;

  for (int restart = 0; restart < budget.restarts; ++restart) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(restart)));
    const Frame start = qr_orthonormal_frame(rng.gaussian(n, k));
    CMatrix q = Projection::from_frame(start).basis();
    detail::SearchPoint current = detail::evaluate_frame(t, q, k, tols);
    if (current.rank_gap && !first_rank_gap) first_rank_gap = q;

    double eps = 0.1;
    for (int step = 0; step < budget.steps; ++step) {
      const CMatrix g = rng.gaussian(n, n);
      CMatrix h = (g + g.adjoint()) / 2.0;
      h /= h.norm();
      bool improved = false;
      for (double sign : {1.0, -1.0}) {
        const CMatrix candidate = q * detail::unitary_step(h, sign * eps);
        const detail::SearchPoint next = detail::evaluate_frame(t, candidate, k, tols);
        if (next.rank_gap && !first_rank_gap) first_rank_gap = candidate;
        if (next.gap > current.gap) {
          q = candidate;
          current = next;
          improved = true;
          break;
        }
      }
      if (!improved) eps = std::max(eps / 2.0, 1e-6);
    }
    if (current.gap > best_gap) {
      best_gap = current.gap;
      best_q = q;
    }
  }

  auto witness_from = [&](const CMatrix& q) {
    return make_witness(t, Projection::from_frame(Frame::from_orthonormal(q.leftCols(k))), tols, "search");
  };
  if (best_gap > tols.tol_gap) {
    if (auto w = witness_from(best_q)) return w;
  }
  if (first_rank_gap) return witness_from(*first_rank_gap);
  return std::nullopt;
}

}  // namespace offdiag
