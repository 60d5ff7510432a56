#pragma once

// Seeded random instance generators and the identity-check suites run by
// `offdiag check`. Instance i of a suite draws from Rng::derive(seed, i), so
// any violation can be replayed from (seed, i) alone.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <optional>
#include <string>
#include <vector>

#include "offdiag/circline.hpp"
#include "offdiag/corners.hpp"
#include "offdiag/linalg.hpp"
#include "offdiag/schur_moebius.hpp"

namespace offdiag {

namespace gen {

inline std::vector<cplx> gaussian_spectrum(Index n, Rng& rng) {
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (cplx& z : out) z = rng.complex_normal();
  return out;
}

/// n points p + u t_i on a random line.
inline std::vector<cplx> line_spectrum(Index n, Rng& rng) {
  const cplx anchor = rng.complex_normal();
  const cplx dir = rng.unimodular();
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (cplx& z : out) z = anchor + dir * (2.0 * rng.normal());
  return out;
}

/// n points c + r e^{i phi_i} on a random circle.
inline std::vector<cplx> circle_spectrum(Index n, Rng& rng) {
  const cplx center = rng.complex_normal();
  const double radius = rng.uniform(0.5, 3.0);
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (cplx& z : out) z = center + radius * rng.unimodular();
  return out;
}

/// Gaussian points, redrawn until they are clearly not circlinear (best
/// fit residual above 1e-3 of the diameter).
inline std::vector<cplx> non_circlinear_spectrum(Index n, Rng& rng) {
  if (n < 4) throw Error(ErrorCode::InvalidArgument, "non_circlinear_spectrum: need n >= 4");
  for (;;) {
    std::vector<cplx> pts = gaussian_spectrum(n, rng);
    const Circline fit = fit_circline(pts, 1e-3);
    if (fit.kind == CirclineKind::None) return pts;
  }
}

inline Frame random_frame(Index n, Index k, Rng& rng) { return qr_orthonormal_frame(rng.gaussian(n, k)); }

inline Projection random_projection(Index n, Index k, Rng& rng) {
  return Projection::from_frame(random_frame(n, k, rng));
}

inline Projection random_projection(Index n, Rng& rng) { return random_projection(n, rng.uniform_int(1, n - 1), rng); }

inline MoebiusMap random_moebius(Rng& rng) {
  for (;;) {
    const cplx a = rng.complex_normal(), b = rng.complex_normal(), c = rng.complex_normal(), d = rng.complex_normal();
    if (std::abs(a * d - b * c) > 1e-3 * std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)})) {
      return MoebiusMap::make(a, b, c, d);
    }
  }
}

/// Relative distance of the spectrum from the map's pole.
inline double pole_clearance(const MoebiusMap& m, std::span<const cplx> spectrum) {
  double clearance = std::numeric_limits<double>::infinity();
  for (const cplx& z : spectrum) {
    clearance = std::min(clearance, std::abs(m.c() * z + m.d()) / (std::abs(m.c()) * std::abs(z) + std::abs(m.d())));
  }
  return clearance;
}

/// Complex Gaussian matrix conditioned so that both T and its leading
/// k x k block have condition number below 1e4.
inline CMatrix random_invertible(Index n, Index k, Rng& rng) {
  auto condition = [](const CMatrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    return s(0) / s(s.size() - 1);
  };
  for (;;) {
    CMatrix t = rng.gaussian(n, n);
    if (condition(t) < 1e4 && condition(t.topLeftCorner(k, k)) < 1e4) return t;
  }
}

}  // namespace gen

struct SuiteViolation {
  Index instance = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  Index instances = 0;
  double max_residual = 0.0;
  double tolerance = 1e-9;
  std::optional<SuiteViolation> violation;

  bool passed() const { return !violation && max_residual <= tolerance; }
};

namespace detail {

template <class Body>
SuiteResult run_suite(std::string name, Index instances, std::uint64_t seed, double tolerance, Body body) {
  SuiteResult result{std::move(name), instances, 0.0, tolerance, std::nullopt};
  for (Index i = 0; i < instances; ++i) {
    const std::uint64_t s = Rng::derive(seed, static_cast<std::uint64_t>(i));
    Rng rng(s);
    std::string detail;
    const double residual = body(rng, detail);
    result.max_residual = std::max(result.max_residual, residual);
    if ((residual > tolerance || !detail.empty()) && !result.violation) {
      if (detail.empty()) detail = "residual " + std::to_string(residual);
      result.violation = SuiteViolation{i, s, detail};
    }
  }
  return result;
}

}  // namespace detail

/// Block-inverse identities on random invertible matrices, 2 <= n <= 16.
inline SuiteResult run_schur_suite(Index instances, std::uint64_t seed) {
  return detail::run_suite("schur", instances, seed, 1e-9, [](Rng& rng, std::string&) {
    const Index n = rng.uniform_int(2, 16);
    const Index k = rng.uniform_int(1, n - 1);
    return verify_block_inverse(gen::random_invertible(n, k, rng), k);
  });
}

/// Spectral vs direct Moebius evaluation on random normal matrices, and
/// three-point interpolation.
inline SuiteResult run_moebius_suite(Index instances, std::uint64_t seed) {
  return detail::run_suite("moebius", instances, seed, 1e-9, [](Rng& rng, std::string&) {
    const Index n = rng.uniform_int(2, 8);
    const std::vector<cplx> spectrum = gen::gaussian_spectrum(n, rng);
    const CMatrix t = random_normal(n, spectrum, rng);
    MoebiusMap m = gen::random_moebius(rng);
    while (gen::pole_clearance(m, spectrum) < 1e-2) m = gen::random_moebius(rng);
    const CMatrix spectral = moebius_apply_spectral(t, m);
    const CMatrix direct = moebius_apply_direct(t, m);
    double worst = operator_norm(spectral - direct) / std::max(1.0, operator_norm(spectral));

    const std::array<cplx, 3> z{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
    const std::array<cplx, 3> w{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
    const MoebiusMap fit = moebius_three_point(z, w);
    for (std::size_t i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(fit(z[i]) - w[i]) / std::max(1.0, std::abs(w[i])));
    }
    return worst;
  });
}

/// Corner equalities: unitaries (norms, ranks, row/column identities) and
/// normal matrices (Hilbert-Schmidt norms).
inline SuiteResult run_corners_suite(Index instances, std::uint64_t seed) {
  return detail::run_suite("corners", instances, seed, 1e-9, [](Rng& rng, std::string& detail) {
    const Index n = rng.uniform_int(2, 16);
    const CMatrix u = random_unitary(n, rng);
    const Projection p = gen::random_projection(n, rng);
    const CornerReport r = corner_pair(u, p);
    if (r.rank_ne != r.rank_sw) {
      detail = "unitary corner ranks differ: " + std::to_string(r.rank_ne) + " vs " + std::to_string(r.rank_sw);
    }
    double worst = std::max(r.norm_gap(), check_unitary_corner_identity(u, p));

    const CMatrix t = random_normal(n, gen::gaussian_spectrum(n, rng), rng);
    const CornerReport rt = corner_pair(t, gen::random_projection(n, rng));
    worst = std::max(worst, std::abs(rt.hs_ne - rt.hs_sw) / std::max(1.0, operator_norm(t)));
    return worst;
  });
}

}  // namespace offdiag
