#include <gtest/gtest.h>

#include <numbers>

#include "offdiag/suites.hpp"
#include "offdiag/witness.hpp"

using namespace offdiag;

namespace {

cplx det2(const CMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

CMatrix t2_diag(cplx beta) {
  CVector d(4);
  d << 0.0, 1.0, 2.0, 2.0 - 8.0 / (beta + 6.0);
  return d.asDiagonal();
}

cplx random_nonreal(Rng& rng) {
  for (;;) {
    const cplx z = 3.0 * rng.complex_normal();
    if (std::abs(z.imag()) > 1e-3) return z;
  }
}

}  // namespace

TEST(T2Parameters, FromDeltaI) {
  const cplx beta = 8.0 / (2.0 - cplx{0, 1}) - 6.0;
  EXPECT_LT(std::abs(beta - cplx{-2.8, 1.6}), 1e-14);
  const T2Parameters p = solve_t2_parameters(beta);
  EXPECT_NO_THROW(p.validate());
  EXPECT_NEAR(p.sigma * p.sigma + p.gamma * p.gamma, 1.0, 1e-12);
  EXPECT_GT(std::abs(p.zeta), 1.0);
}

TEST(T2Parameters, BetaTwoI) {
  // zeta^2 - 2i zeta + 1 = 0 has roots i(1 +- sqrt 2).
  const T2Parameters p = solve_t2_parameters(cplx{0, 2});
  EXPECT_LT(std::abs(p.zeta - cplx{0, 1 + std::numbers::sqrt2}), 1e-12);
  EXPECT_NEAR(p.theta, std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(p.sigma * p.sigma / (p.gamma * p.gamma), 1 + std::numbers::sqrt2, 1e-12);
}

TEST(T2Parameters, RealBetaRejected) {
  try {
    solve_t2_parameters(5.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BetaReal);
  }
}

TEST(T2Parameters, InvariantProperty) {
  Rng rng(113);
  for (int trial = 0; trial < 10000; ++trial) {
    const cplx beta = random_nonreal(rng);
    const T2Parameters p = solve_t2_parameters(beta);
    const cplx z = std::polar(p.sigma * p.sigma / (p.gamma * p.gamma), p.theta);
    ASSERT_NEAR(p.sigma * p.sigma + p.gamma * p.gamma, 1.0, 1e-12);
    ASSERT_GT(std::abs(p.sigma - p.gamma), 1e-9);
    ASSERT_GT(std::abs(std::remainder(p.theta, std::numbers::pi)), 1e-9);
    ASSERT_LT(std::abs(z + 1.0 / z - beta), 1e-9 * std::max(1.0, std::abs(beta)));
  }
}

TEST(T2Unitary, UnitaryAndRejectsEqualWeights) {
  Rng rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix u = build_t2_unitary(solve_t2_parameters(random_nonreal(rng)));
    EXPECT_LT(unitarity_defect(u), 1e-12);
  }
  T2Parameters bad;
  bad.sigma = bad.gamma = 1.0 / std::numbers::sqrt2;
  bad.theta = 1.0;
  bad.beta = bad.zeta = std::polar(1.0, 1.0) + std::polar(1.0, -1.0);
  EXPECT_THROW(build_t2_unitary(bad), Error);
}

TEST(T2Unitary, DeterminantClosedForm) {
  Rng rng(131);
  for (int trial = 0; trial < 200; ++trial) {
    const cplx beta = random_nonreal(rng);
    const T2Parameters p = solve_t2_parameters(beta);
    const CMatrix u = build_t2_unitary(p);
    const CMatrix s = u.adjoint() * t2_diag(beta) * u;
    const cplx ne = det2(s.topRightCorner(2, 2));
    const cplx sw = det2(s.bottomLeftCorner(2, 2));
    const cplx closed = cplx{0, 4} * (std::pow(p.gamma, 4) - std::pow(p.sigma, 4)) * std::sin(p.theta) / (beta + 6.0);
    EXPECT_LT(std::abs(ne), 1e-12 * std::max(1.0, std::abs(sw))) << "trial " << trial;
    EXPECT_LT(std::abs((ne - sw) - closed), 1e-9 * std::abs(closed)) << "trial " << trial;
    EXPECT_LT(std::abs(t2_determinant_gap(p) - closed), 1e-15 * std::max(1.0, std::abs(closed)));
  }
}

TEST(Witness4x4, DeltaFamily) {
  for (const cplx delta : {cplx{0, 1}, cplx{1, 1}, cplx{0, 2}}) {
    const T2Witness w = witness_4x4(delta);
    EXPECT_LE(w.witness.rank_ne, 1);
    EXPECT_EQ(w.witness.rank_sw, 2);
    EXPECT_EQ(w.witness.kind, WitnessKind::Both);
    EXPECT_GT(w.witness.norm_gap(), 1e-6);
    EXPECT_TRUE(reverify(w.t, w.witness));
    // Independent measurement from the projection matrix.
    const CornerReport r = corner_pair(w.t, w.witness.projection);
    EXPECT_NE(r.rank_ne, r.rank_sw);
  }
}

TEST(Witness4x4, Errors) {
  try {
    witness_4x4(0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeltaReal);
  }
  try {
    witness_4x4(2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeltaDegenerate);
  }
}

TEST(FalsifyDeterministic, Examples) {
  CVector d(4);
  d << 0, 1, 2, cplx{0, 1};
  const auto w = falsify_deterministic(d.asDiagonal());
  ASSERT_TRUE(w);
  EXPECT_LE(w->rank_ne, 1);
  EXPECT_EQ(w->rank_sw, 2);
  EXPECT_TRUE(reverify(d.asDiagonal(), *w));

  CVector line(4);
  line << 1, 2, 3, 4;
  EXPECT_FALSE(falsify_deterministic(line.asDiagonal()));

  CMatrix j(2, 2);
  j << 0, 1, 0, 0;
  EXPECT_THROW(falsify_deterministic(j), Error);
}

TEST(FalsifyDeterministic, EmbeddedInLargerSpace) {
  CVector d(6);
  d << 0, 1, 2, cplx{0, 1}, 5, 7;
  const CMatrix t = d.asDiagonal();
  const auto w = falsify_deterministic(t);
  ASSERT_TRUE(w);
  EXPECT_NE(w->rank_ne, w->rank_sw);
  const CMatrix& f = w->projection.range().columns();
  // Range lies in the span of four eigenvectors: exactly two coordinate rows vanish.
  std::vector<Index> support;
  for (Index i = 0; i < 6; ++i) {
    if (f.row(i).norm() > 1e-12) support.push_back(i);
  }
  ASSERT_EQ(support.size(), 4u);
  std::vector<cplx> quad;
  for (Index i : support) quad.push_back(d(i));
  EXPECT_EQ(fit_circline(quad).kind, CirclineKind::None);

  // Same corners as the restricted problem on those four coordinates.
  CMatrix inner_f(4, 2);
  CVector inner_d(4);
  for (Index r = 0; r < 4; ++r) {
    inner_f.row(r) = f.row(support[static_cast<std::size_t>(r)]);
    inner_d(r) = d(support[static_cast<std::size_t>(r)]);
  }
  const CMatrix inner_t = inner_d.asDiagonal();
  const Projection inner = Projection::from_frame(Frame::from_orthonormal(inner_f));
  const CornerReport r = corner_pair(inner_t, inner);
  EXPECT_EQ(r.rank_ne, w->rank_ne);
  EXPECT_EQ(r.rank_sw, w->rank_sw);
  EXPECT_NEAR(r.norm_ne, w->norm_ne, 1e-10);
  EXPECT_NEAR(r.norm_sw, w->norm_sw, 1e-10);
}

TEST(FalsifyDeterministic, NoneIffCirclinear) {
  Rng rng(137);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = rng.uniform_int(4, 9);
    std::vector<cplx> spec;
    switch (trial % 3) {
      case 0: spec = gen::line_spectrum(n, rng); break;
      case 1: spec = gen::circle_spectrum(n, rng); break;
      default: spec = gen::non_circlinear_spectrum(n, rng); break;
    }
    const CMatrix t = random_normal(n, spec, rng);
    const bool circlinear = fit_circline(eig_normal(t).eigenvalues).kind != CirclineKind::None;
    const auto w = falsify_deterministic(t);
    EXPECT_EQ(!w.has_value(), circlinear) << "trial " << trial;
    if (w) EXPECT_TRUE(reverify(t, *w));
  }
}

TEST(FalsifyDeterministic, WitnessSurvivesMoebiusMaps) {
  Rng rng(139);
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<cplx> spec = gen::non_circlinear_spectrum(4, rng);
    const CMatrix t = random_normal(4, spec, rng);
    const auto w = falsify_deterministic(t);
    ASSERT_TRUE(w);
    MoebiusMap m = gen::random_moebius(rng);
    while (gen::pole_clearance(m, spec) < 1e-2) m = gen::random_moebius(rng);
    const CornerReport r = corner_pair(moebius_apply_spectral(t, m), w->projection);
    EXPECT_NE(r.rank_ne, r.rank_sw) << "trial " << trial;
  }
}

TEST(FalsifySchur, NilpotentAndNormal) {
  CMatrix j(2, 2);
  j << 0, 1, 0, 0;
  const auto w = falsify_schur(j);
  ASSERT_TRUE(w);
  EXPECT_NEAR(w->norm_gap(), 1.0, 1e-12);
  EXPECT_TRUE(reverify(j, *w));

  Rng rng(149);
  EXPECT_FALSE(falsify_schur(random_hermitian(5, rng)));
}

TEST(FalsifySearch, Examples) {
  Rng rng(151);
  const CMatrix h = random_hermitian(4, rng);
  EXPECT_FALSE(falsify_search(h, 2, SearchBudget{4, 50}, 1));

  CMatrix j(2, 2);
  j << 0, 1, 0, 0;
  const auto wj = falsify_search(j, 1, SearchBudget{8, 100}, 2);
  ASSERT_TRUE(wj);
  EXPECT_NEAR(wj->norm_gap(), 1.0, 1e-6);
  EXPECT_TRUE(reverify(j, *wj));

  CVector d(4);
  d << 0, 1, 2, cplx{0, 1};
  const auto wd = falsify_search(d.asDiagonal(), 2, SearchBudget{}, 3);
  ASSERT_TRUE(wd);
  EXPECT_GT(wd->norm_gap(), 0.01);
  EXPECT_TRUE(reverify(d.asDiagonal(), *wd));

  EXPECT_THROW(falsify_search(h, 0, SearchBudget{}, 0), Error);
}

TEST(FalsifySearch, DeterministicGivenSeed) {
  CVector d(4);
  d << 0, 1, 2, cplx{0, 1};
  const auto a = falsify_search(d.asDiagonal(), 2, SearchBudget{4, 60}, 77);
  const auto b = falsify_search(d.asDiagonal(), 2, SearchBudget{4, 60}, 77);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->projection.range().columns(), b->projection.range().columns());
  EXPECT_EQ(a->norm_ne, b->norm_ne);
}

TEST(Witness, KindInvariant) {
  Rng rng(157);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix t = rng.gaussian(4, 4);
    const auto w = make_witness(t, gen::random_projection(4, 2, rng), Tolerances{}, "test");
    if (!w) continue;
    if (w->kind != WitnessKind::NormGap) EXPECT_NE(w->rank_ne, w->rank_sw);
    if (w->kind != WitnessKind::RankGap) EXPECT_GT(w->norm_gap(), Tolerances{}.tol_gap);
  }
}
