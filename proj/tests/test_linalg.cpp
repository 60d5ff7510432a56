#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "offdiag/linalg.hpp"

using namespace offdiag;

namespace {

CMatrix diag(std::initializer_list<cplx> d) {
  CVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (cplx z : d) v(i++) = z;
  return v.asDiagonal();
}

// Multiset distance by greedy nearest matching; fine for well-separated test spectra.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (const cplx& z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - z) < std::abs(q - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST(OperatorNorm, Basics) {
  EXPECT_EQ(operator_norm(CMatrix::Zero(3, 3)), 0.0);
  EXPECT_NEAR(operator_norm(random_unitary(5, 7)), 1.0, 1e-12);
  EXPECT_NEAR(operator_norm(diag({3.0, 4.0})), 4.0, 1e-14);
}

TEST(FrobeniusNorm, Basics) {
  EXPECT_NEAR(frobenius_norm(CMatrix::Identity(5, 5)), std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(frobenius_norm(CMatrix::Ones(2, 2)), 2.0, 1e-14);
  EXPECT_NEAR(frobenius_norm(diag({3.0, 4.0})), 5.0, 1e-14);
}

TEST(SingularValues, Basics) {
  const Eigen::VectorXd s = singular_values(CMatrix::Identity(3, 3));
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(s(i), 1.0, 1e-14);

  Rng rng(3);
  CVector u = rng.gaussian(4, 1), v = rng.gaussian(4, 1);
  u.normalize();
  v.normalize();
  const Eigen::VectorXd r1 = singular_values(u * v.adjoint());
  EXPECT_NEAR(r1(0), 1.0, 1e-12);
  for (Index i = 1; i < 4; ++i) EXPECT_LT(r1(i), 1e-14);

  CMatrix n(2, 2);
  n << 0, 2, 0, 0;
  const Eigen::VectorXd sn = singular_values(n);
  EXPECT_NEAR(sn(0), 2.0, 1e-14);
  EXPECT_NEAR(sn(1), 0.0, 1e-14);
}

TEST(NumericalRank, Basics) {
  EXPECT_EQ(numerical_rank(CMatrix::Zero(3, 3)), 0);
  EXPECT_EQ(numerical_rank(CMatrix::Identity(4, 4)), 4);
  EXPECT_EQ(numerical_rank(diag({1.0, 1e-14})), 1);
}

TEST(IsNormal, Basics) {
  EXPECT_TRUE(is_normal(diag({1.0, cplx{0, 3}, -2.0})));
  CMatrix j(2, 2);
  j << 0, 1, 0, 0;
  EXPECT_FALSE(is_normal(j));
  Rng rng(11);
  EXPECT_TRUE(is_normal(random_hermitian(6, rng)));
  EXPECT_TRUE(is_normal(CMatrix::Zero(3, 3)));
  EXPECT_THROW(is_normal(CMatrix::Zero(2, 3)), Error);
}

TEST(EigNormal, DiagonalAndSwap) {
  const SpectralDecomposition sd = eig_normal(diag({cplx{0, 1}, 2.0}));
  ASSERT_EQ(sd.eigenvalues.size(), 2u);
  EXPECT_NEAR(std::abs(sd.eigenvalues[0] - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sd.eigenvalues[1] - cplx{0, 1}), 0.0, 1e-14);
  // Permutation of I up to phases.
  const CMatrix f = sd.eigenframe.columns().cwiseAbs().cast<cplx>();
  CMatrix perm(2, 2);
  perm << 0, 1, 1, 0;
  EXPECT_LT((f - perm).norm(), 1e-12);

  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const SpectralDecomposition sx = eig_normal(x);
  EXPECT_NEAR(std::abs(sx.eigenvalues[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(sx.eigenvalues[1] + 1.0), 0.0, 1e-12);
}

TEST(EigNormal, RejectsNonNormal) {
  CMatrix j(2, 2);
  j << 0, 1, 0, 0;
  try {
    eig_normal(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormal);
  }
}

TEST(EigNormal, RoundTripProperty) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const Index n = rng.uniform_int(1, 32);
    std::vector<cplx> spectrum(static_cast<std::size_t>(n));
    for (cplx& z : spectrum) z = rng.complex_normal();
    const CMatrix t = random_normal(n, spectrum, rng);
    const SpectralDecomposition sd = eig_normal(t);
    EXPECT_LT(multiset_distance(spectrum, sd.eigenvalues), 1e-9) << "seed " << seed;
    EXPECT_TRUE(std::is_sorted(sd.eigenvalues.begin(), sd.eigenvalues.end(), lex_greater));
    EXPECT_LT(unitarity_defect(sd.eigenframe.columns()), 1e-12);
    const CMatrix resid = t * sd.eigenframe.columns() - sd.eigenframe.columns() * sd.diagonal();
    EXPECT_LE(resid.cwiseAbs().maxCoeff(), 1e-10 * operator_norm(t));
  }
}

TEST(QrFrame, Examples) {
  EXPECT_LT((qr_orthonormal_frame(CMatrix::Identity(4, 4)).columns() - CMatrix::Identity(4, 4)).norm(), 1e-15);

  CMatrix e1 = CMatrix::Zero(3, 1);
  e1(0) = 2.0;
  const CMatrix f = qr_orthonormal_frame(e1).columns();
  EXPECT_NEAR(std::abs(f(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(f.col(0).tail(2).norm(), 0.0, 1e-15);

  Rng rng(5);
  const CMatrix a = rng.gaussian(6, 2);
  const Frame g = qr_orthonormal_frame(a);
  EXPECT_LT(operator_norm(g.columns().adjoint() * g.columns() - CMatrix::Identity(2, 2)), 1e-12);
  // A = F R with R upper triangular.
  const CMatrix r = g.columns().adjoint() * a;
  EXPECT_LT(std::abs(r(1, 0)), 1e-12);
  EXPECT_LT((g.columns() * r - a).norm(), 1e-12);
}

TEST(QrFrame, RankDeficient) {
  CMatrix a(3, 2);
  a << 1, 2, 1, 2, 1, 2;
  try {
    qr_orthonormal_frame(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(Frame, Validation) {
  EXPECT_THROW(Frame::from_orthonormal(CMatrix::Ones(2, 1)), Error);
  EXPECT_THROW(Frame::from_orthonormal(CMatrix::Identity(2, 3)), Error);
}

TEST(RandomGenerators, UnitaryAndNormal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix u = random_unitary(8, seed);
    EXPECT_LT(unitarity_defect(u), 1e-12);
  }
  const std::vector<cplx> c{cplx{2.5, -1.0}};
  const CMatrix one = random_normal(1, c, 9);
  ASSERT_EQ(one.rows(), 1);
  EXPECT_EQ(one(0, 0), c[0]);
  // Deterministic in the seed.
  EXPECT_EQ(random_unitary(5, 42), random_unitary(5, 42));
  EXPECT_NE(random_unitary(5, 42), random_unitary(5, 43));
}

TEST(RandomGenerators, HaarPhaseFix) {
  // With the phase fix the diagonal of U has mean zero; without it the
  // diagonal entries of Q are biased towards the positive real axis.
  cplx mean = 0.0;
  const int trials = 4000;
  for (int s = 0; s < trials; ++s) mean += random_unitary(3, static_cast<std::uint64_t>(s))(0, 0);
  mean /= static_cast<double>(trials);
  EXPECT_LT(std::abs(mean), 0.05);
}

TEST(NormProperties, Inequalities) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const Index r = rng.uniform_int(1, 9), c = rng.uniform_int(1, 9);
    const CMatrix m = rng.gaussian(r, c);
    const double op = operator_norm(m), fro = frobenius_norm(m);
    EXPECT_LE(op, fro * (1 + 1e-14));
    EXPECT_LE(fro, std::sqrt(static_cast<double>(std::min(r, c))) * op * (1 + 1e-14));

    const Eigen::VectorXd s = singular_values(m), sa = singular_values(m.adjoint());
    EXPECT_LT((s - sa).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, op));

    // Rank is unitarily invariant; use a rank-deficient product.
    const Index k = rng.uniform_int(1, std::min(r, c));
    const CMatrix low = rng.gaussian(r, k) * rng.gaussian(k, c);
    const CMatrix left = random_unitary(r, rng), right = random_unitary(c, rng);
    EXPECT_EQ(numerical_rank(low), k);
    EXPECT_EQ(numerical_rank(left * low * right), k);
  }
}

TEST(Tolerances, Validate) {
  Tolerances t;
  EXPECT_NO_THROW(t.validate());
  t.tol_gap = 0.0;
  EXPECT_THROW(t.validate(), Error);
}

TEST(Rng, DeriveIsDeterministicAndSpreads) {
  EXPECT_EQ(Rng::derive(1, 2), Rng::derive(1, 2));
  EXPECT_NE(Rng::derive(1, 2), Rng::derive(1, 3));
  EXPECT_NE(Rng::derive(1, 2), Rng::derive(2, 2));
}
