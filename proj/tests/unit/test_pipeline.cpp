#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "twosided/pipeline.hpp"
#include "twosided/random.hpp"

namespace twosided {
namespace {

using D = DenseMatrix<double>;

const D kA = D::from_rows({{4, 2}, {2, 3}});
const D kB = D::from_rows({{4, 2}, {2, 2}});

TEST(Reduce, WorkedPair) {
  for (TrsmVariant v : {TrsmVariant::V1, TrsmVariant::V2, TrsmVariant::V3, TrsmVariant::V4, TrsmVariant::V5}) {
    const auto r = reduce<double>(hermitian_lower(kA), hermitian_lower(kB), v, 1);
    EXPECT_EQ(r.l.base, D::from_rows({{2, 0}, {1, 1}}));
    EXPECT_NEAR(r.c(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(r.c(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(r.c(1, 1), 2.0, 1e-15);
    EXPECT_LE(r.residual, 1e-14);
    EXPECT_EQ(r.ledger[KernelClass::Chol], 3u);
  }
}

TEST(Reduce, IdentityB) {
  const auto a = random_hermitian<double>(9, 4);
  const D id = D::identity(9);
  const auto r = reduce<double>(hermitian_lower(a), hermitian_lower(id), TrsmVariant::V4, 4);
  EXPECT_TRUE(bitwise_equal_lower<double>(r.c.cview(), a.cview()));
  EXPECT_EQ(r.residual, 0.0);
}

TEST(Reduce, EigenvaluesOfWorkedPair) {
  const auto r = reduce<double>(hermitian_lower(kA), hermitian_lower(kB), TrsmVariant::V4, 32);
  const auto [c1, c2] = eigenvalues_2x2<double>(hermitian_lower(std::as_const(r.c)));
  const auto [g1, g2] = oracle::generalized_eigenvalues_2x2<double>(hermitian_lower(kA), hermitian_lower(kB));
  EXPECT_NEAR(c1, 1.0, 1e-12);
  EXPECT_NEAR(c2, 2.0, 1e-12);
  EXPECT_NEAR(c1, g1, 1e-12);
  EXPECT_NEAR(c2, g2, 1e-12);
}

TEST(Reduce, Errors) {
  const D bad = D::from_rows({{1, 2}, {2, 1}});
  try {
    reduce<double>(hermitian_lower(kA), hermitian_lower(bad), TrsmVariant::V1, 2);
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.index(), 1);
  }
  const D id3 = D::identity(3);
  EXPECT_THROW(reduce<double>(hermitian_lower(kA), hermitian_lower(id3), TrsmVariant::V1, 2), InvalidArgument);
  EXPECT_THROW(reduce<double>(hermitian_lower(kA), hermitian_lower(kB), TrsmVariant::V1, 0), InvalidArgument);
}

TEST(Eigenvector, WorkedPair) {
  const auto r = reduce<double>(hermitian_lower(kA), hermitian_lower(kB), TrsmVariant::V2, 1);
  const D z = D::from_rows({{1}, {0}});
  const D x = recover_generalized_eigenvector<double>(z.cview(), r.l.view());
  EXPECT_NEAR(x(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(x(1, 0), 0.0, 1e-15);
  const D ax = oracle::multiply<double>(kA.cview(), Op::NoTrans, x.cview(), Op::NoTrans);
  const D bx = oracle::multiply<double>(kB.cview(), Op::NoTrans, x.cview(), Op::NoTrans);
  const double lambda = r.c(0, 0);
  for (index_t i = 0; i < 2; ++i) EXPECT_NEAR(ax(i, 0), lambda * bx(i, 0), 1e-12);
  EXPECT_NEAR(ax(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(ax(1, 0), 1.0, 1e-15);
}

TEST(Eigenvector, TrivialCases) {
  const D id = D::identity(3);
  const D z = random_matrix<double>(3, 2, 1);
  EXPECT_TRUE(bitwise_equal<double>(recover_generalized_eigenvector<double>(z.cview(), lower_triangular(id)).cview(),
                                    z.cview()));
  const auto l = random_well_conditioned_lower<double>(3, 2);
  const D zero(3, 1);
  const D x = recover_generalized_eigenvector<double>(zero.cview(), l.view());
  for (index_t i = 0; i < 3; ++i) EXPECT_EQ(x(i, 0), 0.0);
  const D lh = conj_transpose<double>(materialize(l.view()).cview());
  const D back = oracle::multiply<double>(lh.cview(), Op::NoTrans,
                                          recover_generalized_eigenvector<double>(z.cview(), l.view()).cview(),
                                          Op::NoTrans);
  EXPECT_LE(relative_distance<double>(back.cview(), z.cview()), 1e-14);
  const D sing = D::from_rows({{1, 0}, {0, 0}});
  EXPECT_THROW(recover_generalized_eigenvector<double>(D(2, 1).cview(), lower_triangular(sing)), SingularFactor);
}

template <class T>
class PipelineProps : public ::testing::Test {};
TYPED_TEST_SUITE(PipelineProps, test::Fields);

TYPED_TEST(PipelineProps, RandomPairsPreserveEigenvalues) {
  using T = TypeParam;
  for (std::uint64_t s = 1; s <= 100; ++s) {
    const auto a = random_hermitian<T>(2, s);
    const auto b = random_hpd<T>(2, paired_seed(s));
    const auto r = reduce<T>(hermitian_lower(a), hermitian_lower(b), TrsmVariant::V4, 1);
    const auto [c1, c2] = eigenvalues_2x2<T>(hermitian_lower(std::as_const(r.c)));
    const auto [g1, g2] = oracle::generalized_eigenvalues_2x2<T>(hermitian_lower(a), hermitian_lower(b));
    EXPECT_NEAR(c1, g1, 1e-10) << "seed " << s;
    EXPECT_NEAR(c2, g2, 1e-10) << "seed " << s;
  }
}

TYPED_TEST(PipelineProps, VariantIndependenceAndResidual) {
  using T = TypeParam;
  const index_t n = 60;
  const auto a = random_hermitian<T>(n, 8);
  const auto b = random_hpd<T>(n, paired_seed(8));
  const auto ref = reduce<T>(hermitian_lower(a), hermitian_lower(b), TrsmVariant::V1, 8);
  const auto lf = materialize(ref.l.view());
  const auto linv = oracle::invert_lower(ref.l.view());
  const double kappa = frobenius_norm(lf) * frobenius_norm(linv);
  const double bound = 50.0 * n * std::numeric_limits<double>::epsilon() * kappa * kappa;
  for (TrsmVariant v : {TrsmVariant::V2, TrsmVariant::V3, TrsmVariant::V4, TrsmVariant::V5}) {
    for (index_t bs : {1, 8, 25}) {
      const auto r = reduce<T>(hermitian_lower(a), hermitian_lower(b), v, bs);
      EXPECT_LE(relative_distance_lower<T>(r.c.cview(), ref.c.cview()), 1e-11);
      EXPECT_LE(r.residual, bound);
      EXPECT_TRUE(bitwise_equal_strict_upper<T>(r.c.cview(), a.cview()));
    }
  }
}

TYPED_TEST(PipelineProps, TwoByTwoEigenvaluesOfDiagonal) {
  using T = TypeParam;
  DenseMatrix<T> c(2, 2);
  c(0, 0) = T(3);
  c(1, 1) = T(-1);
  const auto [e1, e2] = eigenvalues_2x2<T>(hermitian_lower(std::as_const(c)));
  EXPECT_EQ(e1, -1.0);
  EXPECT_EQ(e2, 3.0);
  const DenseMatrix<T> three(3, 3);
  EXPECT_THROW(eigenvalues_2x2<T>(hermitian_lower(three)), InvalidArgument);
}

}  // namespace
}  // namespace twosided
