#include "helpers.hpp"
#include "twosided/oracle.hpp"
#include "twosided/random.hpp"

namespace twosided {
namespace {

using D = DenseMatrix<double>;

double asymmetry(const D& c) {
  const auto ch = conj_transpose<double>(c.cview());
  return relative_distance<double>(c.cview(), ch.cview());
}

TEST(OracleTrsm, WorkedExample) {
  const D a = D::from_rows({{4, 2}, {2, 3}});
  const D l = D::from_rows({{2, 0}, {1, 1}});
  const D c = oracle::two_sided_trsm<double>(hermitian_lower(a), lower_triangular(l));
  EXPECT_NEAR(c(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(c(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(c(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(c(1, 1), 2.0, 1e-15);
}

TEST(OracleTrsm, IdentityAndScalar) {
  const auto a = random_hermitian<double>(6, 3);
  const D id = D::identity(6);
  const D c = oracle::two_sided_trsm<double>(hermitian_lower(a), lower_triangular(id));
  EXPECT_LE(relative_distance<double>(c.cview(), materialize(hermitian_lower(a)).cview()), 1e-15);

  const D a1 = D::from_rows({{4}});
  const D l1 = D::from_rows({{2}});
  EXPECT_EQ(oracle::two_sided_trsm<double>(hermitian_lower(a1), lower_triangular(l1))(0, 0), 1.0);
}

TEST(OracleTrsm, SingularFactorThrows) {
  const D a = D::identity(2);
  const D l = D::from_rows({{1, 0}, {1, 0}});
  EXPECT_THROW(oracle::two_sided_trsm<double>(hermitian_lower(a), lower_triangular(l)), SingularFactor);
}

TEST(OracleTrmm, WorkedExample) {
  const D a = D::from_rows({{1, 0}, {0, 2}});
  const D l = D::from_rows({{2, 0}, {1, 1}});
  const D c = oracle::two_sided_trmm<double>(hermitian_lower(a), lower_triangular(l));
  EXPECT_EQ(c, D::from_rows({{6, 2}, {2, 2}}));

  const D a1 = D::from_rows({{3}});
  const D l1 = D::from_rows({{2}});
  EXPECT_EQ(oracle::two_sided_trmm<double>(hermitian_lower(a1), lower_triangular(l1))(0, 0), 12.0);

  const auto ar = random_hermitian<double>(5, 2);
  const D id = D::identity(5);
  EXPECT_EQ(oracle::two_sided_trmm<double>(hermitian_lower(ar), lower_triangular(id)),
            materialize(hermitian_lower(ar)));

  const D l3 = D::identity(3);
  EXPECT_THROW(oracle::two_sided_trmm<double>(hermitian_lower(a), lower_triangular(l3)), InvalidArgument);
}

TEST(OracleEigen, Examples) {
  const D a = D::from_rows({{4, 2}, {2, 3}});
  const D b = D::from_rows({{4, 2}, {2, 2}});
  auto [l1, l2] = oracle::generalized_eigenvalues_2x2<double>(hermitian_lower(a), hermitian_lower(b));
  EXPECT_NEAR(l1, 1.0, 1e-14);
  EXPECT_NEAR(l2, 2.0, 1e-14);

  std::tie(l1, l2) = oracle::generalized_eigenvalues_2x2<double>(hermitian_lower(b), hermitian_lower(b));
  EXPECT_NEAR(l1, 1.0, 1e-14);
  EXPECT_NEAR(l2, 1.0, 1e-14);

  const D z(2, 2);
  std::tie(l1, l2) = oracle::generalized_eigenvalues_2x2<double>(hermitian_lower(z), hermitian_lower(b));
  EXPECT_EQ(l1, 0.0);
  EXPECT_EQ(l2, 0.0);

  const D bad = D::from_rows({{1, 2}, {2, 1}});
  EXPECT_THROW(oracle::generalized_eigenvalues_2x2<double>(hermitian_lower(a), hermitian_lower(bad)),
               InvalidArgument);
}

template <class T>
class OracleProps : public ::testing::Test {};
TYPED_TEST_SUITE(OracleProps, test::Fields);

TYPED_TEST(OracleProps, ReconstructionAndHermitian) {
  using T = TypeParam;
  for (index_t n : {1, 17, 120}) {
    const auto a = random_hermitian<T>(n, 11);
    const auto l = random_well_conditioned_lower<T>(n, 12);
    const auto c = oracle::two_sided_trsm<T>(hermitian_lower(a), l.view());
    const auto lf = materialize(l.view());
    const auto lc = oracle::multiply<T>(lf.cview(), Op::NoTrans, c.cview(), Op::NoTrans);
    const auto rec = oracle::multiply<T>(lc.cview(), Op::NoTrans, lf.cview(), Op::ConjTrans);
    const auto af = materialize(hermitian_lower(a));
    EXPECT_LE(relative_distance<T>(rec.cview(), af.cview()), 1e-10);

    const auto ch = conj_transpose<T>(c.cview());
    EXPECT_LE(relative_distance<T>(c.cview(), ch.cview()), 1e-13);
    const auto m = oracle::two_sided_trmm<T>(hermitian_lower(a), l.view());
    const auto mh = conj_transpose<T>(m.cview());
    EXPECT_LE(relative_distance<T>(m.cview(), mh.cview()), 1e-13);
  }
}

TYPED_TEST(OracleProps, ReducedEigenvaluesMatchGeneralized) {
  using T = TypeParam;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto a = random_hermitian<T>(2, s);
    const auto l = random_well_conditioned_lower<T>(2, paired_seed(s));
    const auto lf = materialize(l.view());
    const auto b = oracle::multiply<T>(lf.cview(), Op::NoTrans, lf.cview(), Op::ConjTrans);
    auto c = oracle::two_sided_trsm<T>(hermitian_lower(a), l.view());
    const auto [c1, c2] = oracle::hermitian_eigenvalues_2x2<T>(hermitian_lower(std::as_const(c)));
    const auto [g1, g2] = oracle::generalized_eigenvalues_2x2<T>(hermitian_lower(a), hermitian_lower(b));
    const double scale = std::max({1.0, std::abs(g1), std::abs(g2)});
    EXPECT_LE(std::abs(c1 - g1), 1e-10 * scale);
    EXPECT_LE(std::abs(c2 - g2), 1e-10 * scale);
  }
}

TEST(OracleProps, RealAsymmetryHelper) {
  const auto a = random_hermitian<double>(7, 1);
  const auto l = random_well_conditioned_lower<double>(7, 2);
  EXPECT_LE(asymmetry(oracle::two_sided_trsm<double>(hermitian_lower(a), l.view())), 1e-13);
}

}  // namespace
}  // namespace twosided
