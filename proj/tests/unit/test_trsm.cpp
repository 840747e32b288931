#include <limits>

#include "helpers.hpp"
#include "twosided/runner.hpp"

namespace twosided {
namespace {

using D = DenseMatrix<double>;

constexpr TrsmVariant kAll[] = {TrsmVariant::V1, TrsmVariant::V2, TrsmVariant::V3, TrsmVariant::V4,
                                TrsmVariant::V5};

template <class T>
DenseMatrix<T> run(TrsmVariant v, const DenseMatrix<T>& a, const TriangularFactor<T>& l, index_t b,
                   const RunOptions<T>& opts = {}) {
  DenseMatrix<T> out = a;
  two_sided_trsm<T>(hermitian_lower(out), l.view(), v, b, opts);
  return out;
}

TEST(TrsmUnblocked, Examples) {
  D a = D::from_rows({{4, 2}, {2, 3}});
  const D l = D::from_rows({{2, 0}, {1, 1}});
  FlopLedger led;
  two_sided_trsm_unblocked<double>(hermitian_lower(a), lower_triangular(l), {&led, nullptr});
  EXPECT_NEAR(a(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(a(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(a(1, 1), 2.0, 1e-15);
  EXPECT_EQ(a(0, 1), 2.0);
  EXPECT_EQ(led[KernelClass::TwoSidedBase], 8u);

  auto r = random_hermitian<double>(5, 1);
  const auto r0 = r;
  const D id = D::identity(5);
  two_sided_trsm_unblocked<double>(hermitian_lower(r), lower_triangular(id));
  EXPECT_TRUE(bitwise_equal<double>(r.cview(), r0.cview()));

  D a1 = D::from_rows({{9}});
  const D l1 = D::from_rows({{3}});
  two_sided_trsm_unblocked<double>(hermitian_lower(a1), lower_triangular(l1));
  EXPECT_EQ(a1(0, 0), 1.0);
}

TEST(TrsmBlocked, WorkedExampleEveryVariant) {
  const D a = D::from_rows({{4, 2}, {2, 3}});
  const TriangularFactor<double> l{D::from_rows({{2, 0}, {1, 1}}), Diag::NonUnit};
  for (TrsmVariant v : kAll) {
    const D c = run<double>(v, a, l, 1);
    EXPECT_NEAR(c(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(c(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(c(1, 1), 2.0, 1e-15);
  }
}

TEST(TrsmBlocked, ErrorCases) {
  D a = D::identity(3);
  const D l = D::identity(3);
  EXPECT_THROW(two_sided_trsm<double>(hermitian_lower(a), lower_triangular(l), TrsmVariant::V1, 0),
               InvalidArgument);
  const D sing = D::from_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 1}});
  for (TrsmVariant v : kAll) {
    try {
      two_sided_trsm<double>(hermitian_lower(a), lower_triangular(sing), v, 2);
      FAIL() << "expected SingularFactor";
    } catch (const SingularFactor& e) {
      EXPECT_EQ(e.index(), 1);
    }
  }
  const D l2 = D::identity(2);
  EXPECT_THROW(two_sided_trsm<double>(hermitian_lower(a), lower_triangular(l2), TrsmVariant::V4, 2),
               InvalidArgument);
  EXPECT_THROW(two_sided_trsm_unblocked<double>(hermitian_lower(a), lower_triangular(sing)), SingularFactor);
}

TEST(TrsmBlocked, LargeBlockIsOneBaseCall) {
  const auto p = make_problem<double>(Operation::Trsm, 20, 1);
  for (TrsmVariant v : kAll) {
    for (index_t b : {20, 64}) {
      FlopLedger led;
      CallLog log;
      RunOptions<double> opts;
      opts.ctx = {&led, &log};
      const D c = run<double>(v, p.a, p.l, b, opts);
      ASSERT_EQ(log.size(), 1u);
      EXPECT_EQ(log.calls()[0].cls, KernelClass::TwoSidedBase);
      EXPECT_EQ(led.total(), 8000u);
      D u = p.a;
      two_sided_trsm_unblocked<double>(hermitian_lower(u), p.l.view());
      EXPECT_TRUE(bitwise_equal_lower<double>(c.cview(), u.cview()));
    }
  }
}

template <class T>
class TrsmProps : public ::testing::Test {};
TYPED_TEST_SUITE(TrsmProps, test::Fields);

TYPED_TEST(TrsmProps, OracleGridAndUntouchedUpper) {
  using T = TypeParam;
  for (index_t n : {0, 1, 2, 3, 5, 8, 13, 33, 64}) {
    for (std::uint64_t seed : {1u, 2u}) {
      auto p = make_problem<T>(Operation::Trsm, n, seed);
      test::poison_upper(p.a);
      const auto ref = oracle::two_sided_trsm<T>(hermitian_lower(std::as_const(p.a)), p.l.view());
      for (TrsmVariant v : kAll)
        for (index_t b : {1, 4, 8, 32}) {
          const auto c = run<T>(v, p.a, p.l, b);
          EXPECT_LE(relative_distance_lower<T>(c.cview(), ref.cview()), 1e-10)
              << "variant " << static_cast<int>(v) << " n " << n << " b " << b;
          EXPECT_TRUE(bitwise_equal_strict_upper<T>(c.cview(), p.a.cview()));
        }
    }
  }
}

TYPED_TEST(TrsmProps, VariantsAgreePairwise) {
  using T = TypeParam;
  const auto p = make_problem<T>(Operation::Trsm, 64, 1);
  std::vector<DenseMatrix<T>> outs;
  for (TrsmVariant v : kAll) outs.push_back(run<T>(v, p.a, p.l, 8));
  for (std::size_t i = 0; i < outs.size(); ++i)
    for (std::size_t j = i + 1; j < outs.size(); ++j)
      EXPECT_LE(relative_distance_lower<T>(outs[i].cview(), outs[j].cview()), 1e-11);
}

TYPED_TEST(TrsmProps, BlockSizeIndependence) {
  using T = TypeParam;
  const auto p = make_problem<T>(Operation::Trsm, 50, 3);
  for (TrsmVariant v : kAll) {
    const auto c1 = run<T>(v, p.a, p.l, 1);
    for (index_t b : {3, 7, 16, 50, 80})
      EXPECT_LE(relative_distance_lower<T>(run<T>(v, p.a, p.l, b).cview(), c1.cview()), 1e-11);
  }
}

TYPED_TEST(TrsmProps, HookSeesEveryBoundary) {
  using T = TypeParam;
  const auto p = make_problem<T>(Operation::Trsm, 21, 1);
  for (TrsmVariant v : kAll) {
    std::vector<index_t> ks;
    bool y_ok = true;
    RunOptions<T> opts;
    opts.hook = [&](const BoundaryState<T>& s) {
      ks.push_back(s.k);
      if (v == TrsmVariant::V3) y_ok = y_ok && s.has_y && s.y.rows() == 21 - s.k && s.y.cols() == s.k;
      else y_ok = y_ok && !s.has_y;
    };
    DenseMatrix<T> a = p.a;
    const RunInfo info = two_sided_trsm<T>(hermitian_lower(a), p.l.view(), v, 5, opts);
    EXPECT_EQ(ks, (std::vector<index_t>{0, 5, 10, 15, 20, 21}));
    EXPECT_EQ(info.boundaries, 6u);
    EXPECT_TRUE(y_ok);
  }
}

TEST(TrsmWorkspace, V3HighWater) {
  for (index_t n : {64, 256}) {
    const index_t b = 16;
    const auto p = make_problem<double>(Operation::Trsm, n, 1);
    D a = p.a;
    const RunInfo info = two_sided_trsm<double>(hermitian_lower(a), p.l.view(), TrsmVariant::V3, b);
    const auto nn = static_cast<std::size_t>(n);
    EXPECT_LE(info.y_high_water, nn * nn / 2);
    EXPECT_GE(info.y_high_water, nn / 2 * static_cast<std::size_t>(b));
    D a2 = p.a;
    const RunInfo other = two_sided_trsm<double>(hermitian_lower(a2), p.l.view(), TrsmVariant::V4, b);
    EXPECT_EQ(other.y_high_water, 0u);
    EXPECT_LE(other.scratch_scalars, static_cast<std::size_t>(b) * nn);
  }
}

TEST(TrsmLedger, TotalsNearCube) {
  const index_t n = 256;
  const auto p = make_problem<double>(Operation::Trsm, n, 1);
  for (TrsmVariant v : kAll) {
    FlopLedger led;
    RunOptions<double> opts;
    opts.ctx.ledger = &led;
    run<double>(v, p.a, p.l, 16, opts);
    const double ratio = static_cast<double>(led.total()) / (static_cast<double>(n) * n * n);
    EXPECT_GE(ratio, 0.95);
    EXPECT_LE(ratio, 1.10);
  }
}

TEST(TrsmFaults, SkippingAnyStepChangesTheResult) {
  const auto p = make_problem<double>(Operation::Trsm, 24, 1);
  const auto ref = oracle::two_sided_trsm<double>(hermitian_lower(p.a), p.l.view());
  for (TrsmVariant v : kAll)
    for (int step = 1; step <= step_count(v); ++step) {
      RunOptions<double> opts;
      opts.skip_step = step;
      EXPECT_GT(relative_distance_lower<double>(run<double>(v, p.a, p.l, 4, opts).cview(), ref.cview()), 1e-6)
          << "variant " << static_cast<int>(v) << " step " << step;
    }
}

}  // namespace
}  // namespace twosided
