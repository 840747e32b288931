#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "twosided/cost_model.hpp"
#include "twosided/pipeline.hpp"
#include "twosided/runner.hpp"

namespace twosided {
namespace {

struct Measured {
  FlopLedger ledger;
  CallLog log;
};

Measured measure(VariantId v, index_t n, index_t b) {
  Measured m;
  auto p = make_problem<double>(v.op, n, 1);
  RunOptions<double> opts;
  opts.ctx = {&m.ledger, &m.log};
  if (v.op == Operation::Reduce) {
    reduce<double>(hermitian_lower(std::as_const(p.a)), hermitian_lower(std::as_const(p.b)), v.trsm(), b, opts);
  } else {
    run_variant<double>(v, hermitian_lower(p.a), p.l.view(), b, opts);
  }
  return m;
}

TEST(Predict, V1MatchesMeasuredExactly) {
  const VariantId v{Operation::Trsm, 1};
  const Measured m = measure(v, 1024, 32);
  EXPECT_EQ(predict_ledger(v, 1024, 32), m.ledger);
}

TEST(Predict, EveryVariantOnASmallGrid) {
  for (Operation op : {Operation::Trsm, Operation::Trmm, Operation::Reduce})
    for (VariantId v : all_variants(op))
      for (index_t n : {0, 1, 7, 40, 97})
        for (index_t b : {1, 3, 16, 128}) {
          const Measured m = measure(v, n, b);
          EXPECT_EQ(predict_ledger(v, n, b), m.ledger) << variant_name(v) << " n " << n << " b " << b;
        }
}

TEST(Predict, SingleBlockIsAllBase) {
  for (VariantId v : all_variants(Operation::Trsm)) {
    const CostReport r = predict_fractions(v, 64, 64);
    EXPECT_EQ(r.fraction(KernelClass::TwoSidedBase), 1.0);
    EXPECT_EQ(r.total_flops, 64u * 64 * 64);
  }
}

TEST(Predict, V1TrsmFractionTendsToOneThird) {
  const VariantId v{Operation::Trsm, 1};
  double prev = 1.0;
  for (index_t n : {1024, 4096, 16384, 65536}) {
    const double gap = std::abs(predict_fractions(v, n, 64).fraction(KernelClass::Trsm) - 1.0 / 3.0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(Predict, InvalidArguments) {
  EXPECT_THROW(predict_ledger({Operation::Trsm, 1}, -1, 4), InvalidArgument);
  EXPECT_THROW(predict_ledger({Operation::Trsm, 1}, 8, 0), InvalidArgument);
}

TEST(Analyze, EmptyLedger) {
  const CostReport r = analyze(FlopLedger{}, nullptr, {Operation::Trsm, 4}, 0, 8);
  EXPECT_EQ(r.total_flops, 0u);
  EXPECT_FALSE(r.fractions_defined);
  for (double f : r.fractions) EXPECT_EQ(f, 0.0);
  EXPECT_NE(format_table(r).find("undefined"), std::string::npos);
  EXPECT_FALSE(to_json(r)["fractions_defined"].get<bool>());
}

TEST(Analyze, FractionsSumToOneAndScalable) {
  for (Operation op : {Operation::Trsm, Operation::Trmm})
    for (VariantId v : all_variants(op)) {
      const Measured m = measure(v, 200, 24);
      const CostReport r = analyze(m.ledger, &m.log, v, 200, 24);
      const double sum = std::accumulate(r.fractions.begin(), r.fractions.end(), 0.0);
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_DOUBLE_EQ(r.scalable_fraction, 1.0 - r.fraction(KernelClass::Trsm));
      EXPECT_EQ(r.big_kernel_threshold, 200u * 24 * 24);
      EXPECT_TRUE(r.has_call_log);
    }
}

TEST(Analyze, WrittenExtentFromCallLog) {
  CallLog log;
  log.record({KernelClass::Gemm, 1000, {50, 4}, {}});
  log.record({KernelClass::Her2k, 5000, {30, 30}, {}});
  log.record({KernelClass::Trsm, 10, {100, 100}, {}});
  FlopLedger led;
  led.add(KernelClass::Gemm, 1000);
  led.add(KernelClass::Her2k, 5000);
  led.add(KernelClass::Trsm, 10);
  const CostReport r = analyze(led, &log, {Operation::Trsm, 2}, 10, 5);  // threshold 250
  EXPECT_EQ(r.big_kernel_calls, 2u);
  EXPECT_EQ(r.largest_written_extent_of_big_kernels, 30);
  EXPECT_EQ(r.total_flops, 6010u);
}

TEST(Analyze, OrderingProxyAtModerateSize) {
  auto scal = [](int i) { return predict_fractions({Operation::Trsm, i}, 1024, 64).scalable_fraction; };
  EXPECT_GE(scal(4), scal(3));
  EXPECT_GE(scal(3), scal(2));
  EXPECT_GT(scal(2), scal(1));
  EXPECT_GT(scal(4), scal(5));
}

TEST(Predict, FractionClaimsAtFullSize) {
  auto fr = [](Operation op, int i, KernelClass c) { return predict_fractions({op, i}, 2048, 64).fraction(c); };
  EXPECT_GE(fr(Operation::Trsm, 1, KernelClass::Trsm), 0.30);
  EXPECT_LE(fr(Operation::Trsm, 1, KernelClass::Trsm), 0.37);
  EXPECT_GE(fr(Operation::Trsm, 5, KernelClass::Trsm), 0.30);
  EXPECT_LE(fr(Operation::Trsm, 5, KernelClass::Trsm), 0.37);
  for (int i : {2, 3, 4}) EXPECT_LE(fr(Operation::Trsm, i, KernelClass::Trsm), 0.05);
  EXPECT_GE(fr(Operation::Trsm, 4, KernelClass::Her2k), 0.50);
  EXPECT_GE(fr(Operation::Trsm, 5, KernelClass::Her2k), 0.50);
  EXPECT_GE(fr(Operation::Trsm, 1, KernelClass::Hemm), 0.50);
  EXPECT_GE(fr(Operation::Trsm, 2, KernelClass::Hemm), 0.50);
  EXPECT_EQ(fr(Operation::Trmm, 1, KernelClass::Trsm), 0.0);
  EXPECT_GE(fr(Operation::Trmm, 1, KernelClass::Her2k), 0.55);
}

TEST(Report, JsonAndTable) {
  const CostReport r = predict_fractions({Operation::Trsm, 4}, 128, 32);
  const auto j = to_json(r);
  EXPECT_EQ(j["op"], "trsm");
  EXPECT_EQ(j["variant"], "4");
  EXPECT_EQ(j["n"], 128);
  EXPECT_EQ(j["total_flops"].get<std::uint64_t>(), r.total_flops);
  for (KernelClass c : kAllKernelClasses) {
    const std::string key(kernel_class_key(c));
    EXPECT_EQ(j["flops"][key].get<std::uint64_t>(), r.ledger[c]);
    EXPECT_DOUBLE_EQ(j["fractions"][key].get<double>(), r.fraction(c));
  }
  EXPECT_FALSE(j.contains("big_kernel_calls"));
  const std::string t = format_table(r);
  EXPECT_NE(t.find("HER2K"), std::string::npos);
  EXPECT_NE(t.find("scalable"), std::string::npos);
  EXPECT_EQ(kernel_class_key(KernelClass::TwoSidedBase), "base");
}

}  // namespace
}  // namespace twosided
