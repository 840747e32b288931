#include "commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <complex>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "twosided/cost_model.hpp"
#include "twosided/matrix_market.hpp"
#include "twosided/pipeline.hpp"
#include "twosided/runner.hpp"
#include "twosided/worksheet.hpp"

namespace twosided::cli {

namespace {

using cplx = std::complex<double>;
using json = nlohmann::ordered_json;

struct Cell {
  VariantId v;
  index_t n = 0;
  index_t b = 0;
  std::uint64_t seed = 0;
  int rep = 0;
};

std::vector<Cell> cells_of(const RunConfig& cfg, bool with_reps) {
  std::vector<Cell> out;
  for (const auto& v : cfg.resolved_variants())
    for (index_t n : cfg.sizes)
      for (index_t b : cfg.block_sizes)
        for (std::uint64_t s : cfg.seeds)
          for (int r = 0; r < (with_reps ? cfg.reps : 1); ++r) out.push_back({v, n, b, s, r});
  return out;
}

/// Runs `work(i)` for every index; with `parallel`, on a pool of threads.
/// Results land in caller-owned slots, so ordering never depends on timing.
void for_each_cell(std::size_t count, bool parallel, const std::function<void(std::size_t)>& work) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto threads = parallel ? std::min<std::size_t>(hw, count) : 1;
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) work(i);
    });
  for (auto& th : pool) th.join();
}

class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

// ---------------------------------------------------------------- verify

struct VerifyResult {
  double residual = 0.0;
  bool upper_ok = true;
  bool invariants_checked = false;
  bool invariants_ok = true;
  bool ok = true;
  std::string failure;
  std::string trace_csv;
};

template <class T>
VerifyResult verify_cell(const RunConfig& cfg, const Cell& c) {
  VerifyResult r;
  Problem<T> p = make_problem<T>(c.v.op, c.n, c.seed);
  const DenseMatrix<T> a_hat = DenseMatrix<T>::copy_of(p.a.cview());
  const DenseMatrix<T> ref = oracle_for<T>(c.v, hermitian_lower(std::as_const(a_hat)), p.l.view());
  const TraceLabel label{variant_name(c.v), c.n, c.b, c.seed};

  std::optional<WorksheetHarness<T>> harness;
  RunOptions<T> opts;
  opts.skip_step = cfg.inject_fault;
  if (cfg.check_invariants) {
    harness.emplace(invariant_for(c.v), a_hat.cview(), p.l.view(), cfg.tolerance, cfg.strict);
    opts.hook = harness->hook();
    r.invariants_checked = true;
  }
  try {
    run_variant<T>(c.v, hermitian_lower(p.a), p.l.view(), c.b, opts);
  } catch (const InvariantViolation& e) {
    r.ok = false;
    r.invariants_ok = false;
    r.failure = fmt::format("variant {} n={} b={} seed={}: {}", label.variant, c.n, c.b, c.seed, e.what());
  }
  r.residual = relative_distance_lower<T>(p.a.cview(), ref.cview());
  r.upper_ok = bitwise_equal_strict_upper<T>(p.a.cview(), a_hat.cview());
  if (harness) {
    if (r.invariants_ok) {
      r.invariants_ok = harness->trace().passed();
      if (!r.invariants_ok) r.failure = describe_failure(harness->trace(), label);
    }
    if (!cfg.trace.empty()) {
      std::ostringstream ss;
      write_trace_csv(ss, harness->trace(), label, false);
      r.trace_csv = ss.str();
    }
  }
  if (r.ok) {
    if (!r.invariants_ok) {
      r.ok = false;
    } else if (!(r.residual <= cfg.tolerance)) {
      r.ok = false;
      r.failure = fmt::format("variant {} n={} b={} seed={}: oracle residual {:.3e} > {:.1e}", label.variant, c.n,
                              c.b, c.seed, r.residual, cfg.tolerance);
    } else if (!r.upper_ok) {
      r.ok = false;
      r.failure = fmt::format("variant {} n={} b={} seed={}: strictly-upper buffer modified", label.variant, c.n,
                              c.b, c.seed);
    }
  }
  return r;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto cells = cells_of(cfg, false);
  std::vector<VerifyResult> results(cells.size());
  const bool complex = cfg.field == "complex";
  for_each_cell(cells.size(), cfg.parallel_configs, [&](std::size_t i) {
    results[i] = complex ? verify_cell<cplx>(cfg, cells[i]) : verify_cell<double>(cfg, cells[i]);
  });

  OutputSink sink(cfg.output, out);
  std::ostream& os = sink.get();
  const std::string& fmt_name = cfg.format;
  std::size_t passed = 0;
  json arr = json::array();
  if (fmt_name == "table")
    os << fmt::format("{:<7}{:<8}{:<8}{:>6}{:>6}{:>8}{:>12}{:>8}{:>12}  {}\n", "op", "variant", "field", "n", "b",
                      "seed", "residual", "upper", "invariants", "status");
  else if (fmt_name == "csv")
    os << "op,variant,field,n,b,seed,residual,upper_untouched,invariants,status\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const VerifyResult& r = results[i];
    passed += r.ok ? 1 : 0;
    const std::string inv = r.invariants_checked ? (r.invariants_ok ? "pass" : "fail") : "-";
    const std::string status = r.ok ? "PASS" : "FAIL";
    const std::string res = fmt::format("{:.3e}", r.residual);
    if (fmt_name == "table") {
      os << fmt::format("{:<7}{:<8}{:<8}{:>6}{:>6}{:>8}{:>12}{:>8}{:>12}  {}\n", operation_name(c.v.op),
                        variant_name(c.v), cfg.field, c.n, c.b, c.seed, res, r.upper_ok ? "ok" : "CHANGED", inv,
                        status);
    } else if (fmt_name == "csv") {
      os << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", operation_name(c.v.op), variant_name(c.v), cfg.field,
                        c.n, c.b, c.seed, res, r.upper_ok ? 1 : 0, inv, status);
    } else {
      json j;
      j["op"] = operation_name(c.v.op);
      j["variant"] = variant_name(c.v);
      j["field"] = cfg.field;
      j["n"] = c.n;
      j["b"] = c.b;
      j["seed"] = c.seed;
      j["residual"] = res;
      j["upper_untouched"] = r.upper_ok;
      j["invariants"] = inv;
      j["status"] = status;
      if (!r.failure.empty()) j["failure"] = r.failure;
      arr.push_back(j);
    }
    if (!r.ok) err << "FAIL " << r.failure << '\n';
  }
  if (fmt_name == "json") os << arr.dump(2) << '\n';
  else if (fmt_name == "table") os << fmt::format("{}/{} passed\n", passed, cells.size());

  if (!cfg.trace.empty()) {
    std::ofstream tf(cfg.trace);
    if (!tf) throw InvalidArgument("cannot write '" + cfg.trace + "'");
    tf << "variant,n,b,seed,k,quadrant,residual,bitwise_ok\n";
    for (const auto& r : results) tf << r.trace_csv;
  }
  return passed == cells.size() ? kExitOk : kExitFailure;
}

// ----------------------------------------------------------------- bench

namespace {

struct BenchRecord {
  Cell cell;
  double elapsed = 0.0;
  double gflops = 0.0;
  CostReport report;
};

template <class T>
BenchRecord bench_cell(const Cell& c) {
  Problem<T> p = make_problem<T>(c.v.op == Operation::Reduce ? Operation::Trsm : c.v.op, c.n, c.seed);
  if (c.v.op == Operation::Reduce) p.b = random_hpd<T>(c.n, paired_seed(c.seed));
  FlopLedger ledger;
  RunOptions<T> opts;
  opts.ctx.ledger = &ledger;
  const auto t0 = std::chrono::steady_clock::now();
  if (c.v.op == Operation::Reduce) {
    const TriangularFactor<T> l = cholesky_lower<T>(hermitian_lower(std::as_const(p.b)), opts.ctx);
    run_variant<T>(c.v, hermitian_lower(p.a), l.view(), c.b, opts);
  } else {
    run_variant<T>(c.v, hermitian_lower(p.a), p.l.view(), c.b, opts);
  }
  const auto t1 = std::chrono::steady_clock::now();
  BenchRecord r{c, std::chrono::duration<double>(t1 - t0).count(), 0.0, {}};
  r.report = analyze(ledger, nullptr, c.v, c.n, c.b);
  const double secs = std::max(r.elapsed, 1e-9);
  r.gflops = static_cast<double>(r.report.total_flops) / secs / 1e9;
  return r;
}

constexpr KernelClass kBenchColumns[] = {KernelClass::Gemm, KernelClass::Hemm, KernelClass::Her2k,
                                         KernelClass::Herk, KernelClass::Trsm, KernelClass::Trmm,
                                         KernelClass::Chol, KernelClass::TwoSidedBase};

}  // namespace

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto cells = cells_of(cfg, true);
  std::vector<BenchRecord> recs(cells.size());
  const bool complex = cfg.field == "complex";
  for_each_cell(cells.size(), cfg.parallel_configs, [&](std::size_t i) {
    recs[i] = complex ? bench_cell<cplx>(cells[i]) : bench_cell<double>(cells[i]);
  });

  OutputSink sink(cfg.output, out);
  std::ostream& os = sink.get();
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : recs) {
      json j;
      j["op"] = operation_name(r.cell.v.op);
      j["variant"] = variant_name(r.cell.v);
      j["n"] = r.cell.n;
      j["b"] = r.cell.b;
      j["seed"] = r.cell.seed;
      j["rep"] = r.cell.rep;
      j["elapsed_seconds"] = r.elapsed;
      j["gflops"] = r.gflops;
      for (KernelClass k : kBenchColumns) j["frac_" + std::string(kernel_class_key(k))] = r.report.fraction(k);
      arr.push_back(j);
    }
    os << arr.dump(2) << '\n';
    return kExitOk;
  }
  os << kBenchHeader << '\n';
  for (const auto& r : recs) {
    os << fmt::format("{},{},{},{},{},{},{:.6e},{:.6f}", operation_name(r.cell.v.op), variant_name(r.cell.v),
                      r.cell.n, r.cell.b, r.cell.seed, r.cell.rep, r.elapsed, r.gflops);
    for (KernelClass k : kBenchColumns) os << fmt::format(",{:.15g}", r.report.fraction(k));
    os << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- flops

namespace {

template <class T>
void measure(VariantId v, index_t n, index_t b, std::uint64_t seed, FlopLedger& ledger, CallLog& log) {
  Problem<T> p = make_problem<T>(v.op == Operation::Reduce ? Operation::Trsm : v.op, n, seed);
  RunOptions<T> opts;
  opts.ctx.ledger = &ledger;
  opts.ctx.log = &log;
  if (v.op == Operation::Reduce) {
    p.b = random_hpd<T>(n, paired_seed(seed));
    const TriangularFactor<T> l = cholesky_lower<T>(hermitian_lower(std::as_const(p.b)), opts.ctx);
    run_variant<T>(v, hermitian_lower(p.a), l.view(), b, opts);
  } else {
    run_variant<T>(v, hermitian_lower(p.a), p.l.view(), b, opts);
  }
}

}  // namespace

int cmd_flops(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto variants = cfg.resolved_variants();
  if (variants.size() != 1 || cfg.sizes.size() != 1 || cfg.block_sizes.size() != 1)
    throw InvalidArgument("flops takes exactly one --variant, --n and --b");
  const VariantId v = variants.front();
  const index_t n = cfg.sizes.front();
  const index_t b = cfg.block_sizes.front();

  FlopLedger measured;
  CallLog log;
  if (cfg.field == "complex") measure<cplx>(v, n, b, cfg.seeds.front(), measured, log);
  else measure<double>(v, n, b, cfg.seeds.front(), measured, log);
  const CostReport m = analyze(measured, &log, v, n, b);
  const CostReport p = predict_fractions(v, n, b);
  const bool match = measured == p.ledger;

  OutputSink sink(cfg.output, out);
  std::ostream& os = sink.get();
  if (cfg.format == "table") {
    os << "predicted\n" << format_table(p) << "measured\n" << format_table(m);
    os << (match ? "difference: 0 in every class\n" : "difference: NONZERO\n");
  } else {
    json j;
    j["op"] = operation_name(v.op);
    j["variant"] = variant_name(v);
    j["n"] = n;
    j["b"] = b;
    j["predicted"] = to_json(p);
    j["measured"] = to_json(m);
    json diff = json::object();
    for (KernelClass c : kAllKernelClasses)
      diff[std::string(kernel_class_key(c))] =
          static_cast<std::int64_t>(measured[c]) - static_cast<std::int64_t>(p.ledger[c]);
    j["difference"] = diff;
    j["match"] = match;
    os << j.dump(2) << '\n';
  }
  if (!match) err << "measured ledger differs from the prediction\n";
  return match ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- reduce

namespace {

template <class T>
DenseMatrix<T> convert(const MatrixMarketData& d) {
  if constexpr (is_complex_v<T>) {
    return d.values;
  } else {
    return real_part_checked(d);
  }
}

template <class T>
void require_hermitian(const DenseMatrix<T>& m, const char* what) {
  if (m.rows() != m.cols()) throw InvalidArgument(fmt::format("{} is {}x{}, not square", what, m.rows(), m.cols()));
  double diff = 0.0;
  for (index_t j = 0; j < m.cols(); ++j)
    for (index_t i = j; i < m.rows(); ++i) diff = std::max(diff, std::abs(m(i, j) - conj_of(m(j, i))));
  const double scale = std::max(1.0, frobenius_norm<T>(m.cview()));
  if (diff > 1e-12 * scale) throw InvalidArgument(fmt::format("{} is not Hermitian", what));
}

template <class T>
int reduce_typed(DenseMatrix<T> a, DenseMatrix<T> b, const ReduceOptions& opt, std::ostream& out,
                 std::ostream& err) {
  require_hermitian(a, "A");
  require_hermitian(b, "B");
  if (a.rows() != b.rows())
    throw InvalidArgument(fmt::format("A is {}x{} but B is {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
  const VariantId v = parse_variant(Operation::Reduce, opt.variant);
  const index_t n = a.rows();
  ReductionResult<T> r;
  try {
    r = reduce<T>(hermitian_lower(std::as_const(a)), hermitian_lower(std::as_const(b)), v.trsm(),
                  opt.block_size);
  } catch (const NotPositiveDefinite& e) {
    err << fmt::format("B is not positive definite: non-positive pivot at index {}\n", e.index());
    return kExitFailure;
  }
  double tol = 0.0;
  if (opt.tolerance) {
    tol = *opt.tolerance;
  } else {
    const DenseMatrix<T> inv = oracle::invert_lower(r.l.view());
    const double kappa = frobenius_norm<T>(r.l.base.cview()) * frobenius_norm<T>(inv.cview());
    tol = 50.0 * static_cast<double>(std::max<index_t>(n, 1)) * std::numeric_limits<double>::epsilon() * kappa *
          kappa;
  }
  if (!opt.output.empty()) write_matrix_market_file<T>(opt.output, r.c.cview(), true);
  out << fmt::format("residual {:.6e}\n", r.residual);
  out << fmt::format("tolerance {:.6e}\n", tol);
  if (n == 2) {
    const auto [c1, c2] = eigenvalues_2x2<T>(hermitian_lower(std::as_const(r.c)));
    const auto [g1, g2] = oracle::generalized_eigenvalues_2x2<T>(hermitian_lower(std::as_const(a)),
                                                                 hermitian_lower(std::as_const(b)));
    out << fmt::format("eigenvalues(C) {:.15g} {:.15g}\n", c1, c2);
    out << fmt::format("eigenvalues(A,B) {:.15g} {:.15g}\n", g1, g2);
  }
  if (!(r.residual <= tol)) {
    err << fmt::format("residual {:.3e} exceeds tolerance {:.3e}\n", r.residual, tol);
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int cmd_reduce(const ReduceOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.block_size < 1) throw InvalidArgument("block size must be at least 1");
  parse_variant(Operation::Reduce, opt.variant);
  if (opt.random) {
    if (!opt.inputs.empty()) throw InvalidArgument("--in and --random are mutually exclusive");
    const auto [n, seed] = *opt.random;
    if (n < 0) throw InvalidArgument("n must be non-negative");
    if (opt.field == "complex")
      return reduce_typed<cplx>(random_hermitian<cplx>(n, seed), random_hpd<cplx>(n, paired_seed(seed)), opt, out,
                                err);
    if (opt.field != "real") throw InvalidArgument("field must be real or complex");
    return reduce_typed<double>(random_hermitian<double>(n, seed), random_hpd<double>(n, paired_seed(seed)), opt,
                                out, err);
  }
  if (opt.inputs.size() != 2) throw InvalidArgument("reduce needs --in A.mtx --in B.mtx or --random n seed");
  const MatrixMarketData da = read_matrix_market_file(opt.inputs[0]);
  const MatrixMarketData db = read_matrix_market_file(opt.inputs[1]);
  if (da.is_complex() || db.is_complex())
    return reduce_typed<cplx>(convert<cplx>(da), convert<cplx>(db), opt, out, err);
  return reduce_typed<double>(convert<double>(da), convert<double>(db), opt, out, err);
}

}  // namespace twosided::cli
