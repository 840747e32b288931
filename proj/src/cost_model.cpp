#include "twosided/cost_model.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "twosided/kernels.hpp"

namespace twosided {

std::string_view kernel_class_key(KernelClass c) {
  switch (c) {
    case KernelClass::Gemm: return "gemm";
    case KernelClass::Hemm: return "hemm";
    case KernelClass::Her2k: return "her2k";
    case KernelClass::Herk: return "herk";
    case KernelClass::Trsm: return "trsm";
    case KernelClass::Trmm: return "trmm";
    case KernelClass::Chol: return "chol";
    case KernelClass::TwoSidedBase: return "base";
    case KernelClass::Other: return "other";
  }
  return "?";
}

CostReport analyze(const FlopLedger& ledger, const CallLog* log, VariantId variant, index_t n, index_t b) {
  CostReport r;
  r.variant = variant;
  r.n = n;
  r.b = b;
  r.ledger = ledger;
  r.total_flops = ledger.total();
  r.fractions_defined = r.total_flops > 0;
  if (r.fractions_defined) {
    for (KernelClass c : kAllKernelClasses)
      r.fractions[static_cast<std::size_t>(c)] =
          static_cast<double>(ledger[c]) / static_cast<double>(r.total_flops);
  }
  r.scalable_fraction = r.fractions_defined ? 1.0 - r.fraction(KernelClass::Trsm) : 0.0;
  const auto un = static_cast<std::uint64_t>(std::max<index_t>(n, 0));
  const auto ub = static_cast<std::uint64_t>(std::max<index_t>(b, 0));
  r.big_kernel_threshold = un * ub * ub;
  if (log != nullptr) {
    r.has_call_log = true;
    for (const auto& call : log->calls()) {
      if (call.flops <= r.big_kernel_threshold) continue;
      ++r.big_kernel_calls;
      r.largest_written_extent_of_big_kernels =
          std::max(r.largest_written_extent_of_big_kernels, call.written.min_dim());
    }
  }
  return r;
}

namespace {

using u64 = std::uint64_t;

void predict_trsm(FlopLedger& f, TrsmVariant v, index_t n, index_t b) {
  for (const auto& [ki, kbi] : partition_schedule(n, b)) {
    const u64 k = static_cast<u64>(ki), kb = static_cast<u64>(kbi);
    const u64 m2 = static_cast<u64>(n) - k - kb;
    const u64 base = kb * kb * kb;
    switch (v) {
      case TrsmVariant::V1:
        f.add(KernelClass::Trsm, k * k * kb + kb * kb * k);
        f.add(KernelClass::Hemm, 2 * k * k * kb);
        f.add(KernelClass::Her2k, 2 * kb * kb * k);
        break;
      case TrsmVariant::V2:
        f.add(KernelClass::Hemm, 2 * k * k * kb);
        f.add(KernelClass::Her2k, 2 * kb * kb * k);
        f.add(KernelClass::Trsm, kb * kb * k + kb * kb * m2);
        f.add(KernelClass::Gemm, 2 * m2 * kb * k);
        break;
      case TrsmVariant::V3:
        f.add(KernelClass::Her2k, 2 * kb * kb * k);
        f.add(KernelClass::Trsm, kb * kb * k + kb * kb * m2);
        f.add(KernelClass::Gemm, 3 * (2 * m2 * kb * k));
        f.add(KernelClass::Hemm, 2 * kb * kb * m2);
        break;
      case TrsmVariant::V4:
        f.add(KernelClass::Trsm, kb * kb * k + kb * kb * m2);
        f.add(KernelClass::Gemm, 2 * m2 * k * kb);
        f.add(KernelClass::Hemm, 2 * kb * kb * m2);
        f.add(KernelClass::Her2k, 2 * m2 * m2 * kb);
        break;
      case TrsmVariant::V5:
        f.add(KernelClass::Trsm, kb * kb * m2 + m2 * m2 * kb);
        f.add(KernelClass::Hemm, 2 * kb * kb * m2);
        f.add(KernelClass::Her2k, 2 * m2 * m2 * kb);
        break;
    }
    f.add(KernelClass::TwoSidedBase, base);
  }
}

void predict_trmm(FlopLedger& f, TrmmVariant v, index_t n, index_t b) {
  for (const auto& [ki, kbi] : partition_schedule(n, b)) {
    const u64 k = static_cast<u64>(ki), kb = static_cast<u64>(kbi);
    const u64 m2 = static_cast<u64>(n) - k - kb;
    f.add(KernelClass::Hemm, 2 * (2 * kb * kb * k));
    f.add(KernelClass::Her2k, 2 * k * k * kb);
    f.add(KernelClass::Trmm, kb * kb * k);
    if (v == TrmmVariant::MV1) {
      f.add(KernelClass::Trmm, k * k * kb);
    } else {
      f.add(KernelClass::Gemm, 2 * m2 * k * kb);
      f.add(KernelClass::Trmm, kb * kb * m2);
    }
    f.add(KernelClass::TwoSidedBase, kb * kb * kb);
  }
}

}  // namespace

FlopLedger predict_ledger(VariantId variant, index_t n, index_t b) {
  if (n < 0) throw InvalidArgument("n must be non-negative");
  if (b < 1) throw InvalidArgument("block size must be at least 1");
  FlopLedger f;
  switch (variant.op) {
    case Operation::Trsm: predict_trsm(f, variant.trsm(), n, b); break;
    case Operation::Trmm: predict_trmm(f, variant.trmm(), n, b); break;
    case Operation::Reduce:
      if (n > 0) f.add(KernelClass::Chol, cholesky_flops(n));
      predict_trsm(f, variant.trsm(), n, b);
      break;
  }
  return f;
}

CostReport predict_fractions(VariantId variant, index_t n, index_t b) {
  return analyze(predict_ledger(variant, n, b), nullptr, variant, n, b);
}

nlohmann::ordered_json to_json(const FlopLedger& l) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (KernelClass c : kAllKernelClasses) j[std::string(kernel_class_key(c))] = l[c];
  return j;
}

nlohmann::ordered_json to_json(const CostReport& r) {
  nlohmann::ordered_json j;
  j["op"] = operation_name(r.variant.op);
  j["variant"] = variant_name(r.variant);
  j["n"] = r.n;
  j["b"] = r.b;
  j["total_flops"] = r.total_flops;
  j["flops"] = to_json(r.ledger);
  j["fractions_defined"] = r.fractions_defined;
  nlohmann::ordered_json fr = nlohmann::ordered_json::object();
  for (KernelClass c : kAllKernelClasses)
    fr[std::string(kernel_class_key(c))] = r.fraction(c);
  j["fractions"] = fr;
  j["scalable_fraction"] = r.scalable_fraction;
  j["big_kernel_threshold"] = r.big_kernel_threshold;
  if (r.has_call_log) {
    j["big_kernel_calls"] = r.big_kernel_calls;
    j["largest_written_extent_of_big_kernels"] = r.largest_written_extent_of_big_kernels;
  }
  return j;
}

std::string format_table(const CostReport& r) {
  std::string out = fmt::format("{} variant {}  n={}  b={}  total={}\n", operation_name(r.variant.op),
                                variant_name(r.variant), r.n, r.b, r.total_flops);
  out += fmt::format("{:<16}{:>20}{:>12}\n", "class", "flops", "fraction");
  for (KernelClass c : kAllKernelClasses) {
    out += fmt::format("{:<16}{:>20}{:>12.6f}\n", kernel_class_name(c), r.ledger[c], r.fraction(c));
  }
  out += fmt::format("{:<16}{:>32.6f}\n", "scalable", r.scalable_fraction);
  if (r.has_call_log)
    out += fmt::format("big kernels (> {} flops): {} calls, largest written extent {}\n", r.big_kernel_threshold,
                       r.big_kernel_calls, r.largest_written_extent_of_big_kernels);
  if (!r.fractions_defined) out += "fractions undefined (empty ledger)\n";
  return out;
}

}  // namespace twosided
