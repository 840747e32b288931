#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "twosided/ledger.hpp"
#include "twosided/variants.hpp"

namespace twosided {

/// Lower-case key used in reports and CSV columns ("her2k", "base", ...).
std::string_view kernel_class_key(KernelClass c);

struct CostReport {
  VariantId variant;
  index_t n = 0;
  index_t b = 0;
  FlopLedger ledger;
  std::uint64_t total_flops = 0;
  /// False when the ledger is empty; the fractions are then all zero.
  bool fractions_defined = false;
  std::array<double, kKernelClassCount> fractions{};
  double scalable_fraction = 0.0;
  /// Calls with more flops than this are "big" (n * b^2).
  std::uint64_t big_kernel_threshold = 0;
  std::size_t big_kernel_calls = 0;
  /// Min dimension of the written operand, maximized over big calls.
  index_t largest_written_extent_of_big_kernels = 0;
  bool has_call_log = false;

  double fraction(KernelClass c) const { return fractions[static_cast<std::size_t>(c)]; }
};

/// `log` may be null, in which case the extent fields stay zero.
CostReport analyze(const FlopLedger& ledger, const CallLog* log, VariantId variant, index_t n, index_t b);

/// Exact per-class flops of a run, summed from the per-iteration kernel
/// shapes over the partition schedule.
FlopLedger predict_ledger(VariantId variant, index_t n, index_t b);

CostReport predict_fractions(VariantId variant, index_t n, index_t b);

nlohmann::ordered_json to_json(const CostReport& r);
nlohmann::ordered_json to_json(const FlopLedger& l);

/// Aligned plain-text table of per-class flops and fractions.
std::string format_table(const CostReport& r);

}  // namespace twosided
