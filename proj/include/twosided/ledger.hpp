#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

#include "twosided/types.hpp"

namespace twosided {

enum class KernelClass : int {
  Gemm = 0,
  Hemm,
  Her2k,
  Herk,
  Trsm,
  Trmm,
  Chol,
  TwoSidedBase,
  Other,
};

inline constexpr std::size_t kKernelClassCount = 9;

inline constexpr std::array<KernelClass, kKernelClassCount> kAllKernelClasses = {
    KernelClass::Gemm, KernelClass::Hemm, KernelClass::Her2k,
    KernelClass::Herk, KernelClass::Trsm, KernelClass::Trmm,
    KernelClass::Chol, KernelClass::TwoSidedBase, KernelClass::Other};

/// Upper-case tag, e.g. "HER2K", "TWO_SIDED_BASE".
std::string_view kernel_class_name(KernelClass c);

/// Per-class flop counters.
///
/// Counts are in the conventions of the kernels module: gemm 2mnk,
/// hemm 2m^2n, her2k 2n^2k, herk n^2k, trsm/trmm m^2r, Cholesky n^3/3,
/// unblocked two-sided base case n^3. Level-1 updates count zero.
class FlopLedger {
 public:
  void add(KernelClass c, std::uint64_t flops) { counts_[index(c)] += flops; }
  std::uint64_t operator[](KernelClass c) const { return counts_[index(c)]; }
  std::uint64_t total() const;

  FlopLedger& operator+=(const FlopLedger& other);
  friend FlopLedger operator+(FlopLedger a, const FlopLedger& b) { return a += b; }
  friend bool operator==(const FlopLedger&, const FlopLedger&) = default;

 private:
  static std::size_t index(KernelClass c) { return static_cast<std::size_t>(c); }
  std::array<std::uint64_t, kKernelClassCount> counts_{};
};

struct Shape {
  index_t rows = 0;
  index_t cols = 0;
  index_t min_dim() const { return rows < cols ? rows : cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// One instrumented kernel invocation.
struct KernelCall {
  KernelClass cls = KernelClass::Other;
  std::uint64_t flops = 0;
  Shape written;
  std::vector<Shape> read;
};

class CallLog {
 public:
  void record(KernelCall call) { calls_.push_back(std::move(call)); }
  const std::vector<KernelCall>& calls() const { return calls_; }
  std::size_t size() const { return calls_.size(); }
  void clear() { calls_.clear(); }

 private:
  std::vector<KernelCall> calls_;
};

/// Instrumentation sinks threaded through every kernel; both optional.
struct KernelContext {
  FlopLedger* ledger = nullptr;
  CallLog* log = nullptr;

  void report(KernelClass c, std::uint64_t flops, Shape written,
              std::initializer_list<Shape> read) const {
    if (ledger != nullptr) ledger->add(c, flops);
    if (log != nullptr) log->record(KernelCall{c, flops, written, std::vector<Shape>(read)});
  }
};

}  // namespace twosided
