#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "twosided/ledger.hpp"
#include "twosided/matrix.hpp"

namespace twosided {

enum class Operation { Trsm, Trmm, Reduce };

/// A := L^{-1} A L^{-H}, five loop invariants.
enum class TrsmVariant { V1 = 1, V2, V3, V4, V5 };

/// A := L^H A L, two loop invariants.
enum class TrmmVariant { MV1 = 1, MV2 };

/// Operation plus variant number (1-5 for trsm/reduce, 1-2 for trmm).
struct VariantId {
  Operation op = Operation::Trsm;
  int index = 4;

  TrsmVariant trsm() const { return static_cast<TrsmVariant>(index); }
  TrmmVariant trmm() const { return static_cast<TrmmVariant>(index); }
  friend bool operator==(const VariantId&, const VariantId&) = default;
};

std::string_view operation_name(Operation op);
/// Throws InvalidArgument for anything other than trsm, trmm, reduce.
Operation parse_operation(std::string_view s);

/// CLI spelling: "1".."5" for trsm and reduce, "m1"/"m2" for trmm.
std::string variant_name(VariantId v);
/// Throws InvalidArgument("unknown variant ...").
VariantId parse_variant(Operation op, std::string_view s);
/// Comma-separated list; "all" expands to every variant of `op`.
std::vector<VariantId> parse_variant_list(Operation op, std::string_view s);
std::vector<VariantId> all_variants(Operation op);

/// Number of numbered update steps in a variant's loop body.
int step_count(TrsmVariant v);
int step_count(TrmmVariant v);
int step_count(VariantId v);

/// What a variant exposes to an observer at an iteration boundary.
template <class T>
struct BoundaryState {
  index_t k = 0;
  ConstMatrixView<T> a;
  /// Stored Y_BL panel ((n-k) x k); only meaningful when has_y.
  ConstMatrixView<T> y;
  bool has_y = false;
};

template <class T>
using BoundaryHook = std::function<void(const BoundaryState<T>&)>;

template <class T>
struct RunOptions {
  KernelContext ctx;
  /// Called at k = 0, after every iteration, and therefore at k = n.
  BoundaryHook<T> hook;
  /// Fault injection: the numbered update step to omit (0 = none).
  int skip_step = 0;
};

struct RunInfo {
  std::size_t boundaries = 0;
  /// Scalars of iteration scratch (b-wide panel).
  std::size_t scratch_scalars = 0;
  /// Peak capacity, in scalars, of the stored Y panel (variant 3 only).
  std::size_t y_high_water = 0;
};

}  // namespace twosided
