#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "twosided/variants.hpp"

namespace twosided::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Options shared by verify, bench and flops.
struct RunConfig {
  Operation op = Operation::Trsm;
  /// Variant spellings as given ("1".."5", "m1", "m2", "all").
  std::vector<std::string> variants{"all"};
  std::vector<index_t> sizes{33, 64};
  std::vector<index_t> block_sizes{8};
  std::vector<std::uint64_t> seeds{1};
  std::string field = "real";
  int reps = 1;
  double tolerance = 1e-10;
  bool check_invariants = false;
  bool strict = false;
  bool parallel_configs = false;
  /// Update step omitted from every variant run (0 = none).
  int inject_fault = 0;
  std::string output;
  std::string trace;
  std::string format = "csv";

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
  std::vector<VariantId> resolved_variants() const;

  nlohmann::ordered_json to_json() const;
  /// Keys present in `j` override the corresponding fields of `base`.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig from_json(const nlohmann::json& j);
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Bench CSV header, column for column.
extern const char* const kBenchHeader;

/// Entry point behind the `twosided` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twosided::cli
