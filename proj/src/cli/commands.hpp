#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twosided/cli.hpp"

namespace twosided::cli {

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_flops(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct ReduceOptions {
  std::vector<std::string> inputs;
  /// (n, seed) for generated operands.
  std::optional<std::pair<index_t, std::uint64_t>> random;
  std::string variant = "4";
  index_t block_size = 32;
  std::string field = "real";
  std::string output;
  /// Unset means 50 n eps kappa(L)^2.
  std::optional<double> tolerance;
};

int cmd_reduce(const ReduceOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace twosided::cli
