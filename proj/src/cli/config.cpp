#include <fmt/format.h>

#include "twosided/cli.hpp"

namespace twosided::cli {

const char* const kBenchHeader =
    "op,variant,n,b,seed,rep,elapsed_seconds,gflops,frac_gemm,frac_hemm,frac_her2k,frac_herk,frac_trsm,"
    "frac_trmm,frac_chol,frac_base";

void RunConfig::validate() const {
  if (variants.empty()) throw InvalidArgument("no variants given");
  resolved_variants();
  if (sizes.empty()) throw InvalidArgument("no sizes given");
  for (index_t n : sizes)
    if (n < 0) throw InvalidArgument(fmt::format("size {} is negative", n));
  if (block_sizes.empty()) throw InvalidArgument("no block sizes given");
  for (index_t b : block_sizes)
    if (b < 1) throw InvalidArgument(fmt::format("block size {} must be at least 1", b));
  if (seeds.empty()) throw InvalidArgument("no seeds given");
  if (field != "real" && field != "complex") throw InvalidArgument("field must be real or complex, got '" + field + "'");
  if (reps < 1) throw InvalidArgument("reps must be at least 1");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (format != "csv" && format != "json" && format != "table")
    throw InvalidArgument("format must be csv, json or table, got '" + format + "'");
  if (inject_fault < 0) throw InvalidArgument("inject-fault step must be non-negative");
  for (const auto& v : resolved_variants())
    if (inject_fault > step_count(v))
      throw InvalidArgument(fmt::format("variant {} has only {} update steps", variant_name(v), step_count(v)));
}

std::vector<VariantId> RunConfig::resolved_variants() const {
  std::vector<VariantId> out;
  for (const auto& s : variants)
    for (const auto& v : parse_variant_list(op, s)) out.push_back(v);
  return out;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["op"] = operation_name(op);
  j["variants"] = variants;
  j["sizes"] = sizes;
  j["block_sizes"] = block_sizes;
  j["seeds"] = seeds;
  j["field"] = field;
  j["reps"] = reps;
  j["tolerance"] = tolerance;
  j["check_invariants"] = check_invariants;
  j["strict"] = strict;
  j["parallel_configs"] = parallel_configs;
  j["inject_fault"] = inject_fault;
  j["output"] = output;
  j["trace"] = trace;
  j["format"] = format;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "op") c.op = parse_operation(v.get<std::string>());
      else if (key == "variants") {
        if (v.is_string()) c.variants = {v.get<std::string>()};
        else c.variants = v.get<std::vector<std::string>>();
      }
      else if (key == "sizes") c.sizes = v.get<std::vector<index_t>>();
      else if (key == "block_sizes") c.block_sizes = v.get<std::vector<index_t>>();
      else if (key == "seeds") c.seeds = v.get<std::vector<std::uint64_t>>();
      else if (key == "field") c.field = v.get<std::string>();
      else if (key == "reps") c.reps = v.get<int>();
      else if (key == "tolerance") c.tolerance = v.get<double>();
      else if (key == "check_invariants") c.check_invariants = v.get<bool>();
      else if (key == "strict") c.strict = v.get<bool>();
      else if (key == "parallel_configs") c.parallel_configs = v.get<bool>();
      else if (key == "inject_fault") c.inject_fault = v.get<int>();
      else if (key == "output") c.output = v.get<std::string>();
      else if (key == "trace") c.trace = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else throw InvalidArgument("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) { return from_json(j, RunConfig{}); }

}  // namespace twosided::cli
