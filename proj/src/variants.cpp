#include "twosided/variants.hpp"

namespace twosided {

std::string_view operation_name(Operation op) {
  switch (op) {
    case Operation::Trsm: return "trsm";
    case Operation::Trmm: return "trmm";
    case Operation::Reduce: return "reduce";
  }
  return "trsm";
}

Operation parse_operation(std::string_view s) {
  if (s == "trsm") return Operation::Trsm;
  if (s == "trmm") return Operation::Trmm;
  if (s == "reduce") return Operation::Reduce;
  throw InvalidArgument("unknown operation '" + std::string(s) + "' (expected trsm, trmm or reduce)");
}

std::string variant_name(VariantId v) {
  if (v.op == Operation::Trmm) return "m" + std::to_string(v.index);
  return std::to_string(v.index);
}

std::vector<VariantId> all_variants(Operation op) {
  std::vector<VariantId> out;
  const int count = op == Operation::Trmm ? 2 : 5;
  for (int i = 1; i <= count; ++i) out.push_back({op, i});
  return out;
}

VariantId parse_variant(Operation op, std::string_view s) {
  for (const auto& v : all_variants(op))
    if (variant_name(v) == s) return v;
  throw InvalidArgument("unknown variant '" + std::string(s) + "' for " +
                        std::string(operation_name(op)));
}

std::vector<VariantId> parse_variant_list(Operation op, std::string_view s) {
  if (s == "all") return all_variants(op);
  std::vector<VariantId> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string_view item =
        s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (item == "all") {
      for (const auto& v : all_variants(op)) out.push_back(v);
    } else {
      out.push_back(parse_variant(op, item));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int step_count(TrsmVariant v) {
  switch (v) {
    case TrsmVariant::V1: return 7;
    case TrsmVariant::V2: return 8;
    case TrsmVariant::V3: return 12;
    case TrsmVariant::V4: return 8;
    case TrsmVariant::V5: return 7;
  }
  return 0;
}

int step_count(TrmmVariant v) {
  switch (v) {
    case TrmmVariant::MV1: return 6;
    case TrmmVariant::MV2: return 7;
  }
  return 0;
}

int step_count(VariantId v) {
  return v.op == Operation::Trmm ? step_count(v.trmm()) : step_count(v.trsm());
}

}  // namespace twosided
