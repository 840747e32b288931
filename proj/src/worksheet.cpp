#include "twosided/worksheet.hpp"

#include <fmt/format.h>

#include <ostream>

namespace twosided {

std::string_view state_name(QuadrantState s) {
  switch (s) {
    case QuadrantState::Original: return "ORIGINAL";
    case QuadrantState::Final: return "FINAL";
    case QuadrantState::HalfSolved: return "HALF_SOLVED";
    case QuadrantState::HalfSolvedMinusHalfY: return "HALF_SOLVED_MINUS_HALF_Y";
    case QuadrantState::LBrTimesC: return "L_BR_TIMES_C";
    case QuadrantState::Rank2kUpdated: return "RANK2K_UPDATED";
    case QuadrantState::TrmmLeading: return "CUSTOM(L_TL^H*AHAT_TL*L_TL)";
    case QuadrantState::PostMultiplied: return "CUSTOM(AHAT_BL*L_TL)";
    case QuadrantState::LBlTimesCTl: return "CUSTOM(L_BL*C_TL)";
  }
  return "?";
}

std::string_view quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::TL: return "TL";
    case Quadrant::BL: return "BL";
    case Quadrant::BR: return "BR";
    case Quadrant::Y: return "Y";
  }
  return "?";
}

InvariantSpec invariant_for(TrsmVariant v) {
  using S = QuadrantState;
  InvariantSpec s{VariantId{Operation::Trsm, static_cast<int>(v)}, S::Final, S::Original, S::Original, {}};
  switch (v) {
    case TrsmVariant::V1: break;
    case TrsmVariant::V2: s.bl = S::HalfSolved; break;
    case TrsmVariant::V3:
      s.bl = S::HalfSolvedMinusHalfY;
      s.y = S::LBlTimesCTl;
      break;
    case TrsmVariant::V4:
      s.bl = S::LBrTimesC;
      s.br = S::Rank2kUpdated;
      break;
    case TrsmVariant::V5:
      s.bl = S::Final;
      s.br = S::Rank2kUpdated;
      break;
  }
  return s;
}

InvariantSpec invariant_for(TrmmVariant v) {
  using S = QuadrantState;
  InvariantSpec s{VariantId{Operation::Trmm, static_cast<int>(v)}, S::TrmmLeading, S::Original, S::Original, {}};
  if (v == TrmmVariant::MV2) s.bl = S::PostMultiplied;
  return s;
}

InvariantSpec invariant_for(VariantId v) {
  if (v.op == Operation::Trmm) return invariant_for(v.trmm());
  InvariantSpec s = invariant_for(v.trsm());
  s.variant = v;
  return s;
}

namespace {

bool check_ok(const QuadrantCheck& c, double tol) {
  return c.bitwise ? c.bitwise_ok : c.residual <= tol;
}

}  // namespace

bool BoundaryRecord::passed(double tolerance) const {
  for (const auto& c : checks)
    if (!check_ok(c, tolerance)) return false;
  return true;
}

bool WorksheetTrace::passed() const { return first_failure() == nullptr; }

const BoundaryRecord* WorksheetTrace::first_failure() const {
  for (const auto& r : records)
    if (!r.passed(tolerance)) return &r;
  return nullptr;
}

InvariantViolation::InvariantViolation(index_t k, Quadrant q, double residual)
    : std::runtime_error(fmt::format("invariant violated at boundary k={} in quadrant {} (residual {:.3e})", k,
                                     quadrant_name(q), residual)),
      k_(k),
      q_(q) {}

void write_trace_csv(std::ostream& os, const WorksheetTrace& trace, const TraceLabel& label, bool header) {
  if (header) os << "variant,n,b,seed,k,quadrant,residual,bitwise_ok\n";
  for (const auto& r : trace.records)
    for (const auto& c : r.checks)
      os << fmt::format("{},{},{},{},{},{},{:.6e},{}\n", label.variant, label.n, label.b, label.seed, r.k,
                        quadrant_name(c.quadrant), c.residual, c.bitwise ? (c.bitwise_ok ? "1" : "0") : "-");
}

std::string describe_failure(const WorksheetTrace& trace, const TraceLabel& label) {
  const BoundaryRecord* r = trace.first_failure();
  if (r == nullptr) return {};
  for (const auto& c : r->checks) {
    if (check_ok(c, trace.tolerance)) continue;
    return fmt::format("variant {} n={} b={} seed={}: boundary k={} quadrant {} ({}) {}", label.variant, label.n,
                       label.b, label.seed, r->k, quadrant_name(c.quadrant), state_name(c.state),
                       c.bitwise ? std::string("not bitwise equal to the original")
                                 : fmt::format("residual {:.3e} > {:.1e}", c.residual, trace.tolerance));
  }
  return {};
}

}  // namespace twosided
