#pragma once

// Loop-invariant checking harness. Each variant binds to an InvariantSpec
// naming the state of every quadrant at an iteration boundary; the harness
// evaluates those states against reference quantities built by the oracle
// module from a private snapshot of Ahat and L.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twosided/oracle.hpp"
#include "twosided/variants.hpp"

namespace twosided {

enum class QuadrantState {
  Original,              ///< bitwise equal to Ahat
  Final,                 ///< equals C on the quadrant
  HalfSolved,            ///< Ahat_BL L_TL^{-H}
  HalfSolvedMinusHalfY,  ///< Ahat_BL L_TL^{-H} - Y_BL / 2
  LBrTimesC,             ///< L_BR C_BL
  Rank2kUpdated,         ///< Ahat_BR - L_BL W^H - W L_BL^H
  TrmmLeading,           ///< L_TL^H Ahat_TL L_TL
  PostMultiplied,        ///< Ahat_BL L_TL
  LBlTimesCTl,           ///< L_BL C_TL (the stored Y panel)
};

enum class Quadrant { TL, BL, BR, Y };

std::string_view state_name(QuadrantState s);
std::string_view quadrant_name(Quadrant q);

struct InvariantSpec {
  VariantId variant;
  QuadrantState tl = QuadrantState::Final;
  QuadrantState bl = QuadrantState::Original;
  QuadrantState br = QuadrantState::Original;
  std::optional<QuadrantState> y;
};

InvariantSpec invariant_for(TrsmVariant v);
InvariantSpec invariant_for(TrmmVariant v);
/// Reduce runs the trsm variant, so it shares that variant's invariant.
InvariantSpec invariant_for(VariantId v);

struct QuadrantCheck {
  Quadrant quadrant = Quadrant::TL;
  QuadrantState state = QuadrantState::Final;
  double residual = 0.0;
  /// Set for Original states, which are verified bitwise.
  bool bitwise = false;
  bool bitwise_ok = true;
};

struct BoundaryRecord {
  index_t k = 0;
  std::vector<QuadrantCheck> checks;

  bool passed(double tolerance) const;
};

struct WorksheetTrace {
  std::vector<BoundaryRecord> records;
  double tolerance = 1e-10;

  bool passed() const;
  /// First failing boundary, if any.
  const BoundaryRecord* first_failure() const;
};

/// Raised by a strict-mode harness at the first failing boundary.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(index_t k, Quadrant q, double residual);
  index_t k() const { return k_; }
  Quadrant quadrant() const { return q_; }

 private:
  index_t k_;
  Quadrant q_;
};

struct TraceLabel {
  std::string variant;
  index_t n = 0;
  index_t b = 0;
  std::uint64_t seed = 0;
};

/// Columns `variant,n,b,seed,k,quadrant,residual,bitwise_ok`. The header is
/// written only when `header` is set, so traces can be concatenated.
void write_trace_csv(std::ostream& os, const WorksheetTrace& trace, const TraceLabel& label,
                     bool header = true);

/// One sentence naming the first failing quadrant, or empty on success.
std::string describe_failure(const WorksheetTrace& trace, const TraceLabel& label);

template <class T>
class WorksheetHarness {
 public:
  WorksheetHarness(InvariantSpec spec, ConstMatrixView<T> a_hat, TriangularView<T> l,
                   double tolerance = 1e-10, bool strict = false)
      : spec_(spec),
        a_hat_(DenseMatrix<T>::copy_of(a_hat)),
        l_(DenseMatrix<T>::copy_of(l.base)),
        unit_(l.diag),
        strict_(strict) {
    trace_.tolerance = tolerance;
    if (a_hat_.rows() != a_hat_.cols() || a_hat_.rows() != l_.rows())
      throw InvalidArgument("worksheet: A and L must be square and of equal order");
    full_a_ = materialize(hermitian_lower(std::as_const(a_hat_)));
    full_l_ = materialize(lt());
    if (spec_.variant.op != Operation::Trmm) {
      l_inv_ = oracle::invert_lower(lt());
      c_ = oracle::two_sided_trsm<T>(hermitian_lower(std::as_const(a_hat_)), lt());
    } else {
      c_ = oracle::two_sided_trmm<T>(hermitian_lower(std::as_const(a_hat_)), lt());
    }
  }

  index_t dim() const { return a_hat_.rows(); }
  const InvariantSpec& spec() const { return spec_; }
  const WorksheetTrace& trace() const { return trace_; }

  BoundaryRecord check_initialization(ConstMatrixView<T> a) { return check_boundary(0, a); }

  /// Evaluates the invariant at boundary k and appends it to the trace.
  BoundaryRecord check_boundary(index_t k, ConstMatrixView<T> a, ConstMatrixView<T> y = {},
                                bool has_y = false) {
    const index_t n = dim();
    if (k < 0 || k > n) throw InvalidArgument("worksheet: boundary outside [0, n]");
    if (a.rows() != n || a.cols() != n) throw InvalidArgument("worksheet: A has the wrong shape");
    BoundaryRecord rec{k, {}};
    rec.checks.push_back(check(Quadrant::TL, spec_.tl, k, a.block(0, 0, k, k)));
    rec.checks.push_back(check(Quadrant::BL, spec_.bl, k, a.block(k, 0, n - k, k)));
    rec.checks.push_back(check(Quadrant::BR, spec_.br, k, a.block(k, k, n - k, n - k)));
    if (spec_.y) {
      QuadrantCheck yc{Quadrant::Y, *spec_.y, 0.0, false, true};
      if (has_y && y.rows() == n - k && y.cols() == k)
        yc = check(Quadrant::Y, *spec_.y, k, y);
      else if (k > 0 && k < n)
        yc.residual = 1.0;
      rec.checks.push_back(yc);
    }
    trace_.records.push_back(rec);
    if (strict_ && !rec.passed(trace_.tolerance)) {
      for (const auto& c : rec.checks)
        if (c.bitwise ? !c.bitwise_ok : !(c.residual <= trace_.tolerance))
          throw InvariantViolation(k, c.quadrant, c.residual);
    }
    return rec;
  }

  /// Full-matrix comparison at k = n; passes iff the residual is within
  /// tolerance.
  std::pair<bool, double> check_termination(ConstMatrixView<T> a) {
    const index_t n = dim();
    check_boundary(n, a);
    const double r = relative_distance_lower<T>(a, c_.cview());
    return {r <= trace_.tolerance, r};
  }

  /// Observer suitable for RunOptions::hook.
  BoundaryHook<T> hook() {
    return [this](const BoundaryState<T>& s) { check_boundary(s.k, s.a, s.y, s.has_y); };
  }

 private:
  TriangularView<T> lt() const { return TriangularView<T>(l_.cview(), unit_); }

  ConstMatrixView<T> fa(index_t i, index_t j, index_t m, index_t n) const { return full_a_.block(i, j, m, n); }
  ConstMatrixView<T> fl(index_t i, index_t j, index_t m, index_t n) const { return full_l_.block(i, j, m, n); }
  ConstMatrixView<T> fc(index_t i, index_t j, index_t m, index_t n) const { return c_.block(i, j, m, n); }

  static DenseMatrix<T> mul(ConstMatrixView<T> a, ConstMatrixView<T> b, Op ob = Op::NoTrans) {
    return oracle::multiply<T>(a, Op::NoTrans, b, ob);
  }

  static void axpy(DenseMatrix<T>& y, double alpha, const DenseMatrix<T>& x) {
    for (index_t j = 0; j < y.cols(); ++j)
      for (index_t i = 0; i < y.rows(); ++i) y(i, j) += T(alpha) * x(i, j);
  }

  /// Y_BL = L_BL C_TL.
  DenseMatrix<T> y_ref(index_t k) const {
    const index_t n = dim();
    return mul(fl(k, 0, n - k, k), fc(0, 0, k, k));
  }

  DenseMatrix<T> reference(QuadrantState s, Quadrant q, index_t k) const {
    const index_t n = dim();
    const index_t m = n - k;
    switch (s) {
      case QuadrantState::Original:
      case QuadrantState::Final:
        break;
      case QuadrantState::HalfSolved:
        return mul(fa(k, 0, m, k), l_inv_.block(0, 0, k, k), Op::ConjTrans);
      case QuadrantState::HalfSolvedMinusHalfY: {
        DenseMatrix<T> r = mul(fa(k, 0, m, k), l_inv_.block(0, 0, k, k), Op::ConjTrans);
        axpy(r, -0.5, y_ref(k));
        return r;
      }
      case QuadrantState::LBrTimesC:
        return mul(fl(k, k, m, m), fc(k, 0, m, k));
      case QuadrantState::Rank2kUpdated: {
        DenseMatrix<T> w = y_ref(k);
        for (index_t j = 0; j < w.cols(); ++j)
          for (index_t i = 0; i < w.rows(); ++i) w(i, j) *= T(0.5);
        axpy(w, 1.0, mul(fl(k, k, m, m), fc(k, 0, m, k)));
        DenseMatrix<T> r = DenseMatrix<T>::copy_of(fa(k, k, m, m));
        axpy(r, -1.0, mul(fl(k, 0, m, k), w.cview(), Op::ConjTrans));
        axpy(r, -1.0, mul(w.cview(), fl(k, 0, m, k), Op::ConjTrans));
        return r;
      }
      case QuadrantState::TrmmLeading: {
        DenseMatrix<T> a_tl = DenseMatrix<T>::copy_of(a_hat_.block(0, 0, k, k));
        return oracle::two_sided_trmm<T>(hermitian_lower(std::as_const(a_tl)),
                                         TriangularView<T>(l_.block(0, 0, k, k), unit_));
      }
      case QuadrantState::PostMultiplied:
        return mul(fa(k, 0, m, k), fl(0, 0, k, k));
      case QuadrantState::LBlTimesCTl:
        return y_ref(k);
    }
    // Original and Final: the matching block of Ahat or C.
    const bool orig = s == QuadrantState::Original;
    const DenseMatrix<T>& src = orig ? full_a_ : c_;
    switch (q) {
      case Quadrant::TL: return DenseMatrix<T>::copy_of(src.block(0, 0, k, k));
      case Quadrant::BL: return DenseMatrix<T>::copy_of(src.block(k, 0, m, k));
      case Quadrant::BR: return DenseMatrix<T>::copy_of(src.block(k, k, m, m));
      case Quadrant::Y: break;
    }
    return DenseMatrix<T>(0, 0);
  }

  QuadrantCheck check(Quadrant q, QuadrantState s, index_t k, ConstMatrixView<T> got) const {
    QuadrantCheck c{q, s, 0.0, false, true};
    const bool lower = q == Quadrant::TL || q == Quadrant::BR;
    // With an empty TL every update term vanishes, so the rank-2k state is
    // Ahat itself and is checked bitwise like Original.
    const bool bitwise = s == QuadrantState::Original || (s == QuadrantState::Rank2kUpdated && k == 0);
    if (bitwise) {
      const index_t i0 = q == Quadrant::TL ? 0 : k;
      const index_t j0 = q == Quadrant::BR ? k : 0;
      ConstMatrixView<T> ref = a_hat_.block(i0, j0, got.rows(), got.cols());
      c.bitwise = true;
      c.bitwise_ok = lower ? bitwise_equal_lower<T>(got, ref) : bitwise_equal<T>(got, ref);
      c.residual = lower ? relative_distance_lower<T>(got, ref) : relative_distance<T>(got, ref);
      return c;
    }
    const DenseMatrix<T> ref = reference(s, q, k);
    c.residual = lower ? relative_distance_lower<T>(got, ref.cview()) : relative_distance<T>(got, ref.cview());
    return c;
  }

  InvariantSpec spec_;
  DenseMatrix<T> a_hat_;
  DenseMatrix<T> l_;
  Diag unit_;
  bool strict_;
  DenseMatrix<T> full_a_;
  DenseMatrix<T> full_l_;
  DenseMatrix<T> l_inv_;
  DenseMatrix<T> c_;
  WorksheetTrace trace_;
};

}  // namespace twosided
