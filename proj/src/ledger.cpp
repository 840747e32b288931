#include "twosided/ledger.hpp"

namespace twosided {

std::string_view kernel_class_name(KernelClass c) {
  switch (c) {
    case KernelClass::Gemm: return "GEMM";
    case KernelClass::Hemm: return "HEMM";
    case KernelClass::Her2k: return "HER2K";
    case KernelClass::Herk: return "HERK";
    case KernelClass::Trsm: return "TRSM";
    case KernelClass::Trmm: return "TRMM";
    case KernelClass::Chol: return "CHOL";
    case KernelClass::TwoSidedBase: return "TWO_SIDED_BASE";
    case KernelClass::Other: return "OTHER";
  }
  return "OTHER";
}

std::uint64_t FlopLedger::total() const {
  std::uint64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

FlopLedger& FlopLedger::operator+=(const FlopLedger& other) {
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

}  // namespace twosided
