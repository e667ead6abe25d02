#include "sctk/errors.hpp"

namespace sctk {

  char const* error_name(ErrorCode c) noexcept {
    switch (c) {
      case ErrorCode::Parse: return "Parse";
      case ErrorCode::Precondition: return "Precondition";
      case ErrorCode::EmptyAfterReduction: return "EmptyAfterReduction";
      case ErrorCode::TooLarge: return "TooLarge";
      case ErrorCode::NotDecomposable: return "NotDecomposable";
      case ErrorCode::InconsistentFactors: return "InconsistentFactors";
      case ErrorCode::Budget: return "Budget";
      case ErrorCode::InsufficientRelators: return "InsufficientRelators";
      case ErrorCode::SearchExhausted: return "SearchExhausted";
      case ErrorCode::InsufficientComponents: return "InsufficientComponents";
      case ErrorCode::NoInteriorVertex: return "NoInteriorVertex";
      case ErrorCode::SymbolClash: return "SymbolClash";
      case ErrorCode::InvalidMap: return "InvalidMap";
      case ErrorCode::NothingToFold: return "NothingToFold";
      case ErrorCode::NotFreelyInverse: return "NotFreelyInverse";
      case ErrorCode::NoLift: return "NoLift";
      case ErrorCode::NotSmallCancellation: return "NotSmallCancellation";
      case ErrorCode::AssertionFailed: return "AssertionFailed";
    }
    return "Unknown";
  }

}  // namespace sctk
