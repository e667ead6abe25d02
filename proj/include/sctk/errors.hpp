#pragma once

#include <stdexcept>  // for runtime_error
#include <string>     // for string

namespace sctk {

  //! Stable error codes; the CLI prints the name returned by error_name().
  enum class ErrorCode {
    Parse,
    Precondition,
    EmptyAfterReduction,
    TooLarge,
    NotDecomposable,
    InconsistentFactors,
    Budget,
    InsufficientRelators,
    SearchExhausted,
    InsufficientComponents,
    NoInteriorVertex,
    SymbolClash,
    InvalidMap,
    NothingToFold,
    NotFreelyInverse,
    NoLift,
    NotSmallCancellation,
    AssertionFailed
  };

  char const* error_name(ErrorCode c) noexcept;

  class Error : public std::runtime_error {
   public:
    Error(ErrorCode c, std::string const& msg)
        : std::runtime_error(std::string(error_name(c)) + ": " + msg),
          _code(c),
          _detail(msg) {}

    ErrorCode code() const noexcept {
      return _code;
    }
    //! The message without the code prefix.
    std::string const& detail() const noexcept {
      return _detail;
    }

   private:
    ErrorCode   _code;
    std::string _detail;
  };

  [[noreturn]] inline void fail(ErrorCode c, std::string const& msg) {
    throw Error(c, msg);
  }

}  // namespace sctk
