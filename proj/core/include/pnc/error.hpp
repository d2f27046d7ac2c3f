#pragma once

#include <stdexcept>
#include <string>

namespace pnc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PNC_DEFINE_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

PNC_DEFINE_ERROR(NotPositiveDefinite);
PNC_DEFINE_ERROR(NotPsd);
PNC_DEFINE_ERROR(InvalidMatrix);
PNC_DEFINE_ERROR(UnsupportedOrder);
PNC_DEFINE_ERROR(InvalidRate);
PNC_DEFINE_ERROR(ZeroSymbol);
PNC_DEFINE_ERROR(DimensionMismatch);
PNC_DEFINE_ERROR(LengthMismatch);
PNC_DEFINE_ERROR(UnnormalizedPmf);
PNC_DEFINE_ERROR(UnsupportedDimension);
PNC_DEFINE_ERROR(ParseError);
PNC_DEFINE_ERROR(ConfigError);

#undef PNC_DEFINE_ERROR

}  // namespace pnc
