#pragma once

#include <stdexcept>
#include <string>

namespace sse {

// Base class for all failures raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SSE_DEFINE_ERROR(NAME)             \
  class NAME : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

SSE_DEFINE_ERROR(DimensionMismatch);
SSE_DEFINE_ERROR(NonFinite);
SSE_DEFINE_ERROR(IterationLimit);
SSE_DEFINE_ERROR(SingularCovariance);
SSE_DEFINE_ERROR(OutOfBounds);
SSE_DEFINE_ERROR(ParseError);
SSE_DEFINE_ERROR(ConfigInvalid);
SSE_DEFINE_ERROR(InvalidAction);
SSE_DEFINE_ERROR(EmptyHistory);
SSE_DEFINE_ERROR(NoValidActions);
SSE_DEFINE_ERROR(InfeasibleBudget);
SSE_DEFINE_ERROR(DegenerateSample);
SSE_DEFINE_ERROR(IoError);

#undef SSE_DEFINE_ERROR

}  // namespace sse
