#pragma once

#include <stdexcept>
#include <string>

namespace mksys {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MKSYS_ERROR(Name)            \
  class Name : public Error {        \
   public:                           \
    using Error::Error;              \
  };

MKSYS_ERROR(ObjectMismatch)
MKSYS_ERROR(InstanceMismatch)
MKSYS_ERROR(BadFactorSelection)
MKSYS_ERROR(MarginalMismatch)
MKSYS_ERROR(InvalidKernel)
MKSYS_ERROR(BoundaryMismatch)
MKSYS_ERROR(PreconditionViolation)
MKSYS_ERROR(ShapeMismatch)
MKSYS_ERROR(NaturalityViolation)
MKSYS_ERROR(ParseError)
MKSYS_ERROR(ValidationError)
MKSYS_ERROR(UnknownSuite)

#undef MKSYS_ERROR

}  // namespace mksys
