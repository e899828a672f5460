#pragma once

#include <stdexcept>
#include <string>

namespace kreinphoton {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define KREINPHOTON_DECLARE_ERROR(Name)        \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what_arg) \
        : Error(#Name ": " + what_arg) {}      \
  }

/// The apex of the light cone (p = 0) is a singular point and is never a valid
/// ConePoint.
KREINPHOTON_DECLARE_ERROR(ApexExcluded);
KREINPHOTON_DECLARE_ERROR(ConfigError);
KREINPHOTON_DECLARE_ERROR(NumericalError);
KREINPHOTON_DECLARE_ERROR(InvalidSpinor);
/// Radius outside the supported window [1e-6, 1e6].
KREINPHOTON_DECLARE_ERROR(RangeError);
/// Point too close to the p3 axis where the transverse frame is a convention.
KREINPHOTON_DECLARE_ERROR(AxisZone);
KREINPHOTON_DECLARE_ERROR(StencilUnderflow);
KREINPHOTON_DECLARE_ERROR(DegenerateInput);
KREINPHOTON_DECLARE_ERROR(InvolutionBroken);
KREINPHOTON_DECLARE_ERROR(SpanResidualTooLarge);
KREINPHOTON_DECLARE_ERROR(IOError);
/// Oscillatory quadrature whose refinement estimate is too large.
KREINPHOTON_DECLARE_ERROR(OscillationWarning);

#undef KREINPHOTON_DECLARE_ERROR

}  // namespace kreinphoton
