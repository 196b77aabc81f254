#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rockmodel {

enum class ErrorCode {
  kInvalidCoordinate,
  kOutOfFrame,
  kInvalidPolygon,
  kInvertedAltitude,
  kWrongPlane,
  kEmptyInterval,
  kOrthogonality,
  kResourceLimit,
  kOpenMesh,
  kXmlParse,
  kCoordinate,
  kOpenRing,
  kDegenerateRing,
  kValidation,
  kProject,
  kIo,
  kUsage,
  kNoModel,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; code() lets callers branch
// without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rockmodel
