#include "rockmodel/errors.hpp"

namespace rockmodel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidCoordinate: return "invalid-coordinate";
    case ErrorCode::kOutOfFrame: return "out-of-frame";
    case ErrorCode::kInvalidPolygon: return "invalid-polygon";
    case ErrorCode::kInvertedAltitude: return "inverted-altitude";
    case ErrorCode::kWrongPlane: return "wrong-plane";
    case ErrorCode::kEmptyInterval: return "empty-interval";
    case ErrorCode::kOrthogonality: return "orthogonality";
    case ErrorCode::kResourceLimit: return "resource-limit";
    case ErrorCode::kOpenMesh: return "open-mesh";
    case ErrorCode::kXmlParse: return "xml-parse";
    case ErrorCode::kCoordinate: return "coordinate";
    case ErrorCode::kOpenRing: return "open-ring";
    case ErrorCode::kDegenerateRing: return "degenerate-ring";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kProject: return "project";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kNoModel: return "no-model";
  }
  return "unknown";
}

}  // namespace rockmodel
