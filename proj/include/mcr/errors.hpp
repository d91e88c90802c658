#pragma once

#include <stdexcept>
#include <string>

namespace mcr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometry-level input degeneracies.
struct DegenerateRay : Error { using Error::Error; };
struct DegenerateSegment : Error { using Error::Error; };
struct CoincidentCircles : Error { using Error::Error; };
struct NotCocircular : Error { using Error::Error; };
struct PointAtCenter : Error { using Error::Error; };
struct PointOnBoundary : Error { using Error::Error; };
struct PoleProjection : Error { using Error::Error; };
struct OverlappingCurves : Error { using Error::Error; };
struct InvalidScp : Error { using Error::Error; };

// Front-end errors.
struct SchemaError : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct IncompatibleMode : Error { using Error::Error; };
struct InternalError : Error { using Error::Error; };

}  // namespace mcr
