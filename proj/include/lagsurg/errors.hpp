#pragma once

#include <stdexcept>
#include <string>

namespace lagsurg {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define LAGSURG_ERROR_TYPE(Name)                                      \
    struct Name : Error {                                             \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

LAGSURG_ERROR_TYPE(ProjectionOutsideChart);
LAGSURG_ERROR_TYPE(OutsidePolytopeInterior);
LAGSURG_ERROR_TYPE(DegenerateJacobian);
LAGSURG_ERROR_TYPE(OpenBoundary);
LAGSURG_ERROR_TYPE(TangencyUnresolved);
LAGSURG_ERROR_TYPE(AngleMismatch);
LAGSURG_ERROR_TYPE(ContainmentViolation);
LAGSURG_ERROR_TYPE(BaseOffCircle);
LAGSURG_ERROR_TYPE(TransitionInconsistent);
LAGSURG_ERROR_TYPE(InadmissibleParameters);
LAGSURG_ERROR_TYPE(DegenerateParameter);
LAGSURG_ERROR_TYPE(NoRoot);
LAGSURG_ERROR_TYPE(BoundaryMismatch);
LAGSURG_ERROR_TYPE(ChartOverflow);
LAGSURG_ERROR_TYPE(SamplingTooCoarse);
LAGSURG_ERROR_TYPE(NotLagrangianPlane);
LAGSURG_ERROR_TYPE(SceneError);

#undef LAGSURG_ERROR_TYPE

}  // namespace lagsurg
