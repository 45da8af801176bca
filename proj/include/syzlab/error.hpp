#pragma once

#include <stdexcept>
#include <string>

namespace syzlab {

enum class Errc {
    Parse,
    Schema,
    ChartMismatch,
    DegreeOutOfRange,
    WrongBidegree,
    UnsupportedOrder,
    NonPeriodic,
    Incompatible,
    Positivity,
    DependsOnFibre,
    NotClosed,
    DegenerateJacobian,
    NotExpressible,
    DegreeMismatch,
    NonAffineFamily,
    NonCellular,
    BoundarySquare,
    MissingModel,
    RelationViolated,
    NonInvertible,
    PatternViolation,
    InvariantViolation,
    NullFibreClass,
    NotAligned,
    NotPrimitive,
    NotIsotropic,
    IrrationalPhase,
    DivisionByZero,
    Internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace syzlab
