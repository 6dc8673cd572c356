#pragma once

#include <stdexcept>
#include <string>

namespace ineqreg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct EmptyInterval : Error { using Error::Error; };
struct InfeasibleStart : Error { using Error::Error; };
struct SingularTransform : Error { using Error::Error; };
struct InvalidDegreesOfFreedom : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct PreferredSingular : Error { using Error::Error; };
struct NoFullRankBlock : Error { using Error::Error; };
struct NonPositiveEta : Error { using Error::Error; };
struct NotSquare : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct EmptyChain : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct MissingValue : Error { using Error::Error; };
struct NonPositiveMse : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace ineqreg
