#pragma once

#include <stdexcept>
#include <string>

namespace gbv {

// Base class for all pipeline errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct IntegrityError : Error { using Error::Error; };
struct SpanError : Error { using Error::Error; };
struct UnknownFrame : Error { using Error::Error; };
struct ForeignFrameElement : Error { using Error::Error; };
struct UnknownLexicalUnit : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct OverrideTargetError : Error { using Error::Error; };
struct EmptyClassError : Error { using Error::Error; };
struct EmptyRegistryError : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct SingleClassError : Error { using Error::Error; };
struct NonFiniteError : Error { using Error::Error; };
struct TooFewSamplesError : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct PatternError : Error { using Error::Error; };
struct OverlapError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace gbv
