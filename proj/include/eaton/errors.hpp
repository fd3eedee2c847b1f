// Error types shared across the library. Every domain failure derives from
// eaton::Error so callers can catch one base type at the CLI boundary.
#pragma once

#include <stdexcept>
#include <string>

namespace eaton {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lattice layer
struct DegenerateBasis : Error { using Error::Error; };
struct NotUnimodular : Error { using Error::Error; };
struct NotDisjoint : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct BoxTooLarge : Error { using Error::Error; };

// Integer / rational layer
struct Overflow : Error { using Error::Error; };
struct ExcludedPoint : Error { using Error::Error; };

// Predictor
struct NotHyperbolic : Error { using Error::Error; };
struct NotFixed : Error { using Error::Error; };
struct ZeroClass : Error { using Error::Error; };
struct DegenerateDatum : Error { using Error::Error; };

// Ray tracing
struct SearchExhausted : Error { using Error::Error; };
struct NoHitWithinCap : Error { using Error::Error; };
struct NonPositiveRadius : Error { using Error::Error; };

// Analysis
struct EventMismatch : Error { using Error::Error; };
struct ZeroCoefficients : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };

}  // namespace eaton
