#pragma once

#include <stdexcept>
#include <string>

namespace projlie {

/// Base of every error raised by the library. Each subclass names one
/// failure mode so callers (and the CLI) can react without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// jets
class DivisionByZeroJet : public Error { public: using Error::Error; };
class DegreeMismatch : public Error { public: using Error::Error; };
class JetIndexError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class SingularPath : public Error { public: using Error::Error; };
class QuadratureNonconvergence : public Error { public: using Error::Error; };

// geometry / metrizability
class DegenerateMetric : public Error { public: using Error::Error; };
class DegenerateSolution : public Error { public: using Error::Error; };
class UndefinedCombination : public Error { public: using Error::Error; };
class IllConditionedFit : public Error { public: using Error::Error; };

// catalog
class ParamConstraintViolation : public Error { public: using Error::Error; };

// dynamics
class DomainExit : public Error { public: using Error::Error; };
class StepUnderflow : public Error { public: using Error::Error; };
class EmptyTrajectory : public Error { public: using Error::Error; };

// analysis
class NotNullForm : public Error { public: using Error::Error; };

// cli
class ConfigError : public Error { public: using Error::Error; };

}  // namespace projlie
