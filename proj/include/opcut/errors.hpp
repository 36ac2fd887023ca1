#ifndef OPCUT_ERRORS_HPP
#define OPCUT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opcut {

// Base class for all library errors; `what()` carries the detail message.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define OPCUT_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                               \
        explicit Name(const std::string& msg = #Name) : Error(msg) {}   \
    }

OPCUT_DEFINE_ERROR(DimensionMismatch);
OPCUT_DEFINE_ERROR(NotHermitian);
OPCUT_DEFINE_ERROR(ConvergenceFailure);
OPCUT_DEFINE_ERROR(NonFiniteValue);
OPCUT_DEFINE_ERROR(BadDimension);
OPCUT_DEFINE_ERROR(UnknownModel);
OPCUT_DEFINE_ERROR(BadParams);
OPCUT_DEFINE_ERROR(SingularResolvent);
OPCUT_DEFINE_ERROR(NotHermitianH);
OPCUT_DEFINE_ERROR(ProjectionMismatch);
OPCUT_DEFINE_ERROR(SpectrumBelowOne);
OPCUT_DEFINE_ERROR(WrongModelFamily);
OPCUT_DEFINE_ERROR(QuadratureBudgetExceeded);
OPCUT_DEFINE_ERROR(NotNilpotent);
OPCUT_DEFINE_ERROR(NonDiagonalizable);
OPCUT_DEFINE_ERROR(ConfigError);
OPCUT_DEFINE_ERROR(InsufficientPoints);
OPCUT_DEFINE_ERROR(IoError);

#undef OPCUT_DEFINE_ERROR

} // namespace opcut

#endif
