#pragma once

#include <stdexcept>
#include <string>

namespace nszsl {

// Base for every error the library raises. `category()` is a stable,
// machine-parsable tag; the CLI prints it as "error: <category>: <message>".
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

#define NSZSL_DEFINE_ERROR(Name)                             \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& message)                \
        : Error(#Name, message) {}                           \
  }

// Numerical kernels.
NSZSL_DEFINE_ERROR(DimensionMismatch);
NSZSL_DEFINE_ERROR(NonSymmetric);
NSZSL_DEFINE_ERROR(NoConvergence);
NSZSL_DEFINE_ERROR(NotPositiveDefinite);
NSZSL_DEFINE_ERROR(SingularPencil);
NSZSL_DEFINE_ERROR(SingularGram);

// Text pipeline and data ingestion.
NSZSL_DEFINE_ERROR(EmptyVocabulary);
NSZSL_DEFINE_ERROR(AllZeroColumn);
NSZSL_DEFINE_ERROR(TooFewClasses);
NSZSL_DEFINE_ERROR(EmptyTestSet);
NSZSL_DEFINE_ERROR(ParseError);
NSZSL_DEFINE_ERROR(NonFiniteValue);
NSZSL_DEFINE_ERROR(UnknownClass);
NSZSL_DEFINE_ERROR(SchemaVersionMismatch);

#undef NSZSL_DEFINE_ERROR

}  // namespace nszsl
