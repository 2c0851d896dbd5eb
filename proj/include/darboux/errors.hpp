#pragma once

#include <stdexcept>
#include <string>

namespace darboux {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes through `category()`.
class Error : public std::runtime_error {
 public:
  enum class Category { Domain, Usage, Numeric, Io };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

#define DARBOUX_DEFINE_ERROR(Name, Cat)                                     \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what)                                  \
        : Error(Category::Cat, std::string(#Name ": ") + what) {}           \
  };

// Point or argument outside the region where a formula is defined.
DARBOUX_DEFINE_ERROR(DomainError, Domain)
DARBOUX_DEFINE_ERROR(InvalidObservable, Domain)
DARBOUX_DEFINE_ERROR(ModelMismatch, Domain)
DARBOUX_DEFINE_ERROR(ZeroObservable, Domain)
DARBOUX_DEFINE_ERROR(ChartSingular, Domain)
DARBOUX_DEFINE_ERROR(DegenerateRoots, Domain)
DARBOUX_DEFINE_ERROR(IncompatibleChart, Domain)
DARBOUX_DEFINE_ERROR(UnsupportedOrder, Domain)
DARBOUX_DEFINE_ERROR(PoleInB, Domain)
DARBOUX_DEFINE_ERROR(RangeError, Domain)
DARBOUX_DEFINE_ERROR(JetOrderExceeded, Domain)
DARBOUX_DEFINE_ERROR(SpectrumUnbounded, Domain)

// Iterative numerics that failed to produce an answer.
DARBOUX_DEFINE_ERROR(NoConvergence, Numeric)
DARBOUX_DEFINE_ERROR(DomainExit, Numeric)
DARBOUX_DEFINE_ERROR(NotBracketed, Numeric)
DARBOUX_DEFINE_ERROR(NodeMismatch, Numeric)

DARBOUX_DEFINE_ERROR(UsageError, Usage)
DARBOUX_DEFINE_ERROR(IoError, Io)

#undef DARBOUX_DEFINE_ERROR

}  // namespace darboux
