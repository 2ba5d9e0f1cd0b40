#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fisher_noise {

// Base of every library error. `code()` is a stable machine-readable
// identifier (also used by the CLI's JSON error output); `what()` carries
// the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define FISHER_NOISE_DEFINE_ERROR(Name)                       \
  struct Name : Error {                                       \
    explicit Name(const std::string& d) : Error(#Name, d) {}  \
  }

FISHER_NOISE_DEFINE_ERROR(InvalidSupport);
FISHER_NOISE_DEFINE_ERROR(InvalidBudget);
FISHER_NOISE_DEFINE_ERROR(InvalidQuality);
FISHER_NOISE_DEFINE_ERROR(GridTooCoarse);
FISHER_NOISE_DEFINE_ERROR(GridMismatch);
FISHER_NOISE_DEFINE_ERROR(DegenerateDensity);
FISHER_NOISE_DEFINE_ERROR(DomainTooSmall);
FISHER_NOISE_DEFINE_ERROR(OutOfRange);
FISHER_NOISE_DEFINE_ERROR(IndexOutOfRange);
FISHER_NOISE_DEFINE_ERROR(NoConvergence);
FISHER_NOISE_DEFINE_ERROR(NonConvergentTruncation);
FISHER_NOISE_DEFINE_ERROR(BudgetUnreachable);
FISHER_NOISE_DEFINE_ERROR(NotApplicable);
FISHER_NOISE_DEFINE_ERROR(ParseError);
FISHER_NOISE_DEFINE_ERROR(IoError);

#undef FISHER_NOISE_DEFINE_ERROR

}  // namespace fisher_noise
