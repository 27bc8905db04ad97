#pragma once

#include <stdexcept>
#include <string>

namespace lexpalo {

// Numeric codes double as process exit statuses for the command-line tool.
enum class ErrorCode : int {
  kIo = 3,
  kFormat = 4,
  kDuplicateId = 5,
  kEmptyCorpus = 6,
  kStratumTooSmall = 7,
  kInvalidArgument = 8,
  kEmptyDocument = 9,
  kWindowTooLong = 10,
  kDegenerateFit = 11,
  kVocabularyMismatch = 12,
  kAlphaNonPositive = 13,
  kLabelMismatch = 14,
  kUnknownClass = 15,
  kInconsistentClasses = 16,
  kNoThreshold = 17,
  kNorm = 18,
  kDegenerate = 19,
  kModelFormat = 20,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define LEXPALO_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  }

LEXPALO_DEFINE_ERROR(IoError, kIo);
LEXPALO_DEFINE_ERROR(DuplicateIdError, kDuplicateId);
LEXPALO_DEFINE_ERROR(EmptyCorpusError, kEmptyCorpus);
LEXPALO_DEFINE_ERROR(StratumTooSmallError, kStratumTooSmall);
LEXPALO_DEFINE_ERROR(InvalidArgumentError, kInvalidArgument);
LEXPALO_DEFINE_ERROR(EmptyDocumentError, kEmptyDocument);
LEXPALO_DEFINE_ERROR(WindowTooLongError, kWindowTooLong);
LEXPALO_DEFINE_ERROR(DegenerateFitError, kDegenerateFit);
LEXPALO_DEFINE_ERROR(VocabularyMismatchError, kVocabularyMismatch);
LEXPALO_DEFINE_ERROR(AlphaNonPositiveError, kAlphaNonPositive);
LEXPALO_DEFINE_ERROR(LabelMismatchError, kLabelMismatch);
LEXPALO_DEFINE_ERROR(UnknownClassError, kUnknownClass);
LEXPALO_DEFINE_ERROR(InconsistentClassesError, kInconsistentClasses);
LEXPALO_DEFINE_ERROR(NoThresholdError, kNoThreshold);
LEXPALO_DEFINE_ERROR(NormError, kNorm);
LEXPALO_DEFINE_ERROR(DegenerateError, kDegenerate);
LEXPALO_DEFINE_ERROR(ModelFormatError, kModelFormat);

#undef LEXPALO_DEFINE_ERROR

/// Malformed input record. `line` is 1-based; 0 when not tied to a line.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error(ErrorCode::kFormat,
              line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lexpalo
