#pragma once

#include <stdexcept>
#include <string>

namespace lidforge {

// Base class for every error raised by the library. The CLI maps these to
// exit code 2 (data error); anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define LIDFORGE_ERROR(Name)                                    \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& msg) : Error(msg) {}       \
  }

// langmeta
LIDFORGE_ERROR(MalformedCode);
LIDFORGE_ERROR(ConflictingRegistration);
LIDFORGE_ERROR(MalformedLabel);
LIDFORGE_ERROR(UnknownLanguage);

// corpus
LIDFORGE_ERROR(InvalidEncoding);
LIDFORGE_ERROR(InvalidRecord);

// features / classifier
LIDFORGE_ERROR(EmptyCorpus);
LIDFORGE_ERROR(TooFewLabels);

// model files
LIDFORGE_ERROR(IoFailure);
LIDFORGE_ERROR(BadMagic);
LIDFORGE_ERROR(UnsupportedVersion);
LIDFORGE_ERROR(TruncatedFile);

// embedder
LIDFORGE_ERROR(EmptyInput);
LIDFORGE_ERROR(EmptyGroup);
LIDFORGE_ERROR(DegenerateCentroid);
LIDFORGE_ERROR(DegenerateBatch);

// hierarchy
LIDFORGE_ERROR(MissingConfusionMatrix);
LIDFORGE_ERROR(MissingCentroid);

// eval (EmptyInput shared with embedder)
LIDFORGE_ERROR(LengthMismatch);
LIDFORGE_ERROR(MissingKey);

#undef LIDFORGE_ERROR

}  // namespace lidforge
