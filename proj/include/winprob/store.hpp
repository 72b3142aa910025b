#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "winprob/error.hpp"
#include "winprob/estimators.hpp"

namespace winprob {

inline constexpr int kArtifactFormatVersion = 1;

class ArtifactError : public Error {
 public:
  using Error::Error;
};
class VersionError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};
class EmptyArtifactError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};

/// A fitted method as persisted on disk: the payload file holds the surface
/// (`t,lead,prob,missing`) or the probit parameters, and `<path>.meta` holds
/// key=value metadata including the format version.
struct ArtifactBundle {
  int format_version = kArtifactFormatVersion;
  Method method = Method::Mle;
  std::variant<Surface, ProbitParams> payload;
  Provenance provenance;
  std::string config_hash;

  bool operator==(const ArtifactBundle&) const = default;
};

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string config_hash(std::string_view text);

ArtifactBundle make_bundle(const FittedModel& model, std::string_view config_text);
FittedModel to_model(const ArtifactBundle& bundle);

std::string meta_path(const std::string& path);

/// Writes `path` and `path.meta`. Reals use 17 significant digits, so the
/// output is byte-identical for identical bundles. Throws ArtifactError on I/O failure.
void save(const ArtifactBundle& bundle, const std::string& path);

/// Throws VersionError, EmptyArtifactError, ParseError (with byte offset) or
/// ValidationError for out-of-range payload values.
ArtifactBundle load(const std::string& path);

}  // namespace winprob
