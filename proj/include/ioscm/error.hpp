#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ioscm {

enum class ErrorCode {
  UnknownNode,
  InvalidGraph,
  SccBoundViolation,
  InputMarginalization,
  NameCollision,
  LatentInQuery,
  GraphTooLarge,
  MalformedQuery,
  MalformedSpec,
  CaseMismatch,
  PoolTooLarge,
  EmptyTarget,
  DomainGap,
  SingularSystem,
  SingularConditioning,
  MissingSubLoopMechanism,
  NotUniquelySolvable,
  StateSpaceTooLarge,
  InvalidModel,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type. `field()` names the
// offending input (node id, role name, ...) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {})
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace ioscm
