#pragma once

#include <stdexcept>
#include <string>

namespace hrgm {

// All library failures carry a stable machine-readable kind next to the
// human-readable message. Kinds are part of the public contract; the CLI
// surfaces them verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message) {
  throw Error(kind, message);
}

namespace errk {
// Input shape and validation.
inline constexpr const char* BadInput = "BadInput";
inline constexpr const char* NotSymmetric = "NotSymmetric";
inline constexpr const char* NonzeroDiagonal = "NonzeroDiagonal";
// Cone membership and rank.
inline constexpr const char* NotStrictlyCND = "NotStrictlyCND";
inline constexpr const char* NotCND = "NotCND";
inline constexpr const char* KernelViolation = "KernelViolation";
inline constexpr const char* RankDeficient = "RankDeficient";
inline constexpr const char* SingularBorder = "SingularBorder";
inline constexpr const char* SingularConditioning = "SingularConditioning";
// Graph structure.
inline constexpr const char* NotChordal = "NotChordal";
inline constexpr const char* Disconnected = "Disconnected";
inline constexpr const char* TooLarge = "TooLarge";
inline constexpr const char* SizeCap = "SizeCap";
inline constexpr const char* CompleteGraph = "CompleteGraph";
inline constexpr const char* NotTwoCliqueCover = "NotTwoCliqueCover";
// Completion and degree computations.
inline constexpr const char* CliqueBlockNotCND = "CliqueBlockNotCND";
inline constexpr const char* DegenerateData = "DegenerateData";
inline constexpr const char* DegenerateSample = "DegenerateSample";
// Sampling and estimation.
inline constexpr const char* InsufficientHalfspaceData = "InsufficientHalfspaceData";
inline constexpr const char* EmptyExceedanceSet = "EmptyExceedanceSet";
// CLI.
inline constexpr const char* UnknownTarget = "UnknownTarget";
inline constexpr const char* Unseeded = "Unseeded";
}  // namespace errk

}  // namespace hrgm
