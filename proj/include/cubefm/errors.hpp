#pragma once

#include <stdexcept>
#include <string>

namespace cubefm {

enum class Errc {
  FocalPointProjection,
  RankDeficientCamera,
  LengthMismatch,
  ZeroMatrix,
  ZeroVector,
  InsufficientPoints,
  DegenerateInput,
  DegenerateCloud,
  NonAffinePoint,
  CoincidentCenters,
  IdenticallyZeroPencil,
  DependentInputs,
  PencilOfQuadrics,
  NoQuadric,
  RankDeficient,
  AtInfinity,
  ExhaustedRetries,
  DegenerateIntersection,
  InvalidArgument,
  ParseError,
};

const char* to_string(Errc code) noexcept;

// All library failures are reported through this exception. DegenerateInput
// additionally carries the observed kernel dimension.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, int kernel_dim = -1);

  Errc code() const noexcept { return code_; }
  int kernel_dim() const noexcept { return kernel_dim_; }

 private:
  Errc code_;
  int kernel_dim_;
};

}  // namespace cubefm
