#pragma once

#include <stdexcept>
#include <string>

namespace spinframe {

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  Arity,
  Domain,
  ChartDomain,
  InvalidModel,
  BasisMismatch,
  ImmersionDegenerate,
  Stencil,
  SpinorVanishes,
  HalfSpinorVanishes,
  CompatGateFailed,
  StepUnstable,
  ChartExit,
  FrameDrift,
  GridMismatch,
  Input,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, const std::string& what, std::size_t offset)
      : Error(kind, what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace spinframe
