#pragma once

#include <stdexcept>
#include <string>

namespace cooccur {

// Invalid input data or configuration. CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / stream failure. CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class DuplicateScanId : public ValidationError {
public:
  explicit DuplicateScanId(const std::string& scan_id)
      : ValidationError("duplicate scan_id: " + scan_id) {}
};

class MissingSubject : public ValidationError {
public:
  explicit MissingSubject(const std::string& scan_id)
      : ValidationError("no subject mapping for scan_id: " + scan_id) {}
};

class EmptyManifest : public ValidationError {
public:
  EmptyManifest() : ValidationError("manifest is empty") {}
};

class UnknownClass : public ValidationError {
public:
  explicit UnknownClass(const std::string& name)
      : ValidationError("unknown class: " + name) {}
};

class DegenerateClass : public ValidationError {
public:
  explicit DegenerateClass(const std::string& what)
      : ValidationError("degenerate class: " + what) {}
};

class InsufficientResamples : public ValidationError {
public:
  explicit InsufficientResamples(const std::string& what)
      : ValidationError("insufficient bootstrap resamples: " + what) {}
};

class InvalidSpec : public ValidationError {
public:
  explicit InvalidSpec(const std::string& what)
      : ValidationError("invalid spec: " + what) {}
};

}  // namespace cooccur
