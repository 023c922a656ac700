#pragma once

#include <stdexcept>
#include <string>

namespace msiq {

/// A read position falls outside every subexon of the gene (intron or
/// intergenic); such reads cannot be summarized against the gene model.
class UnmappablePositionError : public std::runtime_error {
 public:
  explicit UnmappablePositionError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A (read, isoform) pair was used where compatibility is required.
class IncompatibleReadError : public std::runtime_error {
 public:
  explicit IncompatibleReadError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Annotation that cannot be expressed as whole subexons.
class MalformedAnnotationError : public std::runtime_error {
 public:
  explicit MalformedAnnotationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Every read of a sample was dropped (no row kept a positive entry).
class NoUsableReadsError : public std::runtime_error {
 public:
  explicit NoUsableReadsError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace msiq
