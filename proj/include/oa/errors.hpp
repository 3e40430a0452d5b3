#ifndef OA_ERRORS_HPP
#define OA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oa {

// Root of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --- rdf -------------------------------------------------------------------

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class InvalidIri : public Error {
public:
  using Error::Error;
};

class BlankNodeNotAllowed : public Error {
public:
  using Error::Error;
};

class IsomorphismBoundExceeded : public Error {
public:
  using Error::Error;
};

// --- model -----------------------------------------------------------------

class CardinalityError : public Error {
public:
  using Error::Error;
};

class InvalidAnnotation : public Error {
public:
  using Error::Error;
};

class NotAnAnnotation : public Error {
public:
  using Error::Error;
};

// Carries the finding codes (E001, E002, ...) that made a graph unmappable.
class ModelViolation : public Error {
public:
  ModelViolation(std::vector<std::string> codes, const std::string& what)
      : Error(what), codes_(std::move(codes)) {}
  const std::vector<std::string>& codes() const noexcept { return codes_; }

private:
  std::vector<std::string> codes_;
};

class NoUrnBody : public Error {
public:
  using Error::Error;
};

// --- fragments -------------------------------------------------------------

class FragmentParseError : public Error {
public:
  FragmentParseError(std::size_t offset, const std::string& what)
      : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class InvalidSelector : public Error {
public:
  using Error::Error;
};

class AmbiguousFragment : public Error {
public:
  using Error::Error;
};

class EmptyInterval : public Error {
public:
  using Error::Error;
};

class FamilyMismatch : public Error {
public:
  using Error::Error;
};

// --- constraints -----------------------------------------------------------

class UnsupportedSvg : public Error {
public:
  using Error::Error;
};

class MalformedSvg : public Error {
public:
  using Error::Error;
};

class PercentNotConvertible : public Error {
public:
  using Error::Error;
};

// --- temporal --------------------------------------------------------------

class ConflictingTemporalMarks : public Error {
public:
  using Error::Error;
};

class UnknownOriginal : public Error {
public:
  using Error::Error;
};

class NotTimeAnchored : public Error {
public:
  using Error::Error;
};

class InvalidArchiveIndex : public Error {
public:
  using Error::Error;
};

class InvalidDateTime : public Error {
public:
  using Error::Error;
};

// --- server ----------------------------------------------------------------

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace oa

#endif  // OA_ERRORS_HPP
