#pragma once

#include <stdexcept>
#include <string>

namespace lichen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lookup for a license that has no corpus entry (Unknown, None).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

class EmptyCandidatesError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class ArchiveError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ProviderError : public Error {
 public:
  using Error::Error;
};

// A non-fatal problem attached to a path (a module dir, a file, or a
// dependency coordinate).
struct Warning {
  std::string path;
  std::string message;

  friend bool operator==(const Warning&, const Warning&) = default;
  friend auto operator<=>(const Warning&, const Warning&) = default;
};

}  // namespace lichen
