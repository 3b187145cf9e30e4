#pragma once

#include <stdexcept>
#include <string>

namespace vespa {

/// Base of every error the engine raises. `code()` maps onto the C API status
/// values and the CLI exit codes.
class Error : public std::runtime_error {
public:
  enum class Code { Usage = 1, Data = 2, BackendUnavailable = 3, Internal = 4 };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

private:
  Code code_;
};

/// Malformed or invariant-violating profile / weights / backends configuration.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(Code::Data, what) {}
};

/// Malformed input data (documents, eval sets, stores) or I/O failure.
class DataError : public Error {
public:
  explicit DataError(const std::string& what) : Error(Code::Data, what) {}
};

/// A remote QA backend could not be reached after its retry budget.
class BackendUnavailable : public Error {
public:
  BackendUnavailable(std::string backend, const std::string& what)
      : Error(Code::BackendUnavailable, what), backend_(std::move(backend)) {}
  const std::string& backend() const noexcept { return backend_; }

private:
  std::string backend_;
};

/// Failure of the extraction pipeline as a whole for one document.
class PipelineError : public Error {
public:
  PipelineError(Code code, const std::string& what) : Error(code, what) {}
};

}  // namespace vespa
