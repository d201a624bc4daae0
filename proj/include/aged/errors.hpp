#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace aged {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad run configuration (flag values, parameter ranges). CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed input file. CLI exit code 3.
struct FormatError : Error {
  FormatError(const std::filesystem::path& path, std::size_t line,
              const std::string& what)
      : Error(path.string() + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  explicit FormatError(const std::string& what) : Error(what) {}
  std::size_t line_number = 0;
};

// A resource cap (match enumeration limit) was hit. CLI exit code 4.
struct CapExceeded : Error {
  using Error::Error;
};

}  // namespace aged
