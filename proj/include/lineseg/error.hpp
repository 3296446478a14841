#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lineseg {

// Invalid geometric input: degenerate polygons, non-finite coordinates,
// violated preconditions on geometric operations.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (files, page sets, masks).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A non-fatal condition worth surfacing to the user. Warnings never change
// the outcome of a run; they are collected and reported.
struct Warning {
  std::string page_id;
  int line = -1;  // -1 when the warning is not tied to a line
  std::string message;

  bool operator==(const Warning&) const = default;
};

using Warnings = std::vector<Warning>;

inline void warn(Warnings* sink, std::string page_id, int line, std::string message) {
  if (sink != nullptr) sink->push_back({std::move(page_id), line, std::move(message)});
}

}  // namespace lineseg
