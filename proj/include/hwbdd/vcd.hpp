#pragma once

// Value change dump traces: an in-memory form, a writer for the subset that
// GTKWave loads, and a minimal reader for that same subset.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwbdd/errors.hpp"

namespace hwbdd::vcd {

struct Signal {
  std::string name;
  unsigned width = 1;  // 1..64
  std::string id;

  friend bool operator==(const Signal&, const Signal&) = default;
};

struct Change {
  std::uint64_t time = 0;  // ns
  std::string id;
  std::uint64_t value = 0;

  friend bool operator==(const Change&, const Change&) = default;
};

/// Invariants: changes are time-ordered, reference declared ids and fit the
/// declared width; `end_time`, when set, is later than every change.
struct Trace {
  std::vector<Signal> signals;
  std::vector<Change> changes;
  std::optional<std::uint64_t> end_time;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Identifier code for the n-th declared signal: '!', '"', ... '~', then
/// two-character codes.
std::string id_code(std::size_t index);

/// Appends a signal with the next sequential id and returns that id.
std::string declare(Trace& trace, std::string name, unsigned width);

/// Checks the invariants above; returns a description of the first violation.
std::optional<std::string> check(const Trace& trace);

std::string write_vcd(const Trace& trace, std::string_view module_name);

/// Malformed document; `offset` is the byte position of the offending token.
class VcdFormatError : public FormatError {
 public:
  VcdFormatError(std::string message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses the subset emitted by write_vcd. Throws VcdFormatError.
Trace read_vcd_minimal(std::string_view bytes);

struct ReadResult {
  Trace trace;
  std::string module_name;
};
/// Same as read_vcd_minimal, also returning the `$scope module` name.
ReadResult read_vcd_with_scope(std::string_view bytes);

}  // namespace hwbdd::vcd
