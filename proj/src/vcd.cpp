#include "hwbdd/vcd.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hwbdd::vcd {
namespace {

constexpr char kFirstId = '!';
constexpr char kLastId = '~';
constexpr std::size_t kIdRadix = kLastId - kFirstId + 1;  // 94

std::uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

std::string binary(std::uint64_t value) {
  if (value == 0) return "0";
  std::string out;
  while (value) {
    out.push_back((value & 1U) ? '1' : '0');
    value >>= 1;
  }
  return {out.rbegin(), out.rend()};
}

bool has_space(std::string_view s) {
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c))) return true;
  return false;
}

struct Token {
  std::string_view text;
  std::size_t offset;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  ReadResult run() {
    header();
    body();
    return std::move(result_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
    throw VcdFormatError(msg, offset);
  }

  std::optional<Token> next() {
    while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      ++pos_;
    if (pos_ >= bytes_.size()) return std::nullopt;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      ++pos_;
    return Token{bytes_.substr(start, pos_ - start), start};
  }

  Token require(std::string_view what) {
    auto tok = next();
    if (!tok) fail("unexpected end of input, expected " + std::string(what), bytes_.size());
    return *tok;
  }

  std::vector<Token> until_end(std::string_view section) {
    std::vector<Token> out;
    for (;;) {
      const Token t = require("$end closing " + std::string(section));
      if (t.text == "$end") return out;
      out.push_back(t);
    }
  }

  void header() {
    int depth = 0;
    bool scoped = false;
    for (;;) {
      const Token t = require("$enddefinitions");
      if (t.text == "$date" || t.text == "$version" || t.text == "$comment") {
        until_end(t.text);
      } else if (t.text == "$timescale") {
        const auto args = until_end(t.text);
        std::string joined;
        for (const auto& a : args) joined += a.text;
        if (joined != "1ns") fail("unsupported timescale '" + joined + "'", t.offset);
      } else if (t.text == "$scope") {
        const auto args = until_end(t.text);
        if (args.size() != 2) fail("malformed $scope", t.offset);
        if (scoped) fail("nested scopes are not supported", t.offset);
        result_.module_name = std::string(args[1].text);
        scoped = true;
        ++depth;
      } else if (t.text == "$upscope") {
        until_end(t.text);
        if (--depth < 0) fail("$upscope without $scope", t.offset);
      } else if (t.text == "$var") {
        var(t);
      } else if (t.text == "$enddefinitions") {
        until_end(t.text);
        if (depth != 0) fail("unclosed $scope", t.offset);
        return;
      } else {
        fail("unexpected token '" + std::string(t.text) + "' in header", t.offset);
      }
    }
  }

  void var(const Token& at) {
    const auto args = until_end("$var");
    if (args.size() != 4 && args.size() != 5) fail("malformed $var", at.offset);
    if (args[0].text != "wire" && args[0].text != "reg")
      fail("unsupported var type '" + std::string(args[0].text) + "'", args[0].offset);
    unsigned width = 0;
    for (char c : args[1].text) {
      if (c < '0' || c > '9' || width > 64) fail("bad var width", args[1].offset);
      width = width * 10 + static_cast<unsigned>(c - '0');
    }
    if (width == 0 || width > 64) fail("var width must be 1..64", args[1].offset);
    const std::string id(args[2].text);
    if (widths_.count(id)) fail("duplicate id '" + id + "'", args[2].offset);
    if (args.size() == 5) {
      const std::string expect = "[" + std::to_string(width - 1) + ":0]";
      if (args[4].text != expect) fail("range does not match width", args[4].offset);
    }
    widths_[id] = width;
    result_.trace.signals.push_back({std::string(args[3].text), width, id});
  }

  struct Value {
    std::string id;
    std::optional<std::uint64_t> bits;  // nullopt for x/z
  };

  Value value(const Token& t) {
    Value v;
    std::string_view digits;
    std::size_t id_offset;
    if (t.text[0] == 'b' || t.text[0] == 'B') {
      digits = t.text.substr(1);
      const Token id = require("identifier after vector value");
      v.id = std::string(id.text);
      id_offset = id.offset;
    } else {
      digits = t.text.substr(0, 1);
      v.id = std::string(t.text.substr(1));
      id_offset = t.offset + 1;
    }
    const auto it = widths_.find(v.id);
    if (v.id.empty() || it == widths_.end())
      fail("change on undeclared id '" + v.id + "'", id_offset);
    if (digits.empty()) fail("empty value", t.offset);
    if (digits == "x" || digits == "X" || digits == "z" || digits == "Z") return v;
    if (digits.size() > it->second)
      fail("value wider than signal '" + v.id + "'", t.offset);
    std::uint64_t bits = 0;
    for (char c : digits) {
      if (c != '0' && c != '1') fail("bad value digit", t.offset);
      bits = (bits << 1) | static_cast<std::uint64_t>(c == '1');
    }
    if (t.text[0] != 'b' && t.text[0] != 'B' && it->second != 1)
      fail("scalar value for vector signal '" + v.id + "'", t.offset);
    v.bits = bits;
    return v;
  }

  void body() {
    std::optional<std::uint64_t> time;
    bool section_empty = false;
    while (auto t = next()) {
      if (t->text == "$dumpvars") {
        if (time) fail("$dumpvars after a timestamp", t->offset);
        for (;;) {
          const Token v = require("$end closing $dumpvars");
          if (v.text == "$end") break;
          value(v);
        }
        continue;
      }
      if (t->text[0] == '#') {
        std::uint64_t stamp = 0;
        const auto digits = t->text.substr(1);
        if (digits.empty()) fail("empty timestamp", t->offset);
        for (char c : digits) {
          if (c < '0' || c > '9') fail("bad timestamp", t->offset);
          const std::uint64_t next_stamp = stamp * 10 + static_cast<unsigned>(c - '0');
          if (next_stamp / 10 != stamp) fail("timestamp overflow", t->offset);
          stamp = next_stamp;
        }
        if (time && stamp < *time) fail("timestamps go backwards", t->offset);
        time = stamp;
        section_empty = true;
        continue;
      }
      if (!time) fail("value change before the first timestamp", t->offset);
      const Value v = value(*t);
      if (!v.bits) fail("x/z values are only accepted in $dumpvars", t->offset);
      result_.trace.changes.push_back({*time, v.id, *v.bits});
      section_empty = false;
    }
    if (time && section_empty &&
        (result_.trace.changes.empty() || *time > result_.trace.changes.back().time))
      result_.trace.end_time = *time;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
  ReadResult result_;
  std::map<std::string, unsigned> widths_;
};

}  // namespace

VcdFormatError::VcdFormatError(std::string message, std::size_t offset)
    : FormatError("VCD byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

std::string id_code(std::size_t index) {
  std::string out;
  do {
    out.push_back(static_cast<char>(kFirstId + index % kIdRadix));
    index /= kIdRadix;
  } while (index-- > 0);
  return out;
}

std::string declare(Trace& trace, std::string name, unsigned width) {
  std::string id = id_code(trace.signals.size());
  trace.signals.push_back({std::move(name), width, id});
  return id;
}

std::optional<std::string> check(const Trace& trace) {
  std::map<std::string, unsigned> widths;
  for (const auto& s : trace.signals) {
    if (s.width == 0 || s.width > 64) return "signal '" + s.name + "' has width 0 or > 64";
    if (s.name.empty() || has_space(s.name)) return "signal name '" + s.name + "' is invalid";
    if (s.id.empty() || has_space(s.id)) return "signal id '" + s.id + "' is invalid";
    for (char c : s.id)
      if (c < kFirstId || c > kLastId) return "signal id '" + s.id + "' is not printable";
    if (!widths.emplace(s.id, s.width).second) return "duplicate id '" + s.id + "'";
  }
  std::uint64_t last = 0;
  for (const auto& c : trace.changes) {
    if (c.time < last) return "timestamps decrease at " + std::to_string(c.time);
    last = c.time;
    const auto it = widths.find(c.id);
    if (it == widths.end()) return "change references undeclared id '" + c.id + "'";
    if (c.value & ~width_mask(it->second))
      return "value exceeds width of '" + c.id + "'";
  }
  if (trace.end_time && !trace.changes.empty() && *trace.end_time <= last)
    return "end time is not after the last change";
  return std::nullopt;
}

std::string write_vcd(const Trace& trace, std::string_view module_name) {
  if (const auto problem = check(trace)) throw std::invalid_argument("invalid trace: " + *problem);
  std::ostringstream out;
  out << "$date\n  -\n$end\n"
      << "$version\n  gherkin-hdl 1.0\n$end\n"
      << "$timescale 1ns $end\n"
      << "$scope module " << module_name << " $end\n";
  for (const auto& s : trace.signals) {
    out << "$var wire " << s.width << ' ' << s.id << ' ' << s.name;
    if (s.width > 1) out << " [" << s.width - 1 << ":0]";
    out << " $end\n";
  }
  out << "$upscope $end\n$enddefinitions $end\n$dumpvars\n";
  for (const auto& s : trace.signals) {
    if (s.width > 1)
      out << "bx " << s.id << '\n';
    else
      out << 'x' << s.id << '\n';
  }
  out << "$end\n";

  std::map<std::string, unsigned> widths;
  for (const auto& s : trace.signals) widths.emplace(s.id, s.width);
  std::optional<std::uint64_t> time;
  for (const auto& c : trace.changes) {
    if (!time || *time != c.time) {
      out << '#' << c.time << '\n';
      time = c.time;
    }
    const auto it = widths.find(c.id);
    if (it != widths.end() && it->second == 1)
      out << (c.value & 1U) << c.id << '\n';
    else
      out << 'b' << binary(c.value) << ' ' << c.id << '\n';
  }
  if (trace.end_time && (!time || *trace.end_time > *time))
    out << '#' << *trace.end_time << '\n';
  return out.str();
}

Trace read_vcd_minimal(std::string_view bytes) { return Reader(bytes).run().trace; }

ReadResult read_vcd_with_scope(std::string_view bytes) { return Reader(bytes).run(); }

}  // namespace hwbdd::vcd
