#include "hwbdd/alu.hpp"

#include <cassert>
#include <cctype>
#include <string>

namespace hwbdd::alu {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

bool sign_bit(Word w, unsigned width) { return (w >> (width - 1)) & 1U; }

}  // namespace

std::string_view to_string(AluOp op) {
  switch (op) {
    case AluOp::ADD: return "ADD";
    case AluOp::SUB: return "SUB";
    case AluOp::AND: return "AND";
    case AluOp::OR: return "OR";
    case AluOp::XOR: return "XOR";
    case AluOp::NOT: return "NOT";
    case AluOp::SHL: return "SHL";
    case AluOp::SHR: return "SHR";
  }
  return "?";
}

std::optional<AluOp> parse_op(std::string_view name) {
  for (AluOp op : kAllOps)
    if (iequals(name, to_string(op))) return op;
  return std::nullopt;
}

std::string_view to_string(Flag f) {
  switch (f) {
    case Flag::Carry: return "carry";
    case Flag::Zero: return "zero";
    case Flag::Overflow: return "overflow";
    case Flag::Negative: return "negative";
  }
  return "?";
}

std::optional<Flag> parse_flag(std::string_view name) {
  for (Flag f : kAllFlags)
    if (iequals(name, to_string(f))) return f;
  return std::nullopt;
}

bool FlagSet::get(Flag f) const {
  switch (f) {
    case Flag::Carry: return carry;
    case Flag::Zero: return zero;
    case Flag::Overflow: return overflow;
    case Flag::Negative: return negative;
  }
  return false;
}

std::int64_t signed_view(Word word, unsigned width) {
  word &= mask(width);
  if (width >= 64) return static_cast<std::int64_t>(word);
  if (!sign_bit(word, width)) return static_cast<std::int64_t>(word);
  // word - 2^width, computed without overflowing the signed range.
  return -static_cast<std::int64_t>(mask(width) - word) - 1;
}

AluResponse evaluate(const AluVector& v) {
  assert(valid_width(v.width));
  const unsigned w = v.width;
  const Word m = mask(w);
  assert(v.a <= m && v.b <= m);
  const Word a = v.a & m;
  const Word b = v.b & m;

  AluResponse r;
  switch (v.op) {
    case AluOp::ADD: {
      // Carry out of bit w-1: full 64-bit wrap or bits above the mask.
      const Word sum = a + b;
      r.result = sum & m;
      r.flags.carry = w == 64 ? sum < a : (sum >> w) != 0;
      const bool sa = sign_bit(a, w), sb = sign_bit(b, w);
      r.flags.overflow = sa == sb && sign_bit(r.result, w) != sa;
      break;
    }
    case AluOp::SUB: {
      r.result = (a - b) & m;
      r.flags.carry = a >= b;
      const bool sa = sign_bit(a, w), sb = sign_bit(b, w);
      r.flags.overflow = sa != sb && sign_bit(r.result, w) == sb;
      break;
    }
    case AluOp::AND: r.result = a & b; break;
    case AluOp::OR: r.result = a | b; break;
    case AluOp::XOR: r.result = a ^ b; break;
    case AluOp::NOT: r.result = ~a & m; break;
    case AluOp::SHL: {
      const unsigned s = static_cast<unsigned>(b % w);
      r.result = s == 0 ? a : (a << s) & m;
      r.flags.carry = s > 0 && ((a >> (w - s)) & 1U);
      break;
    }
    case AluOp::SHR: {
      const unsigned s = static_cast<unsigned>(b % w);
      r.result = s == 0 ? a : a >> s;
      r.flags.carry = s > 0 && ((a >> (s - 1)) & 1U);
      break;
    }
  }
  r.flags.zero = r.result == 0;
  r.flags.negative = sign_bit(r.result, w);
  return r;
}

}  // namespace hwbdd::alu
