#pragma once

// Behavioural golden model of the case-study ALU. Width is a parameter
// (4..64 bits, default 16) so the model can be checked exhaustively at small
// widths.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace hwbdd::alu {

using Word = std::uint64_t;

inline constexpr unsigned kMinWidth = 4;
inline constexpr unsigned kMaxWidth = 64;
inline constexpr unsigned kDefaultWidth = 16;

/// Opcode values are the 4-bit encodings driven onto the DUT `op` port.
enum class AluOp : std::uint8_t {
  ADD = 0,
  SUB = 1,
  AND = 2,
  OR = 3,
  XOR = 4,
  NOT = 5,
  SHL = 6,
  SHR = 7,
};

inline constexpr std::array<AluOp, 8> kAllOps{AluOp::ADD, AluOp::SUB, AluOp::AND,
                                              AluOp::OR,  AluOp::XOR, AluOp::NOT,
                                              AluOp::SHL, AluOp::SHR};

constexpr unsigned encoding(AluOp op) { return static_cast<unsigned>(op); }

std::string_view to_string(AluOp op);

/// Case-insensitive lookup of an operation mnemonic.
std::optional<AluOp> parse_op(std::string_view name);

enum class Flag { Carry, Zero, Overflow, Negative };

inline constexpr std::array<Flag, 4> kAllFlags{Flag::Carry, Flag::Zero,
                                               Flag::Overflow, Flag::Negative};

std::string_view to_string(Flag f);
std::optional<Flag> parse_flag(std::string_view name);

/// Bit mask with the low `width` bits set.
constexpr Word mask(unsigned width) {
  return width >= 64 ? ~Word{0} : (Word{1} << width) - 1;
}

constexpr bool valid_width(unsigned width) {
  return width >= kMinWidth && width <= kMaxWidth;
}

struct AluVector {
  AluOp op = AluOp::ADD;
  Word a = 0;
  Word b = 0;
  unsigned width = kDefaultWidth;

  friend bool operator==(const AluVector&, const AluVector&) = default;
};

struct FlagSet {
  bool carry = false;
  bool zero = false;
  bool overflow = false;
  bool negative = false;

  bool get(Flag f) const;

  friend bool operator==(const FlagSet&, const FlagSet&) = default;
};

struct AluResponse {
  Word result = 0;
  FlagSet flags;

  friend bool operator==(const AluResponse&, const AluResponse&) = default;
};

/// Two's complement reading of the low `width` bits of `word`.
std::int64_t signed_view(Word word, unsigned width);

/// Combinational evaluation. Operands are expected to fit in `v.width` bits;
/// the invariant is checked with an assertion only.
AluResponse evaluate(const AluVector& v);

}  // namespace hwbdd::alu
