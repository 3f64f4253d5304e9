#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hwbdd/vcd.hpp"

using namespace hwbdd::vcd;

namespace {

Trace random_trace(std::mt19937_64& rng) {
  Trace t;
  const std::size_t nsig = 1 + rng() % 120;  // crosses into two-character ids
  for (std::size_t i = 0; i < nsig; ++i)
    declare(t, "s" + std::to_string(i), static_cast<unsigned>(1 + rng() % 64));
  std::uint64_t time = 0;
  const std::size_t nchg = rng() % 200;
  for (std::size_t i = 0; i < nchg; ++i) {
    time += rng() % 3 == 0 ? rng() % 1000 : 0;
    const auto& s = t.signals[rng() % nsig];
    const std::uint64_t m = s.width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << s.width) - 1;
    t.changes.push_back({time, s.id, rng() & m});
  }
  if (rng() % 2) t.end_time = time + 1 + rng() % 50;
  return t;
}

}  // namespace

TEST(IdCode, SequentialPrintable) {
  EXPECT_EQ(id_code(0), "!");
  EXPECT_EQ(id_code(1), "\"");
  EXPECT_EQ(id_code(93), "~");
  EXPECT_EQ(id_code(94), "!!");
  EXPECT_EQ(id_code(95), "\"!");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 20000; ++i) {
    const auto id = id_code(i);
    for (char c : id) ASSERT_TRUE(c >= '!' && c <= '~');
    ASSERT_TRUE(seen.insert(id).second) << i;
  }
}

TEST(WriteVcd, ScalarChangeAtTime5) {
  Trace t;
  const auto clk = declare(t, "clk", 1);
  t.changes.push_back({5, clk, 1});
  const auto doc = write_vcd(t, "top");
  EXPECT_NE(doc.find("$var wire 1 ! clk $end"), std::string::npos);
  EXPECT_NE(doc.find("#5\n1!\n"), std::string::npos) << doc;
  EXPECT_NE(doc.find("$scope module top $end"), std::string::npos);
  EXPECT_NE(doc.find("$timescale 1ns $end"), std::string::npos);
}

TEST(WriteVcd, VectorValue) {
  Trace t;
  const auto a = declare(t, "A", 4);
  t.changes.push_back({0, a, 10});
  const auto doc = write_vcd(t, "m");
  EXPECT_NE(doc.find("$var wire 4 ! A [3:0] $end"), std::string::npos);
  EXPECT_NE(doc.find("#0\nb1010 !\n"), std::string::npos) << doc;
}

TEST(WriteVcd, NoChangesIsHeaderOnly) {
  Trace t;
  declare(t, "x", 1);
  const auto doc = write_vcd(t, "m");
  EXPECT_NE(doc.find("$enddefinitions $end"), std::string::npos);
  EXPECT_EQ(doc.find('#'), std::string::npos);
  EXPECT_EQ(read_vcd_minimal(doc), t);
}

TEST(WriteVcd, RejectsInvalidTraces) {
  Trace t;
  const auto a = declare(t, "a", 2);
  t.changes.push_back({3, a, 4});
  EXPECT_TRUE(check(t));
  EXPECT_THROW(write_vcd(t, "m"), std::invalid_argument);
  t.changes = {{3, a, 1}, {2, a, 0}};
  EXPECT_TRUE(check(t));
  t.changes = {{3, "?", 1}};
  EXPECT_TRUE(check(t));
  t.changes = {{3, a, 1}};
  t.end_time = 3;
  EXPECT_TRUE(check(t));
  t.end_time = 4;
  EXPECT_FALSE(check(t));
}

TEST(ReadVcd, TruncatedHeader) {
  Trace t;
  declare(t, "a", 8);
  const auto doc = write_vcd(t, "m");
  const auto cut = doc.substr(0, doc.find("$enddefinitions"));
  EXPECT_THROW(read_vcd_minimal(cut), hwbdd::FormatError);
  EXPECT_THROW(read_vcd_minimal(""), VcdFormatError);
}

TEST(ReadVcd, UndeclaredIdentifier) {
  Trace t;
  const auto a = declare(t, "a", 1);
  t.changes.push_back({1, a, 1});
  auto doc = write_vcd(t, "m");
  doc += "#2\n1%\n";
  try {
    read_vcd_minimal(doc);
    FAIL();
  } catch (const VcdFormatError& e) {
    EXPECT_EQ(e.offset(), doc.size() - 2);
  }
}

TEST(ReadVcd, OtherMalformedBodies) {
  Trace t;
  const auto a = declare(t, "a", 4);
  const auto head = write_vcd(t, "m");
  EXPECT_THROW(read_vcd_minimal(head + "#5\nb1 !\n#4\nb0 !\n"), VcdFormatError);
  EXPECT_THROW(read_vcd_minimal(head + "#5\nbx !\n"), VcdFormatError);
  EXPECT_THROW(read_vcd_minimal(head + "#5\nb11111 !\n"), VcdFormatError);
  EXPECT_THROW(read_vcd_minimal(head + "#five\n"), VcdFormatError);
  EXPECT_NO_THROW(read_vcd_minimal(head + "#5\nb0101 " + a + "\n"));
}

TEST(ReadVcd, ScopeName) {
  Trace t;
  declare(t, "a", 1);
  EXPECT_EQ(read_vcd_with_scope(write_vcd(t, "alu")).module_name, "alu");
}

TEST(ReadVcd, EndTimeSurvives) {
  Trace t;
  const auto a = declare(t, "a", 1);
  t.changes.push_back({0, a, 1});
  t.end_time = 30;
  const auto doc = write_vcd(t, "m");
  EXPECT_NE(doc.find("\n#30\n"), std::string::npos);
  EXPECT_EQ(read_vcd_minimal(doc), t);
}

TEST(VcdProperty, RandomRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto t = random_trace(rng);
    ASSERT_FALSE(check(t));
    const auto doc = write_vcd(t, "m");
    const auto back = read_vcd_minimal(doc);
    ASSERT_EQ(back, t) << "iteration " << i;
    ASSERT_EQ(write_vcd(back, "m"), doc);
  }
}
