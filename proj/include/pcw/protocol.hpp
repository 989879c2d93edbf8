#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcw/cnf.hpp"
#include "pcw/semantic.hpp"

namespace pcw {

enum class Player : std::uint8_t { Alice, Bob };

// A transcript prefix. Bit i (0-based, in sending order) sits at position
// length-1-i of `bits`, so a history doubles as a heap address in the tree.
class History {
 public:
  static constexpr int kMaxLength = 62;

  History() = default;
  History(std::uint64_t bits, int length);
  static History parse(std::string_view s);

  int length() const { return length_; }
  std::uint64_t bits() const { return bits_; }
  bool bit(int i) const { return (bits_ >> (length_ - 1 - i)) & 1U; }
  History prefix(int len) const;
  History child(bool b) const;
  History operator+(const History& tail) const;
  bool is_prefix_of(const History& other) const;
  std::string to_string() const;

  friend bool operator==(const History&, const History&) = default;
  friend auto operator<=>(const History& a, const History& b) {
    return std::pair(a.length_, a.bits_) <=> std::pair(b.length_, b.bits_);
  }

 private:
  std::uint64_t bits_ = 0;
  int length_ = 0;
};

// Maps the owner's side code to the bit sent.
using SidePredicate = std::function<bool(std::uint64_t)>;

struct ProtocolNode {
  Player owner = Player::Alice;
  SidePredicate predicate;
};

// Complete binary protocol tree: every leaf sits at depth k. Internal nodes
// are stored in heap order (root at address 1, child of a with bit b at
// 2a+b); leaves are indexed by their full history.
class ProtocolTree {
 public:
  ProtocolTree() : ProtocolTree(constant(false)) {}
  ProtocolTree(int depth, std::vector<ProtocolNode> internal, std::vector<bool> leaves);

  static ProtocolTree constant(bool output);

  int depth() const { return depth_; }
  std::size_t num_leaves() const { return leaves_.size(); }
  const ProtocolNode& node(const History& prefix) const;
  bool output(const History& leaf) const;

 private:
  int depth_ = 0;
  std::vector<ProtocolNode> internal_;
  std::vector<bool> leaves_;
};

struct ProtocolCaps {
  int max_side_vars = 12;  // rectangle materialisation enumerates 2^n1 and 2^n2
  int max_depth = 24;
};

// Two bits: Alice sends 0 iff her part of the clause is falsified, then Bob
// likewise. Output 0 exactly at history "00".
ProtocolTree clause_protocol(const Clause& c, const VariablePartition& part);

// Alice sends her partial sum minus its minimum in w = ceil(log2(range+1))
// bits, most significant first; Bob answers with the comparison bit, which
// is the output. An inequality with no nonzero coefficient gives a depth-0
// constant tree.
ProtocolTree inequality_protocol(const LinearInequality& ineq, const VariablePartition& part,
                                 const ProtocolCaps& caps = {});

// Number of message bits Alice needs for her partial sum of `ineq`.
int alice_message_width(const LinearInequality& ineq, const VariablePartition& part);

struct ProtocolRun {
  History history;
  bool output = false;
};

ProtocolRun run_protocol_codes(const ProtocolTree& t, std::uint64_t x, std::uint64_t y);
ProtocolRun run_protocol(const ProtocolTree& t, const VariablePartition& part, const Assignment& x,
                         const Assignment& y);

// R(h) = xset x yset, indexed by side codes.
struct Rectangle {
  Bits xset;
  Bits yset;

  bool contains(std::uint64_t x, std::uint64_t y) const { return xset[x] && yset[y]; }
  bool empty() const { return xset.none() || yset.none(); }
  Rectangle operator&(const Rectangle& o) const { return {xset & o.xset, yset & o.yset}; }

  static Rectangle full(int n1, int n2);
};

Rectangle materialize_rectangle(const ProtocolTree& t, const History& h, const VariablePartition& part,
                                const ProtocolCaps& caps = {});

// True iff `line` is 0 on every point of r (vacuously true when r is empty).
bool is_zero_monochromatic(const Rectangle& r, const SemanticLine& line);

// Full-length histories whose rectangle is 0-monochromatic for `line`,
// in increasing order. Empty rectangles are included.
std::vector<History> good_histories(const ProtocolTree& t, const SemanticLine& line, const VariablePartition& part,
                                    const ProtocolCaps& caps = {});

// True iff the leaf output equals line(x, y) on every joint input.
bool protocol_computes(const ProtocolTree& t, const SemanticLine& line);

struct RealProtocolRound {
  double alice_value = 0;  // Alice's partial sum
  double bob_value = 0;    // constant minus Bob's partial sum
  bool referee_bit = false;
};

// One-round referee protocol for a linear inequality; the referee bit is the
// output.
std::pair<RealProtocolRound, bool> real_protocol_eval(const LinearInequality& ineq, const VariablePartition& part,
                                                      const Assignment& x, const Assignment& y);

}  // namespace pcw
