#include "pcw/protocol.hpp"

#include <bit>
#include <memory>

#include "pcw/error.hpp"

namespace pcw {

// ---------------------------------------------------------------------------
// History

History::History(std::uint64_t bits, int length) : bits_(bits), length_(length) {
  if (length < 0 || length > kMaxLength) throw InvalidArgument("history length out of range");
  if (length < 64 && (bits >> length) != 0) throw InvalidArgument("history bits exceed its length");
}

History History::parse(std::string_view s) {
  if (s == "e" || s == "-") return {};
  std::uint64_t b = 0;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw InvalidArgument("history must be a 0/1 string");
    b = (b << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return {b, static_cast<int>(s.size())};
}

History History::prefix(int len) const {
  if (len < 0 || len > length_) throw InvalidArgument("prefix longer than history");
  return {bits_ >> (length_ - len), len};
}

History History::child(bool b) const { return {(bits_ << 1) | static_cast<std::uint64_t>(b), length_ + 1}; }

History History::operator+(const History& tail) const {
  return {(bits_ << tail.length_) | tail.bits_, length_ + tail.length_};
}

bool History::is_prefix_of(const History& other) const {
  return length_ <= other.length_ && other.prefix(length_) == *this;
}

std::string History::to_string() const {
  std::string s;
  for (int i = 0; i < length_; ++i) s += bit(i) ? '1' : '0';
  return s;
}

// ---------------------------------------------------------------------------
// ProtocolTree

ProtocolTree::ProtocolTree(int depth, std::vector<ProtocolNode> internal, std::vector<bool> leaves)
    : depth_(depth), internal_(std::move(internal)), leaves_(std::move(leaves)) {
  if (depth < 0 || depth > History::kMaxLength) throw InvalidArgument("protocol depth out of range");
  std::size_t n_leaves = std::size_t{1} << depth;
  if (internal_.size() != n_leaves - 1 || leaves_.size() != n_leaves)
    throw InvalidArgument("protocol tree is not complete at depth " + std::to_string(depth));
  for (const auto& n : internal_)
    if (!n.predicate) throw InvalidArgument("protocol node without predicate");
}

ProtocolTree ProtocolTree::constant(bool output) { return ProtocolTree(0, {}, {output}); }

const ProtocolNode& ProtocolTree::node(const History& prefix) const {
  if (prefix.length() >= depth_) throw InvalidArgument("history " + prefix.to_string() + " addresses a leaf");
  std::size_t addr = (std::size_t{1} << prefix.length()) | prefix.bits();
  return internal_[addr - 1];
}

bool ProtocolTree::output(const History& leaf) const {
  if (leaf.length() != depth_) throw InvalidArgument("history " + leaf.to_string() + " is not a full history");
  return leaves_[leaf.bits()];
}

// ---------------------------------------------------------------------------
// Constructions

ProtocolTree clause_protocol(const Clause& c, const VariablePartition& part) {
  SidePart xs = side_part(c, part, Side::X);
  SidePart ys = side_part(c, part, Side::Y);
  std::vector<ProtocolNode> nodes;
  nodes.push_back({Player::Alice, [xs](std::uint64_t x) { return !xs.falsified_by(x); }});
  ProtocolNode bob{Player::Bob, [ys](std::uint64_t y) { return !ys.falsified_by(y); }};
  nodes.push_back(bob);
  nodes.push_back(bob);
  return ProtocolTree(2, std::move(nodes), {false, true, true, true});
}

namespace {

struct SideSum {
  std::vector<std::pair<int, std::int64_t>> terms;  // (code bit, coefficient)
  std::int64_t min = 0, max = 0;

  std::int64_t operator()(std::uint64_t code) const {
    std::int64_t s = 0;
    for (auto [bit, a] : terms)
      if ((code >> bit) & 1U) s += a;
    return s;
  }
};

SideSum side_sum(const LinearInequality& ineq, const VariablePartition& part, Side side) {
  if (ineq.num_vars() != part.num_vars()) throw InvalidArgument("inequality arity differs from partition");
  SideSum s;
  for (Var v : part.vars(side)) {
    std::int64_t a = ineq.coeffs[v - 1];
    if (a == 0) continue;
    s.terms.emplace_back(part.code_bit(v), a);
    (a < 0 ? s.min : s.max) += a;
  }
  return s;
}

}  // namespace

int alice_message_width(const LinearInequality& ineq, const VariablePartition& part) {
  SideSum alice = side_sum(ineq, part, Side::X);
  auto range = static_cast<std::uint64_t>(alice.max - alice.min);
  return static_cast<int>(std::bit_width(range));
}

ProtocolTree inequality_protocol(const LinearInequality& ineq, const VariablePartition& part,
                                 const ProtocolCaps& caps) {
  if (ineq.all_zero_coeffs()) return ProtocolTree::constant(0 >= ineq.constant);

  auto alice = std::make_shared<const SideSum>(side_sum(ineq, part, Side::X));
  auto bob = std::make_shared<const SideSum>(side_sum(ineq, part, Side::Y));
  const int w = alice_message_width(ineq, part);
  const int depth = w + 1;
  if (depth > caps.max_depth)
    throw CapExceeded("inequality protocol needs depth " + std::to_string(depth) + " > cap " +
                      std::to_string(caps.max_depth));

  std::vector<ProtocolNode> nodes((std::size_t{1} << depth) - 1);
  for (int level = 0; level < w; ++level) {
    const int shift = w - 1 - level;
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << level); ++p) {
      nodes[((std::size_t{1} << level) | p) - 1] = {Player::Alice, [alice, shift](std::uint64_t x) {
                                                      auto offset = static_cast<std::uint64_t>((*alice)(x) - alice->min);
                                                      return ((offset >> shift) & 1U) != 0;
                                                    }};
    }
  }
  const std::int64_t constant = ineq.constant;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << w); ++v) {
    const std::int64_t alice_total = alice->min + static_cast<std::int64_t>(v);
    nodes[((std::size_t{1} << w) | v) - 1] = {Player::Bob, [bob, alice_total, constant](std::uint64_t y) {
                                                return alice_total + (*bob)(y) >= constant;
                                              }};
  }
  std::vector<bool> leaves(std::size_t{1} << depth);
  for (std::size_t l = 0; l < leaves.size(); ++l) leaves[l] = (l & 1U) != 0;
  return ProtocolTree(depth, std::move(nodes), std::move(leaves));
}

// ---------------------------------------------------------------------------
// Evaluation

ProtocolRun run_protocol_codes(const ProtocolTree& t, std::uint64_t x, std::uint64_t y) {
  History h;
  while (h.length() < t.depth()) {
    const auto& n = t.node(h);
    h = h.child(n.predicate(n.owner == Player::Alice ? x : y));
  }
  return {h, t.output(h)};
}

ProtocolRun run_protocol(const ProtocolTree& t, const VariablePartition& part, const Assignment& x,
                         const Assignment& y) {
  return run_protocol_codes(t, part.x_code(x), part.y_code(y));
}

Rectangle Rectangle::full(int n1, int n2) {
  Rectangle r{Bits(std::size_t{1} << n1), Bits(std::size_t{1} << n2)};
  r.xset.set();
  r.yset.set();
  return r;
}

Rectangle materialize_rectangle(const ProtocolTree& t, const History& h, const VariablePartition& part,
                                const ProtocolCaps& caps) {
  if (part.n1() > caps.max_side_vars || part.n2() > caps.max_side_vars)
    throw CapExceeded("rectangle materialisation needs n1, n2 <= " + std::to_string(caps.max_side_vars));
  if (h.length() > t.depth()) throw InvalidArgument("history longer than protocol depth");
  Rectangle r = Rectangle::full(part.n1(), part.n2());
  for (int i = 0; i < h.length(); ++i) {
    const auto& n = t.node(h.prefix(i));
    const bool want = h.bit(i);
    Bits& set = n.owner == Player::Alice ? r.xset : r.yset;
    for (std::size_t c = 0; c < set.size(); ++c)
      if (set[c] && n.predicate(c) != want) set[c] = false;
  }
  return r;
}

bool is_zero_monochromatic(const Rectangle& r, const SemanticLine& line) {
  if (r.empty()) return true;
  for (auto x = r.xset.find_first(); x != Bits::npos; x = r.xset.find_next(x))
    for (auto y = r.yset.find_first(); y != Bits::npos; y = r.yset.find_next(y))
      if (line.at(x, y)) return false;
  return true;
}

std::vector<History> good_histories(const ProtocolTree& t, const SemanticLine& line, const VariablePartition& part,
                                    const ProtocolCaps& caps) {
  if (line.n1() != part.n1() || line.n2() != part.n2())
    throw InvalidArgument("semantic line dimension differs from partition");
  std::vector<History> good;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << t.depth()); ++b) {
    History h(b, t.depth());
    if (is_zero_monochromatic(materialize_rectangle(t, h, part, caps), line)) good.push_back(h);
  }
  return good;
}

bool protocol_computes(const ProtocolTree& t, const SemanticLine& line) {
  for (std::uint64_t x = 0; x < line.x_count(); ++x)
    for (std::uint64_t y = 0; y < line.y_count(); ++y)
      if (run_protocol_codes(t, x, y).output != line.at(x, y)) return false;
  return true;
}

std::pair<RealProtocolRound, bool> real_protocol_eval(const LinearInequality& ineq, const VariablePartition& part,
                                                      const Assignment& x, const Assignment& y) {
  const auto xc = part.x_code(x);
  const auto yc = part.y_code(y);
  SideSum alice = side_sum(ineq, part, Side::X);
  SideSum bob = side_sum(ineq, part, Side::Y);
  RealProtocolRound r;
  r.alice_value = static_cast<double>(alice(xc));
  r.bob_value = static_cast<double>(ineq.constant - bob(yc));
  r.referee_bit = r.alice_value >= r.bob_value;
  return {r, r.referee_bit};
}

}  // namespace pcw
