#pragma once

// Star configurations of random paths meeting at a vertex, and their exponents.
//
// Surface syntax:
//   expr    := operand ( op operand )*        one operator kind per level
//   operand := atom | '(' expr ')'
//   atom    := 'S' | 'B' | 'P' | 'W(' number ')' | 'G(' number ')'
//   op      := '^'   mutual avoidance
//            | 'v'   transparency (independent overlap)
//
// Mixing '^' and 'v' at one nesting level is rejected; chains of one operator
// (including parenthesized sub-chains of the same operator) flatten into a
// single n-ary node.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/params.hpp"

namespace kpz {

enum class AtomKind {
  S,  // one strand of the system's own curve (SLE trace)
  B,  // one Brownian path
  P,  // one self-avoiding walk (c = 0 only)
  W,  // packet of n transparent Brownian paths
  G,  // generic set with prescribed half-plane dimension
};

enum class NodeKind { Atom, Avoid, Overlap };

struct StarExpr {
  NodeKind kind = NodeKind::Atom;
  AtomKind atom = AtomKind::B;
  double value = 0.0;  // n for W, x~ for G
  std::vector<StarExpr> children;

  static StarExpr make_atom(AtomKind a, double v = 0.0) {
    StarExpr e;
    e.kind = NodeKind::Atom;
    e.atom = a;
    e.value = v;
    return e;
  }

  /// Builds an n-ary node, splicing in children of the same kind.
  static StarExpr make_node(NodeKind k, std::vector<StarExpr> parts) {
    StarExpr e;
    e.kind = k;
    for (auto& part : parts) {
      if (part.kind == k) {
        for (auto& grandchild : part.children) e.children.push_back(std::move(grandchild));
      } else {
        e.children.push_back(std::move(part));
      }
    }
    return e;
  }

  bool contains_strand() const {
    if (kind == NodeKind::Atom) return atom == AtomKind::S;
    return std::any_of(children.begin(), children.end(), [](const StarExpr& c) { return c.contains_strand(); });
  }

  friend bool operator==(const StarExpr&, const StarExpr&) = default;
};

inline std::string to_string(const StarExpr& e) {
  std::ostringstream os;
  os.precision(17);
  if (e.kind == NodeKind::Atom) {
    switch (e.atom) {
      case AtomKind::S: return "S";
      case AtomKind::B: return "B";
      case AtomKind::P: return "P";
      case AtomKind::W: os << "W(" << e.value << ")"; return os.str();
      case AtomKind::G: os << "G(" << e.value << ")"; return os.str();
    }
  }
  const char* op = e.kind == NodeKind::Avoid ? "^" : "v";
  os << "(";
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    if (i) os << op;
    os << to_string(e.children[i]);
  }
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

class StarParser {
 public:
  explicit StarParser(std::string_view text) : text_(text) {}

  StarExpr parse() {
    skip_ws();
    if (at_end()) throw ParseError(pos_, "empty expression", operand_tokens());
    StarExpr e = parse_expr();
    skip_ws();
    if (!at_end()) {
      if (peek() == ')') throw ParseError(pos_, "unbalanced parenthesis", {"^", "v", "end of input"});
      throw ParseError(pos_, "unexpected character", {"^", "v", "end of input"});
    }
    return e;
  }

 private:
  static std::vector<std::string> operand_tokens() { return {"S", "B", "P", "W(", "G(", "("}; }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  StarExpr parse_expr() {
    std::vector<StarExpr> parts;
    parts.push_back(parse_operand());
    std::optional<char> op;
    for (;;) {
      skip_ws();
      if (at_end() || (peek() != '^' && peek() != 'v')) break;
      const char c = peek();
      if (op && *op != c)
        throw ParseError(pos_, "ambiguous precedence: mixed '^' and 'v' need parentheses", {std::string(1, *op)});
      op = c;
      ++pos_;
      parts.push_back(parse_operand());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return StarExpr::make_node(*op == '^' ? NodeKind::Avoid : NodeKind::Overlap, std::move(parts));
  }

  StarExpr parse_operand() {
    skip_ws();
    if (at_end()) throw ParseError(pos_, "unexpected end of input", operand_tokens());
    const std::size_t start = pos_;
    switch (peek()) {
      case '(': {
        ++pos_;
        StarExpr inner = parse_expr();
        skip_ws();
        if (at_end() || peek() != ')') throw ParseError(pos_, "unbalanced parenthesis", {")", "^", "v"});
        ++pos_;
        return inner;
      }
      case 'S': ++pos_; return StarExpr::make_atom(AtomKind::S);
      case 'B': ++pos_; return StarExpr::make_atom(AtomKind::B);
      case 'P': ++pos_; return StarExpr::make_atom(AtomKind::P);
      case 'W':
      case 'G': {
        const AtomKind kind = peek() == 'W' ? AtomKind::W : AtomKind::G;
        ++pos_;
        skip_ws();
        if (at_end() || peek() != '(') throw ParseError(pos_, "expected '(' after atom", {"("});
        ++pos_;
        skip_ws();
        const double v = parse_number();
        skip_ws();
        if (at_end() || peek() != ')') throw ParseError(pos_, "unbalanced parenthesis", {")"});
        ++pos_;
        return StarExpr::make_atom(kind, v);
      }
      default: throw ParseError(start, std::string("unknown atom '") + peek() + "'", operand_tokens());
    }
  }

  double parse_number() {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, ++digits;
    if (!at_end() && peek() == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, ++digits;
    }
    if (digits == 0) throw ParseError(start, "malformed number", {"non-negative decimal"});
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) throw ParseError(start, "malformed number", {"non-negative decimal"});
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline StarExpr parse(std::string_view text) { return detail::StarParser(text).parse(); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Which quantum-gravity dimension is additive under mutual avoidance.
enum class Channel {
  Standard,  // Delta~ additive, gamma <= 0 maps
  Dual,      // Delta~' additive, gamma' maps (non-simple strands, kappa > 4)
};

enum class Context { Boundary, Bulk };

struct ExponentSet {
  double qg_boundary = 0.0;    // additive channel value: Delta~ or Delta~'
  double halfplane_dim = 0.0;  // x~
  double plane_weight = 0.0;   // Delta^(0)
  double plane_scaling = 0.0;  // x = 2 Delta^(0)
  double qg_bulk = 0.0;        // Delta
  Channel channel = Channel::Standard;
  double channel_kappa = 0.0;  // kappa whose unified maps realize the channel
  Context context = Context::Boundary;
};

/// Half-plane boundary dimension of a single atom.
inline double atom_halfplane_dim(const StarExpr& atom, const SystemParams& p) {
  if (atom.kind != NodeKind::Atom) throw DomainError("atom_halfplane_dim: not an atom");
  switch (atom.atom) {
    case AtomKind::S: return (6.0 - p.kappa) / (2.0 * p.kappa);
    case AtomKind::B: return 1.0;
    case AtomKind::P:
      if (std::abs(p.c) > 1e-12) throw DomainError("atom P undefined for this system (requires c = 0)");
      return 5.0 / 8.0;
    case AtomKind::W:
      if (!(atom.value >= 0.0)) throw DomainError("W(n) requires n >= 0");
      return atom.value;
    case AtomKind::G:
      if (!(atom.value >= 0.0)) throw DomainError("G(x) requires x >= 0");
      return atom.value;
  }
  return 0.0;
}

namespace detail {

struct NodeValue {
  double halfplane = 0.0;
  std::optional<double> qg;  // known exactly, no inverse map needed
};

inline double qg_of(const NodeValue& v, double kappa_ch) {
  if (v.qg) return *v.qg;
  double x = v.halfplane;
  if (x < 0.0) {
    if (x < -1e-14) throw DomainError("negative half-plane dimension fed to the inverse KPZ map");
    x = 0.0;
  }
  return u_kappa_inv(kappa_ch, x);
}

inline NodeValue eval_node(const StarExpr& e, const SystemParams& p, double kappa_ch) {
  switch (e.kind) {
    case NodeKind::Atom: {
      NodeValue v{atom_halfplane_dim(e, p), std::nullopt};
      if (e.atom == AtomKind::S) v.qg = 2.0 / p.kappa;
      return v;
    }
    case NodeKind::Overlap: {
      NodeValue v;
      for (const auto& child : e.children) v.halfplane += eval_node(child, p, kappa_ch).halfplane;
      return v;
    }
    case NodeKind::Avoid: {
      double sum = 0.0;
      for (const auto& child : e.children) sum += qg_of(eval_node(child, p, kappa_ch), kappa_ch);
      return NodeValue{u_kappa(kappa_ch, sum), sum};
    }
  }
  return {};
}

}  // namespace detail

inline ExponentSet evaluate(const StarExpr& e, const SystemParams& p, Context ctx) {
  const bool dual = p.kappa > 4.0 && e.contains_strand();
  const double kappa_ch = dual ? p.kappa : std::min(p.kappa, 16.0 / p.kappa);

  const detail::NodeValue top = detail::eval_node(e, p, kappa_ch);
  ExponentSet out;
  out.channel = dual ? Channel::Dual : Channel::Standard;
  out.channel_kappa = kappa_ch;
  out.context = ctx;
  out.qg_boundary = detail::qg_of(top, kappa_ch);
  out.halfplane_dim = top.qg ? u_kappa(kappa_ch, out.qg_boundary) : top.halfplane;
  out.plane_weight = v_kappa(kappa_ch, out.qg_boundary);
  out.plane_scaling = 2.0 * out.plane_weight;

  // In the channel's own map the susceptibility is 1 - 4/kappa_ch.
  const double g_ch = 1.0 - 4.0 / kappa_ch;
  if (dual) {
    const double standard_boundary = (out.qg_boundary - g_ch) / (1.0 - g_ch);
    out.qg_bulk = standard_boundary / 2.0;
  } else {
    out.qg_bulk = (out.qg_boundary + g_ch) / 2.0;
  }
  return out;
}

inline ExponentSet eval_boundary(const StarExpr& e, const SystemParams& p) { return evaluate(e, p, Context::Boundary); }
inline ExponentSet eval_bulk(const StarExpr& e, const SystemParams& p) { return evaluate(e, p, Context::Bulk); }

inline ExponentSet eval_boundary(std::string_view text, const SystemParams& p) { return eval_boundary(parse(text), p); }
inline ExponentSet eval_bulk(std::string_view text, const SystemParams& p) { return eval_bulk(parse(text), p); }

}  // namespace kpz
