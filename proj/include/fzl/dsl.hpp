#pragma once

#include <cctype>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fzl/bundlecalc.hpp"

namespace fzl {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
};

/** Parsed ambient plus bundle, with the bundle resolved to normal form. */
struct SpecAst {
  std::vector<FlagShape> shapes;
  BundleSum bundle;
};

namespace dsl_detail {

enum class Tok { End, Ident, Int, LParen, RParen, LBrack, RBrack,
                 Semi, Comma, Plus, Star, Caret };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long value = 0;
  size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace((unsigned char)text_[i_])) ++i_;
    cur_ = Token{};
    cur_.pos = i_;
    if (i_ >= text_.size()) return;
    char c = text_[i_];
    if (std::isalpha((unsigned char)c)) {
      size_t j = i_ + 1;
      if (std::islower((unsigned char)c)) {
        while (j < text_.size() && std::islower((unsigned char)text_[j])) ++j;
      } else {
        for (const char* kw : {"Sym", "Wedge", "Schur"}) {
          size_t len = std::string(kw).size();
          if (text_.compare(i_, len, kw) == 0) j = i_ + len;
        }
      }
      cur_.kind = Tok::Ident;
      cur_.text = text_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    if (std::isdigit((unsigned char)c) ||
        (c == '-' && i_ + 1 < text_.size() &&
         std::isdigit((unsigned char)text_[i_ + 1]))) {
      size_t j = i_ + 1;
      while (j < text_.size() && std::isdigit((unsigned char)text_[j])) ++j;
      cur_.kind = Tok::Int;
      cur_.text = text_.substr(i_, j - i_);
      cur_.value = std::stol(cur_.text);
      i_ = j;
      return;
    }
    switch (c) {
      case '(': cur_.kind = Tok::LParen; break;
      case ')': cur_.kind = Tok::RParen; break;
      case '[': cur_.kind = Tok::LBrack; break;
      case ']': cur_.kind = Tok::RBrack; break;
      case ';': cur_.kind = Tok::Semi; break;
      case ',': cur_.kind = Tok::Comma; break;
      case '+': cur_.kind = Tok::Plus; break;
      case '*': cur_.kind = Tok::Star; break;
      case '^': cur_.kind = Tok::Caret; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }
    cur_.text = c;
    ++i_;
  }

  std::string text_;
  size_t i_ = 0;
  Token cur_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  std::vector<FlagShape> ambient() {
    std::vector<FlagShape> out;
    out.push_back(factor());
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "x") {
      lex_.take();
      out.push_back(factor());
    }
    return out;
  }

  BundleSum bundle(const BundleOps& ops) {
    BundleSum out = sum(ops);
    if (!out.empty()) return ops.normal_sum(out);
    throw ParseError("empty bundle expression", lex_.peek().pos);
  }

  void expect_semi() {
    if (lex_.peek().kind != Tok::Semi)
      throw ParseError("expected ';' between ambient and bundle",
                       lex_.peek().pos);
    lex_.take();
  }

  void expect_end() {
    if (lex_.peek().kind != Tok::End)
      throw ParseError("trailing input", lex_.peek().pos);
  }

 private:
  FlagShape factor() {
    Token t = need(Tok::Ident, "factor name");
    std::vector<long> args;
    need(Tok::LParen, "'('");
    args.push_back(need(Tok::Int, "integer").value);
    while (lex_.peek().kind == Tok::Comma) {
      lex_.take();
      args.push_back(need(Tok::Int, "integer").value);
    }
    need(Tok::RParen, "')'");
    try {
      if (t.text == "P" && args.size() == 1)
        return FlagShape({1}, args[0] + 1);
      if (t.text == "G" && args.size() == 2)
        return FlagShape({args[0]}, args[1]);
      if (t.text == "F" && args.size() == 3)
        return FlagShape({args[0], args[1]}, args[2]);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what(), t.pos);
    }
    throw ParseError("unknown factor '" + t.text + "' with " +
                         std::to_string(args.size()) + " argument(s)",
                     t.pos);
  }

  BundleSum sum(const BundleOps& ops) {
    BundleSum out = product(ops);
    while (lex_.peek().kind == Tok::Plus) {
      lex_.take();
      BundleOps::add_into(out, product(ops), 1);
    }
    return out;
  }

  BundleSum product(const BundleOps& ops) {
    BundleSum out = power(ops);
    while (lex_.peek().kind == Tok::Star) {
      lex_.take();
      out = ops.tensor(out, power(ops));
    }
    return out;
  }

  BundleSum power(const BundleOps& ops) {
    BundleSum out = primary(ops);
    if (lex_.peek().kind == Tok::Caret) {
      Token t = lex_.take();
      long m = need(Tok::Int, "multiplicity").value;
      if (m < 1) throw ParseError("multiplicity must be positive", t.pos);
      for (auto& [e, mult] : out) mult *= m;
    }
    return out;
  }

  BundleSum primary(const BundleOps& ops) {
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      BundleSum out = sum(ops);
      need(Tok::RParen, "')'");
      return out;
    }
    Token t = need(Tok::Ident, "bundle atom");
    if (t.text == "O") return twisted_line(ops, t.pos);
    if (t.text == "U" || t.text == "Q" || t.text == "R")
      return tautological(ops, t);
    if (t.text == "dual") {
      need(Tok::LParen, "'('");
      BundleSum out = ops.dual(sum(ops));
      need(Tok::RParen, "')'");
      return out;
    }
    if (t.text == "Sym" || t.text == "Wedge") {
      need(Tok::Caret, "'^'");
      long k = need(Tok::Int, "exponent").value;
      if (k < 0) throw ParseError("exponent must be non-negative", t.pos);
      need(Tok::LParen, "'('");
      BundleSum inner = sum(ops);
      need(Tok::RParen, "')'");
      return t.text == "Sym" ? ops.sym(k, inner) : ops.wedge(k, inner);
    }
    if (t.text == "Schur") {
      need(Tok::LBrack, "'['");
      Partition lam;
      lam.push_back(need(Tok::Int, "partition entry").value);
      while (lex_.peek().kind == Tok::Comma) {
        lex_.take();
        lam.push_back(need(Tok::Int, "partition entry").value);
      }
      need(Tok::RBrack, "']'");
      need(Tok::LParen, "'('");
      BundleSum inner = sum(ops);
      need(Tok::RParen, "')'");
      try {
        return ops.schur(lam, inner);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(ex.what(), t.pos);
      }
    }
    throw ParseError("unknown atom '" + t.text + "'", t.pos);
  }

  BundleSum tautological(const BundleOps& ops, const Token& t) {
    need(Tok::LBrack, "'['");
    long f = need(Tok::Int, "factor index").value;
    long j = -1;
    if (lex_.peek().kind == Tok::Comma) {
      lex_.take();
      j = need(Tok::Int, "step index").value;
    }
    need(Tok::RBrack, "']'");
    if (f < 1 || f > ops.num_factors())
      throw ParseError("factor index out of range", t.pos);
    const FlagShape& fl = ops.shapes()[f - 1];
    long r = (long)fl.steps.size();
    long block;
    if (t.text == "U") {
      if (j == -1 && r > 1)
        throw ParseError("U needs a step index on a multi-step factor", t.pos);
      if (j != -1 && j != 1)
        throw ParseError(
            "U[,j] with j > 1 is not completely reducible; use R pieces",
            t.pos);
      block = 1;
    } else if (t.text == "Q") {
      if (j == -1 && r > 1)
        throw ParseError("Q needs a step index on a multi-step factor", t.pos);
      if (j != -1 && j != r)
        throw ParseError(
            "Q[,j] with j < the last step is not completely reducible; use R "
            "pieces",
            t.pos);
      block = r + 1;
    } else {
      if (j == -1)
        throw ParseError("R needs both a factor and a block index", t.pos);
      if (j < 1 || j > r + 1)
        throw ParseError("block index out of range", t.pos);
      block = j;
    }
    return ops.single(ops.r_bundle(f - 1, block));
  }

  BundleSum twisted_line(const BundleOps& ops, size_t pos) {
    need(Tok::LParen, "'('");
    std::vector<std::vector<long>> groups(1);
    bool saw_semi = false;
    for (;;) {
      groups.back().push_back(need(Tok::Int, "twist entry").value);
      if (lex_.peek().kind == Tok::Comma) {
        lex_.take();
        continue;
      }
      if (lex_.peek().kind == Tok::Semi) {
        lex_.take();
        saw_semi = true;
        groups.emplace_back();
        continue;
      }
      break;
    }
    need(Tok::RParen, "')'");
    long nf = ops.num_factors();
    std::vector<std::vector<long>> tw;
    if (!saw_semi && (long)groups.size() == 1 && nf > 1) {
      bool single = true;
      for (auto& fl : ops.shapes())
        if (fl.steps.size() != 1) single = false;
      if (!single || (long)groups[0].size() != nf)
        throw ParseError(
            "comma-form twists need one entry per single-step factor; use "
            "';' groups",
            pos);
      for (long v : groups[0]) tw.push_back({v});
    } else {
      if ((long)groups.size() != nf)
        throw ParseError("twist needs one group per factor", pos);
      tw = groups;
      for (long f = 0; f < nf; ++f)
        if (tw[f].size() != ops.shapes()[f].steps.size())
          throw ParseError("twist group length differs from the step count",
                           pos);
    }
    return ops.single(ops.line(tw));
  }

  Token need(Tok k, const std::string& what) {
    if (lex_.peek().kind != k)
      throw ParseError("expected " + what, lex_.peek().pos);
    return lex_.take();
  }

  Lexer lex_;
};

}  // namespace dsl_detail

inline std::vector<FlagShape> parse_ambient(const std::string& text) {
  dsl_detail::Parser p(text);
  auto out = p.ambient();
  p.expect_end();
  return out;
}

inline BundleSum parse_bundle(const std::string& text, const BundleOps& ops) {
  dsl_detail::Parser p(text);
  BundleSum out = p.bundle(ops);
  p.expect_end();
  return out;
}

inline SpecAst parse_spec(const std::string& text) {
  dsl_detail::Parser p(text);
  SpecAst ast;
  ast.shapes = p.ambient();
  p.expect_semi();
  BundleOps ops(ast.shapes);
  ast.bundle = p.bundle(ops);
  p.expect_end();
  return ast;
}

inline std::string print_ambient(const std::vector<FlagShape>& shapes) {
  std::ostringstream os;
  for (size_t f = 0; f < shapes.size(); ++f) {
    if (f) os << " x ";
    const FlagShape& fl = shapes[f];
    if (fl.steps.size() == 1 && fl.steps[0] == 1)
      os << "P(" << fl.n - 1 << ")";
    else if (fl.steps.size() == 1)
      os << "G(" << fl.steps[0] << "," << fl.n << ")";
    else
      os << "F(" << fl.steps[0] << "," << fl.steps[1] << "," << fl.n << ")";
  }
  return os.str();
}

inline std::string print_twist(const std::vector<FlagShape>& shapes,
                               const std::vector<std::vector<long>>& tw) {
  bool single = true;
  for (auto& fl : shapes)
    if (fl.steps.size() != 1) single = false;
  std::ostringstream os;
  os << "O(";
  for (size_t f = 0; f < tw.size(); ++f) {
    if (f) os << (single ? "," : ";");
    for (size_t j = 0; j < tw[f].size(); ++j) {
      if (j) os << ",";
      os << tw[f][j];
    }
  }
  os << ")";
  return os.str();
}

namespace dsl_detail {

struct BlockPiece {
  Partition lam;
  bool dual = false;
  long shift = 0;
};

/** Shortest presentation of one block weight as a Schur functor and shift. */
inline BlockPiece block_piece(const std::vector<long>& w) {
  long sum = 0;
  for (long x : w) sum += x;
  long d = (long)w.size();
  BlockPiece a;
  a.dual = true;
  a.shift = w.back();
  for (long x : w) a.lam.push_back(x - a.shift);
  long size_a = sum - d * w.back();
  BlockPiece b;
  b.dual = false;
  b.shift = w.front();
  for (long i = d - 1; i >= 0; --i) b.lam.push_back(b.shift - w[i]);
  long size_b = d * w.front() - sum;
  if (size_b < size_a) return b;
  if (size_a < size_b) return a;
  return std::llabs(b.shift) < std::llabs(a.shift) ? b : a;
}

inline void append_piece(std::vector<std::string>& pieces,
                         const Partition& lam0, bool dual,
                         const std::string& atom) {
  Partition lam = lam0;
  while (!lam.empty() && lam.back() == 0) lam.pop_back();
  if (lam.empty()) return;
  std::string base = dual ? "dual(" + atom + ")" : atom;
  if (lam.size() == 1 && lam[0] == 1) {
    pieces.push_back(base);
    return;
  }
  bool ones = true;
  for (long x : lam)
    if (x != 1) ones = false;
  std::ostringstream os;
  if (ones) {
    os << "Wedge^" << lam.size() << "(" << base << ")";
  } else if (lam.size() == 1) {
    os << "Sym^" << lam[0] << "(" << base << ")";
  } else {
    os << "Schur[";
    for (size_t i = 0; i < lam.size(); ++i) os << (i ? "," : "") << lam[i];
    os << "](" << base << ")";
  }
  pieces.push_back(os.str());
}

}  // namespace dsl_detail

inline std::string print_irred(const BundleOps& ops, const Irred& e0) {
  Irred e = ops.normal_form(e0);
  const auto& shapes = ops.shapes();
  std::vector<std::string> pieces;
  std::vector<std::vector<long>> tw;
  bool twisted = false;
  for (size_t f = 0; f < shapes.size(); ++f) {
    const FlagShape& fl = shapes[f];
    long nb = fl.num_blocks();
    std::vector<long> shifts(nb, 0);
    std::vector<dsl_detail::BlockPiece> bp(nb);
    for (long b = 0; b < nb; ++b) {
      bp[b] = dsl_detail::block_piece(e[f][b]);
      shifts[b] = bp[b].shift;
    }
    for (long b = 0; b < nb; ++b) {
      std::string atom;
      if (b == 0)
        atom = nb == 2 ? "U[" + std::to_string(f + 1) + "]"
                       : "R[" + std::to_string(f + 1) + ",1]";
      else if (b == nb - 1)
        atom = nb == 2 ? "Q[" + std::to_string(f + 1) + "]"
                       : "Q[" + std::to_string(f + 1) + "," +
                             std::to_string(nb - 1) + "]";
      else
        atom = "R[" + std::to_string(f + 1) + "," + std::to_string(b + 1) + "]";
      dsl_detail::append_piece(pieces, bp[b].lam, bp[b].dual, atom);
    }
    tw.push_back(shifts_to_twist(fl, shifts));
    for (long t : tw.back())
      if (t != 0) twisted = true;
  }
  std::ostringstream os;
  for (size_t i = 0; i < pieces.size(); ++i) os << (i ? "*" : "") << pieces[i];
  if (twisted || pieces.empty()) {
    if (!pieces.empty()) os << "*";
    os << print_twist(shapes, tw);
  }
  return os.str();
}

inline std::string print_bundle(const BundleOps& ops, const BundleSum& s0) {
  BundleSum s = ops.normal_sum(s0);
  if (s.empty()) throw std::invalid_argument("cannot print an empty bundle");
  std::ostringstream os;
  bool first = true;
  for (auto& [e, mult] : s) {
    if (!first) os << " + ";
    os << print_irred(ops, e);
    if (mult != 1) os << "^" << mult;
    first = false;
  }
  return os.str();
}

inline std::string print_spec(const SpecAst& ast) {
  BundleOps ops(ast.shapes);
  return print_ambient(ast.shapes) + " ; " + print_bundle(ops, ast.bundle);
}

}  // namespace fzl
