#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "galmon/errors.hpp"
#include "galmon/slp.hpp"

namespace galmon {

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        t.text += advance();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Tok::Number;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
      if (pos_ < src_.size() && src_[pos_] == '.') {
        t.text += advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t look = pos_ + 1;
        if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
        if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
          while (pos_ < look) t.text += advance();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
        }
      }
      if (t.text == ".") throw ParseError("malformed number", t.line, t.column);
      return t;
    }
    if (std::string_view("+-*/^(),;").find(c) != std::string_view::npos) {
      t.kind = Tok::Symbol;
      t.text = std::string(1, advance());
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool is_keyword(const std::string& s) { return s == "params" || s == "unknowns" || s == "eqs" || s == "i"; }

class Parser {
public:
  explicit Parser(std::string_view text) : lex_(text) { cur_ = lex_.next(); }

  GateSystem parse() {
    while (cur_.kind == Tok::Ident && (cur_.text == "params" || cur_.text == "unknowns")) {
      const bool is_param = cur_.text == "params";
      shift();
      while (true) {
        if (cur_.kind != Tok::Ident) fail("expected identifier");
        if (is_keyword(cur_.text)) fail("'" + cur_.text + "' is reserved");
        if (symbols_.count(cur_.text)) fail("duplicate identifier '" + cur_.text + "'");
        if (is_param) {
          symbols_[cur_.text] = {true, params_.size()};
          params_.push_back(cur_.text);
        } else {
          symbols_[cur_.text] = {false, unknowns_.size()};
          unknowns_.push_back(cur_.text);
        }
        shift();
        if (accept(",")) continue;
        expect(";");
        break;
      }
    }
    if (cur_.kind != Tok::Ident || cur_.text != "eqs") fail("expected 'params', 'unknowns' or 'eqs'");
    shift();
    do {
      outputs_.push_back(expr());
      expect(";");
    } while (cur_.kind != Tok::End);

    if (params_.empty()) throw ParseError("no parameters declared", cur_.line, cur_.column);
    if (unknowns_.empty()) throw ParseError("no unknowns declared", cur_.line, cur_.column);
    return GateSystem(params_, unknowns_, arena_, outputs_);
  }

private:
  struct Symbol {
    bool is_param;
    std::size_t index;
  };

  NodeId expr() {
    NodeId acc = term();
    while (true) {
      if (accept("+")) {
        acc = literal_sum(acc, term(), 1.0);
      } else if (accept("-")) {
        acc = literal_sum(acc, term(), -1.0);
      } else {
        return acc;
      }
    }
  }

  const ExprNode* constant_at(NodeId id) const {
    const ExprNode& n = arena_.nodes()[id];
    return n.kind == NodeKind::Constant ? &n : nullptr;
  }

  // Complex literals such as 3*i and (2 - 3*i) become single constants.
  NodeId literal_product(NodeId a, NodeId b) {
    const ExprNode *ca = constant_at(a), *cb = constant_at(b);
    if (ca && cb && ca->value.imag() == 0.0 && cb->value == Complex(0.0, 1.0))
      return arena_.constant(Complex(0.0, ca->value.real()));
    return arena_.mul(a, b);
  }

  NodeId literal_sum(NodeId a, NodeId b, double sign) {
    const ExprNode *ca = constant_at(a), *cb = constant_at(b);
    if (ca && cb && ca->value.imag() == 0.0 && cb->value.real() == 0.0 && cb->value.imag() != 0.0)
      return arena_.constant(Complex(ca->value.real(), sign * cb->value.imag()));
    return sign > 0.0 ? arena_.add(a, b) : arena_.sub(a, b);
  }

  NodeId term() {
    NodeId acc = factor();
    while (true) {
      if (accept("*")) {
        acc = literal_product(acc, factor());
      } else if (accept("/")) {
        acc = arena_.div(acc, factor());
      } else {
        return acc;
      }
    }
  }

  NodeId factor() {
    const NodeId b = base();
    if (!accept("^")) return b;
    if (cur_.kind != Tok::Number || cur_.text.find_first_not_of("0123456789") != std::string::npos)
      fail("exponent must be a non-negative integer");
    const unsigned long e = std::strtoul(cur_.text.c_str(), nullptr, 10);
    shift();
    return arena_.pow(b, static_cast<std::uint32_t>(e));
  }

  NodeId base() {
    if (accept("-")) {
      const NodeId b = base();
      if (const ExprNode* c = constant_at(b)) return arena_.constant(-c->value);
      return arena_.neg(b);
    }
    if (accept("(")) {
      const NodeId e = expr();
      expect(")");
      return e;
    }
    if (cur_.kind == Tok::Number) {
      const double v = std::strtod(cur_.text.c_str(), nullptr);
      shift();
      return arena_.constant(v);
    }
    if (cur_.kind == Tok::Ident) {
      if (cur_.text == "i") {
        shift();
        return arena_.constant(Complex(0.0, 1.0));
      }
      auto it = symbols_.find(cur_.text);
      if (it == symbols_.end()) fail("undeclared identifier '" + cur_.text + "'");
      shift();
      return it->second.is_param ? arena_.parameter(it->second.index) : arena_.unknown(it->second.index);
    }
    fail(cur_.kind == Tok::End ? "unexpected end of input" : "unexpected '" + cur_.text + "'");
  }

  void shift() { cur_ = lex_.next(); }

  bool accept(const char* sym) {
    if (cur_.kind == Tok::Symbol && cur_.text == sym) {
      shift();
      return true;
    }
    return false;
  }

  void expect(const char* sym) {
    if (!accept(sym)) fail(std::string("expected '") + sym + "'");
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur_.line, cur_.column); }

  Lexer lex_;
  Token cur_;
  ExprArena arena_;
  std::map<std::string, Symbol> symbols_;
  std::vector<std::string> params_;
  std::vector<std::string> unknowns_;
  std::vector<NodeId> outputs_;
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_constant(Complex c) {
  if (c.imag() == 0.0) {
    const std::string s = format_double(c.real());
    return c.real() < 0.0 || std::signbit(c.real()) ? "(" + s + ")" : s;
  }
  std::string s = "(" + format_double(c.real());
  s += c.imag() < 0.0 ? " - " : " + ";
  s += format_double(std::abs(c.imag())) + "*i)";
  return s;
}

}  // namespace

GateSystem parse_system(std::string_view text) { return Parser(text).parse(); }

std::string print_system(const GateSystem& sys) {
  const auto& nodes = sys.nodes();
  std::vector<std::string> text(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExprNode& n = nodes[i];
    switch (n.kind) {
      case NodeKind::Constant:
        text[i] = format_constant(n.value);
        break;
      case NodeKind::Unknown:
        text[i] = sys.unknown_names()[n.index];
        break;
      case NodeKind::Parameter:
        text[i] = sys.parameter_names()[n.index];
        break;
      case NodeKind::Add:
        text[i] = "(" + text[n.left] + " + " + text[n.right] + ")";
        break;
      case NodeKind::Sub:
        text[i] = "(" + text[n.left] + " - " + text[n.right] + ")";
        break;
      case NodeKind::Mul:
        text[i] = "(" + text[n.left] + " * " + text[n.right] + ")";
        break;
      case NodeKind::Div:
        text[i] = "(" + text[n.left] + " / " + text[n.right] + ")";
        break;
      case NodeKind::Neg:
        text[i] = "(-" + text[n.left] + ")";
        break;
      case NodeKind::Pow:
        text[i] = text[n.left] + "^" + std::to_string(n.index);
        break;
    }
  }

  std::string out = "params ";
  for (std::size_t i = 0; i < sys.num_parameters(); ++i) out += (i ? ", " : "") + sys.parameter_names()[i];
  out += ";\nunknowns ";
  for (std::size_t i = 0; i < sys.num_unknowns(); ++i) out += (i ? ", " : "") + sys.unknown_names()[i];
  out += ";\neqs\n";
  for (NodeId o : sys.outputs()) out += "  " + text[o] + ";\n";
  return out;
}

}  // namespace galmon
