#include "hessianlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <vector>

namespace hessianlab {

namespace {

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Type type = Type::End;
  double number = 0.0;
  std::string text;
  int pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    tok_ = Token{};
    tok_.pos = static_cast<int>(i_);
    if (i_ >= src_.size()) {
      tok_.type = Token::Type::End;
      return;
    }
    const char c = src_[i_];
    switch (c) {
      case '+': tok_.type = Token::Type::Plus; ++i_; return;
      case '-': tok_.type = Token::Type::Minus; ++i_; return;
      case '*': tok_.type = Token::Type::Star; ++i_; return;
      case '/': tok_.type = Token::Type::Slash; ++i_; return;
      case '^': tok_.type = Token::Type::Caret; ++i_; return;
      case '(': tok_.type = Token::Type::LParen; ++i_; return;
      case ')': tok_.type = Token::Type::RParen; ++i_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      tok_.type = Token::Type::Ident;
      tok_.text = std::string(src_.substr(i_, j - i_));
      i_ = j;
      return;
    }
    throw SyntaxError(tok_.pos, "number, variable, function, '(', or operator",
                      std::string("unexpected character '") + c + "' at position " +
                          std::to_string(tok_.pos));
  }

  void lex_number() {
    const std::size_t start = i_;
    while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
    if (i_ < src_.size() && src_[i_] == '.') {
      ++i_;
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
    }
    if (i_ == start + (src_[start] == '.' ? 1u : 0u) && src_[start] == '.')
      throw SyntaxError(static_cast<int>(start), "digits",
                        "malformed number at position " + std::to_string(start));
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      std::size_t k = j;
      while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
      if (k > j) i_ = k;  // exponent only if at least one digit follows
    }
    tok_.type = Token::Type::Number;
    tok_.number = std::stod(std::string(src_.substr(start, i_ - start)));
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Token tok_;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v, int pos = -1) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Number;
  n->number = v;
  n->pos = pos;
  return n;
}

NodePtr make_var(int index, int pos = -1) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Var;
  n->var = index;
  n->pos = pos;
  return n;
}

NodePtr make_unary(UnaryFn fn, NodePtr a, int pos = -1) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Unary;
  n->fn = fn;
  n->a = std::move(a);
  n->pos = pos;
  return n;
}

// Detects a literal (possibly negated) integer exponent so that Pow can
// evaluate by repeated multiplication.
std::optional<long long> literal_int(const ExprNode& nd) {
  if (nd.kind == ExprNode::Kind::Unary && nd.fn == UnaryFn::Neg) {
    auto inner = literal_int(*nd.a);
    if (inner) return -*inner;
    return std::nullopt;
  }
  if (nd.kind != ExprNode::Kind::Number) return std::nullopt;
  const double v = nd.number;
  if (std::floor(v) != v || std::abs(v) > 1e9) return std::nullopt;
  return static_cast<long long>(v);
}

NodePtr make_binary(BinOp op, NodePtr a, NodePtr b, int pos = -1) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->pos = pos;
  if (op == BinOp::Pow) {
    if (auto k = literal_int(*n->b)) {
      n->int_pow = true;
      n->ipow = *k;
    }
  }
  return n;
}

const std::map<std::string, UnaryFn, std::less<>>& function_table() {
  static const std::map<std::string, UnaryFn, std::less<>> table = {
      {"exp", UnaryFn::Exp},   {"log", UnaryFn::Log}, {"sqrt", UnaryFn::Sqrt},
      {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos}, {"sinh", UnaryFn::Sinh},
      {"cosh", UnaryFn::Cosh},
  };
  return table;
}

// Grammar (precedence low to high): sum, product, unary minus, power, atom.
// '^' is right-associative and binds tighter than unary minus, so -x1^2 is
// -(x1^2) while 2^-3 still parses.
class Parser {
 public:
  Parser(std::string_view src, int n) : lex_(src), n_(n) {}

  NodePtr parse() {
    NodePtr e = parse_expr();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End)
      throw SyntaxError(t.pos, "operator or end of input",
                        "unexpected trailing input at position " + std::to_string(t.pos));
    return e;
  }

 private:
  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::Type::Plus || t.type == Token::Type::Minus) {
        Token op = lex_.take();
        NodePtr rhs = parse_term();
        lhs = make_binary(op.type == Token::Type::Plus ? BinOp::Add : BinOp::Sub, lhs, rhs,
                          op.pos);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::Type::Star || t.type == Token::Type::Slash) {
        Token op = lex_.take();
        NodePtr rhs = parse_factor();
        lhs = make_binary(op.type == Token::Type::Star ? BinOp::Mul : BinOp::Div, lhs, rhs,
                          op.pos);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Minus) {
      Token op = lex_.take();
      return make_unary(UnaryFn::Neg, parse_factor(), op.pos);
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Caret) {
      Token op = lex_.take();
      NodePtr expo = parse_factor();  // right-assoc; allows negated exponents
      return make_binary(BinOp::Pow, base, expo, op.pos);
    }
    return base;
  }

  NodePtr parse_atom() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::Type::Number:
        return make_number(t.number, t.pos);
      case Token::Type::LParen: {
        NodePtr e = parse_expr();
        expect(Token::Type::RParen, "')'");
        return e;
      }
      case Token::Type::Ident: {
        if (t.text.size() >= 2 && t.text[0] == 'x' &&
            std::all_of(t.text.begin() + 1, t.text.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          if (t.text.size() > 9) throw VariableOutOfRange(-1, n_, t.pos);
          const long idx = std::stol(t.text.substr(1));
          if (idx < 1 || idx > n_)
            throw VariableOutOfRange(static_cast<int>(idx), n_, t.pos);
          return make_var(static_cast<int>(idx), t.pos);
        }
        auto it = function_table().find(t.text);
        if (it == function_table().end()) throw UnknownIdentifier(t.text, t.pos);
        expect(Token::Type::LParen, "'('");
        NodePtr arg = parse_expr();
        expect(Token::Type::RParen, "')'");
        return make_unary(it->second, arg, t.pos);
      }
      default:
        throw SyntaxError(t.pos, "number, variable, function, '(', or '-'",
                          "unexpected token at position " + std::to_string(t.pos));
    }
  }

  void expect(Token::Type type, const std::string& what) {
    Token t = lex_.take();
    if (t.type != type)
      throw SyntaxError(t.pos, what,
                        "expected " + what + " at position " + std::to_string(t.pos));
  }

  Lexer lex_;
  int n_;
};

int precedence(const ExprNode& nd) {
  switch (nd.kind) {
    case ExprNode::Kind::Number:
      return nd.number < 0 ? 1 : 5;
    case ExprNode::Kind::Var:
      return 5;
    case ExprNode::Kind::Unary:
      return nd.fn == UnaryFn::Neg ? 3 : 5;
    case ExprNode::Kind::Binary:
      switch (nd.op) {
        case BinOp::Add:
        case BinOp::Sub:
          return 1;
        case BinOp::Mul:
        case BinOp::Div:
          return 2;
        case BinOp::Pow:
          return 4;
      }
  }
  return 5;
}

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const ExprNode& nd, std::string& out);

void print_child(const ExprNode& child, int parent_prec, std::string& out) {
  const bool parens = precedence(child) <= parent_prec;
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const ExprNode& nd, std::string& out) {
  switch (nd.kind) {
    case ExprNode::Kind::Number:
      out += fmt_number(nd.number);
      return;
    case ExprNode::Kind::Var:
      out += 'x';
      out += std::to_string(nd.var);
      return;
    case ExprNode::Kind::Unary:
      switch (nd.fn) {
        case UnaryFn::Neg:
          out += '-';
          print_child(*nd.a, 3, out);
          return;
        case UnaryFn::Exp: out += "exp"; break;
        case UnaryFn::Log: out += "log"; break;
        case UnaryFn::Sqrt: out += "sqrt"; break;
        case UnaryFn::Sin: out += "sin"; break;
        case UnaryFn::Cos: out += "cos"; break;
        case UnaryFn::Sinh: out += "sinh"; break;
        case UnaryFn::Cosh: out += "cosh"; break;
      }
      out += '(';
      print_node(*nd.a, out);
      out += ')';
      return;
    case ExprNode::Kind::Binary: {
      const int prec = precedence(nd);
      switch (nd.op) {
        case BinOp::Add:
          print_child(*nd.a, prec - 1, out);
          out += " + ";
          print_child(*nd.b, prec, out);
          return;
        case BinOp::Sub:
          print_child(*nd.a, prec - 1, out);
          out += " - ";
          print_child(*nd.b, prec, out);
          return;
        case BinOp::Mul:
          print_child(*nd.a, prec - 1, out);
          out += "*";
          print_child(*nd.b, prec, out);
          return;
        case BinOp::Div:
          print_child(*nd.a, prec - 1, out);
          out += "/";
          print_child(*nd.b, prec, out);
          return;
        case BinOp::Pow:
          print_child(*nd.a, prec, out);
          out += "^";
          print_child(*nd.b, prec - 1, out);
          return;
      }
    }
  }
}

NodePtr substitute(const NodePtr& nd, const std::vector<NodePtr>& repl) {
  switch (nd->kind) {
    case ExprNode::Kind::Number:
      return nd;
    case ExprNode::Kind::Var:
      return repl[nd->var - 1];
    case ExprNode::Kind::Unary: {
      NodePtr a = substitute(nd->a, repl);
      return a == nd->a ? nd : make_unary(nd->fn, a, nd->pos);
    }
    case ExprNode::Kind::Binary: {
      NodePtr a = substitute(nd->a, repl);
      NodePtr b = substitute(nd->b, repl);
      return (a == nd->a && b == nd->b) ? nd : make_binary(nd->op, a, b, nd->pos);
    }
  }
  return nd;
}

}  // namespace

Ast Ast::parse(std::string_view source, int n) {
  if (n < 1) throw ShapeMismatch("expression dimension must be positive");
  Parser p(source, n);
  return from_root(p.parse(), n);
}

Ast Ast::from_root(std::shared_ptr<const ExprNode> root, int n) {
  Ast a;
  a.root_ = std::move(root);
  a.n_ = n;
  return a;
}

std::string Ast::pretty() const {
  if (!root_) return {};
  std::string out;
  print_node(*root_, out);
  return out;
}

double Ast::operator()(const VecX& x) const {
  std::vector<double> args(x.data(), x.data() + x.size());
  return eval<double>(args);
}

Jet Ast::eval_jet(const VecX& point, int order) const {
  std::vector<Jet> seeds = Jet::seed(point, order);
  Jet r = eval<Jet>(seeds);
  if (r.detached()) {
    // Constant expression: promote to the seed shape.
    r = Jet::constant(JetLayout::get(static_cast<int>(point.size()), order), r.value());
  }
  return r;
}

Ast affine_pullback(const Ast& f, const MatX& A, const VecX& b, double det_threshold) {
  const int n = f.dim();
  if (A.rows() != n || A.cols() != n || b.size() != n)
    throw ShapeMismatch("affine map dimensions do not match expression dimension");
  const double det = A.determinant();
  if (std::abs(det) < det_threshold) throw SingularMatrix(det);

  std::vector<NodePtr> repl(n);
  for (int i = 0; i < n; ++i) {
    NodePtr sum;
    for (int j = 0; j < n; ++j) {
      if (A(i, j) == 0.0) continue;
      NodePtr term = A(i, j) == 1.0
                         ? make_var(j + 1)
                         : make_binary(BinOp::Mul, make_number(A(i, j)), make_var(j + 1));
      sum = sum ? make_binary(BinOp::Add, sum, term) : term;
    }
    if (b[i] != 0.0 || !sum) {
      NodePtr c = make_number(b[i]);
      sum = sum ? make_binary(BinOp::Add, sum, c) : c;
    }
    repl[i] = sum;
  }
  return Ast::from_root(substitute(f.root_ptr(), repl), n);
}

}  // namespace hessianlab
