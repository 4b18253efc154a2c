#include "spectra/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <utility>

#include "spectra/error.hpp"

namespace spectra {

using namespace expr;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

NodePtr make(auto&& alt) { return std::make_shared<const Node>(Node{std::forward<decltype(alt)>(alt)}); }

bool lookup_function(std::string_view name, Function& fn) {
  static constexpr std::pair<std::string_view, Function> table[] = {
      {"sin", Function::sin}, {"cos", Function::cos},   {"tan", Function::tan},   {"cot", Function::cot},
      {"exp", Function::exp}, {"log", Function::log},   {"sqrt", Function::sqrt}, {"abs", Function::abs},
  };
  for (const auto& [n, f] : table) {
    if (n == name) {
      fn = f;
      return true;
    }
  }
  return false;
}

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::tan: return "tan";
    case Function::cot: return "cot";
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) {
      if (src_[pos_] == ')') throw SyntaxError(ErrorCode::unbalanced_parentheses, pos_, "unmatched ')'");
      throw SyntaxError(ErrorCode::syntax_error, pos_, std::string("unexpected '") + src_[pos_] + "'");
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Binary{BinaryOp::add, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make(Binary{BinaryOp::sub, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Binary{BinaryOp::mul, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(Binary{BinaryOp::div, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Negate{parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_base();
    if (accept('^')) return make(Binary{BinaryOp::pow, base, parse_unary()});
    return base;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(ErrorCode::syntax_error, pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      NodePtr inner = parse_expr();
      if (!accept(')')) throw SyntaxError(ErrorCode::unbalanced_parentheses, open, "unclosed '('");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == ')') throw SyntaxError(ErrorCode::unbalanced_parentheses, pos_, "unexpected ')'");
    throw SyntaxError(ErrorCode::syntax_error, pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError(ErrorCode::syntax_error, start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError(ErrorCode::syntax_error, save, "malformed exponent");
    }
    const std::string text(src_.substr(start, pos_ - start));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) throw SyntaxError(ErrorCode::syntax_error, start, "number out of range");
    return make(Constant{cplx(v, 0.0)});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(src_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      Function fn{};
      if (!lookup_function(name, fn)) {
        throw SyntaxError(ErrorCode::unknown_function, start, "unknown function '" + name + "'");
      }
      const std::size_t open = pos_++;
      std::vector<NodePtr> args;
      args.push_back(parse_expr());
      while (accept(',')) args.push_back(parse_expr());
      if (!accept(')')) throw SyntaxError(ErrorCode::unbalanced_parentheses, open, "unclosed '('");
      if (args.size() != 1) {
        throw SyntaxError(ErrorCode::syntax_error, start, name + " takes exactly one argument");
      }
      return make(Call{fn, std::move(args)});
    }
    if (name == "i") return make(Constant{cplx(0.0, 1.0)});
    if (name == "x" || name == "r") return make(Variable{name});
    return make(Parameter{name});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

[[noreturn]] void singular(double coord, const std::string& what) {
  throw SingularityError(coord, SingularityError::no_index, what);
}

cplx integer_power(cplx base, long long k, double coord) {
  if (k < 0) {
    if (base == cplx{}) singular(coord, "zero raised to a negative power");
    return 1.0 / integer_power(base, -k, coord);
  }
  cplx result(1.0, 0.0);
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

cplx power(cplx base, cplx exponent, double coord) {
  const double re = exponent.real();
  if (exponent.imag() == 0.0 && re == std::round(re) && std::abs(re) <= 1024.0) {
    return integer_power(base, static_cast<long long>(re), coord);
  }
  if (base == cplx{}) {
    if (re > 0.0) return {};
    singular(coord, "zero raised to a non-positive power");
  }
  return std::exp(exponent * std::log(base));
}

bool near_zero(cplx v, cplx arg) { return std::abs(v) <= 16.0 * kEps * std::max(1.0, std::abs(arg)); }

cplx eval(const Node& node, const Bindings& b, double coord) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [coord](const Variable&) { return cplx(coord, 0.0); },
          [&b](const Parameter& p) {
            auto it = b.find(p.name);
            if (it == b.end()) throw Error(ErrorCode::unbound_parameter, "parameter '" + p.name + "' is not bound");
            return cplx(it->second, 0.0);
          },
          [&](const Negate& n) { return -eval(*n.operand, b, coord); },
          [&](const Binary& bin) {
            const cplx l = eval(*bin.lhs, b, coord);
            const cplx r = eval(*bin.rhs, b, coord);
            switch (bin.op) {
              case BinaryOp::add: return l + r;
              case BinaryOp::sub: return l - r;
              case BinaryOp::mul: return l * r;
              case BinaryOp::div:
                if (r == cplx{}) singular(coord, "division by zero");
                return l / r;
              case BinaryOp::pow: return power(l, r, coord);
            }
            return cplx{};
          },
          [&](const Call& call) {
            const cplx z = eval(*call.args.front(), b, coord);
            switch (call.fn) {
              case Function::sin: return std::sin(z);
              case Function::cos: return std::cos(z);
              case Function::tan: {
                const cplx c = std::cos(z);
                if (near_zero(c, z)) singular(coord, "tan pole");
                return std::sin(z) / c;
              }
              case Function::cot: {
                const cplx s = std::sin(z);
                if (near_zero(s, z)) singular(coord, "cot pole");
                return std::cos(z) / s;
              }
              case Function::exp: return std::exp(z);
              case Function::log:
                if (z == cplx{}) singular(coord, "log of zero");
                return std::log(z);
              case Function::sqrt: return std::sqrt(z);
              case Function::abs: return cplx(std::abs(z), 0.0);
            }
            return cplx{};
          },
      },
      node.data);
}

void collect_parameters(const Node& node, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const Constant&) {},
                 [](const Variable&) {},
                 [&out](const Parameter& p) { out.insert(p.name); },
                 [&out](const Negate& n) { collect_parameters(*n.operand, out); },
                 [&out](const Binary& bin) {
                   collect_parameters(*bin.lhs, out);
                   collect_parameters(*bin.rhs, out);
                 },
                 [&out](const Call& c) {
                   for (const auto& a : c.args) collect_parameters(*a, out);
                 },
             },
             node.data);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Node& node, std::string& out) {
  std::visit(overloaded{
                 [&out](const Constant& c) {
                   const auto real_text = [](double v) {
                     return std::signbit(v) ? "(" + format_real(v) + ")" : format_real(v);
                   };
                   const double re = c.value.real(), im = c.value.imag();
                   if (im == 0.0) {
                     out += real_text(re);
                   } else if (re == 0.0 && im == 1.0) {
                     out += "i";
                   } else {
                     const std::string imag_part = "(" + real_text(im) + "*i)";
                     out += re == 0.0 ? imag_part : "(" + real_text(re) + "+" + imag_part + ")";
                   }
                 },
                 [&out](const Variable& v) { out += v.symbol; },
                 [&out](const Parameter& p) { out += p.name; },
                 [&out](const Negate& n) {
                   out += "(-";
                   print(*n.operand, out);
                   out += ")";
                 },
                 [&out](const Binary& bin) {
                   static constexpr char ops[] = {'+', '-', '*', '/', '^'};
                   out += "(";
                   print(*bin.lhs, out);
                   out += ops[static_cast<int>(bin.op)];
                   print(*bin.rhs, out);
                   out += ")";
                 },
                 [&out](const Call& c) {
                   out += function_name(c.fn);
                   out += "(";
                   print(*c.args.front(), out);
                   out += ")";
                 },
             },
             node.data);
}

}  // namespace

std::set<std::string> Expr::parameters() const {
  std::set<std::string> out;
  if (root_) collect_parameters(*root_, out);
  return out;
}

Expr parse(std::string_view source) { return Expr(Parser(source).parse_all()); }

cplx evaluate(const Expr& e, const Bindings& bindings, double coord) {
  const cplx v = eval(e.root(), bindings, coord);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) singular(coord, "non-finite value");
  return v;
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e.root(), out);
  return out;
}

PotentialSpec make_potential(std::string_view source, Bindings bindings, Coordinate coordinate) {
  PotentialSpec spec{parse(source), std::move(bindings), coordinate, std::string(source)};
  for (const std::string& p : spec.expression.parameters()) {
    if (!spec.bindings.contains(p)) {
      throw Error(ErrorCode::unbound_parameter, "parameter '" + p + "' is not bound");
    }
  }
  return spec;
}

GridFunction evaluate_on_grid(const PotentialSpec& spec, const Grid& grid) {
  GridFunction out(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    try {
      out.values[j] = spec(x);
    } catch (const SingularityError& e) {
      throw SingularityError(x, j, "potential is singular");
    }
  }
  return out;
}

SymmetryReport analyze_symmetry(const PotentialSpec& spec, const Grid& probe, double tol) {
  if (!probe.symmetric()) {
    throw Error(ErrorCode::invalid_extent, "symmetry probes need a grid symmetric about 0");
  }
  SymmetryReport rep;
  rep.tolerance = tol;
  rep.probes = probe.size();
  for (std::size_t j = 0; j < probe.size(); ++j) {
    const double x = probe.node(j);
    cplx u, um;
    try {
      u = spec(x);
      um = spec(-x);
    } catch (const SingularityError&) {
      ++rep.skipped;
      continue;
    }
    rep.max_imag = std::max(rep.max_imag, std::abs(u.imag()));
    rep.pt_deviation = std::max(rep.pt_deviation, std::abs(std::conj(um) - u));
    rep.odd_deviation = std::max(rep.odd_deviation, std::abs(um.imag() + u.imag()));
  }
  if (10 * rep.skipped > rep.probes) {
    throw SingularityError(0.0, SingularityError::no_index,
                           std::to_string(rep.skipped) + " of " + std::to_string(rep.probes) + " probes are singular");
  }
  rep.is_hermitian = rep.max_imag <= tol;
  rep.is_pt_symmetric = rep.pt_deviation <= tol;
  rep.imag_part_odd = rep.is_hermitian || rep.odd_deviation <= tol;
  return rep;
}

}  // namespace spectra
