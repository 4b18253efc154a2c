#pragma once

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spectra/grid.hpp"

namespace spectra {

using Bindings = std::map<std::string, double, std::less<>>;

namespace expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
  cplx value;
};
/// The coordinate symbol, "x" or "r".
struct Variable {
  std::string symbol;
};
struct Parameter {
  std::string name;
};
struct Negate {
  NodePtr operand;
};

enum class BinaryOp { add, sub, mul, div, pow };

struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};

enum class Function { sin, cos, tan, cot, exp, log, sqrt, abs };

struct Call {
  Function fn;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Constant, Variable, Parameter, Negate, Binary, Call> data;
};

}  // namespace expr

/// Immutable parsed expression. Copies share the tree.
class Expr {
 public:
  Expr() = default;
  explicit Expr(expr::NodePtr root) : root_(std::move(root)) {}

  const expr::Node& root() const { return *root_; }
  bool empty() const noexcept { return !root_; }

  /// Names of all parameters referenced by the tree.
  std::set<std::string> parameters() const;

 private:
  expr::NodePtr root_;
};

/// Parses the potential grammar:
///   expr   := term (("+"|"-") term)*
///   term   := unary (("*"|"/") unary)*
///   unary  := "-" unary | power
///   power  := base ("^" unary)?
///   base   := number | "i" | ident | ident "(" expr ")" | "(" expr ")"
/// so "^" binds tighter than unary minus and is right-associative.
/// Throws SyntaxError with the byte offset of the problem.
Expr parse(std::string_view source);

/// Evaluates the tree at one coordinate. Integer-valued exponents use
/// repeated multiplication; others use exp(b log a) on the principal branch.
/// Throws SingularityError on division by zero or a non-finite result, and
/// Error(unbound_parameter) for a missing binding.
cplx evaluate(const Expr& e, const Bindings& bindings, double coord);

/// Fully parenthesized text that parses back to an equivalent tree.
std::string to_string(const Expr& e);

enum class Coordinate { x, r };

/// Potential U (or V) with its parameter values. U^R and U^I are always
/// derived from the complex evaluation.
struct PotentialSpec {
  Expr expression;
  Bindings bindings;
  Coordinate coordinate = Coordinate::x;
  std::string source;

  cplx operator()(double coord) const { return evaluate(expression, bindings, coord); }
  double real_part(double coord) const { return (*this)(coord).real(); }
  double imag_part(double coord) const { return (*this)(coord).imag(); }
};

/// Parses source and checks that every parameter is bound.
PotentialSpec make_potential(std::string_view source, Bindings bindings, Coordinate coordinate = Coordinate::x);

/// Samples the potential on every node. Singularities are rethrown with the node index.
GridFunction evaluate_on_grid(const PotentialSpec& spec, const Grid& grid);

struct SymmetryReport {
  bool is_hermitian = false;
  bool is_pt_symmetric = false;
  bool imag_part_odd = false;
  double max_imag = 0.0;         // max |Im U(x_j)|
  double pt_deviation = 0.0;     // max |conj(U(-x_j)) - U(x_j)|
  double odd_deviation = 0.0;    // max |Im U(-x_j) + Im U(x_j)|
  double tolerance = 0.0;
  std::size_t probes = 0;
  std::size_t skipped = 0;       // probes dropped because U(x_j) or U(-x_j) is singular
};

/// Sampled symmetry classification on a probe grid symmetric about 0.
/// Throws invalid_extent for an asymmetric probe grid and
/// evaluation_singularity when more than 10% of the probes are singular.
SymmetryReport analyze_symmetry(const PotentialSpec& spec, const Grid& probe, double tol);

}  // namespace spectra
