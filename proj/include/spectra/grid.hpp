#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace spectra {

using cplx = std::complex<double>;

/// Uniform grid of interior nodes.
///
/// Dirichlet grids carry n interior nodes x_j = a + j*h (j = 1..n) with
/// h = (b - a)/(n + 1); the endpoints a and b hold implied zeros. Periodic
/// grids use h = (b - a)/n, so the last node sits on b, which is identified
/// with a, and the lattice period is b - a.
class Grid {
 public:
  Grid() = default;

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  bool periodic() const noexcept { return periodic_; }

  /// Node coordinate for zero-based index i (the node x_{i+1}).
  double node(std::size_t i) const noexcept { return a_ + static_cast<double>(i + 1) * h_; }
  std::vector<double> nodes() const;

  /// True when a = -b, i.e. nodes come in +/- pairs.
  bool symmetric() const noexcept;

  /// Index of the node mirrored through the origin; only meaningful on symmetric grids.
  std::size_t mirror(std::size_t i) const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  friend Grid make_grid(double a, double b, std::size_t n);
  friend Grid make_periodic_grid(double a, double b, std::size_t n);

  double a_ = 0.0;
  double b_ = 1.0;
  std::size_t n_ = 0;
  double h_ = 0.0;
  bool periodic_ = false;
};

/// Dirichlet grid on (a, b) with n interior nodes. Throws invalid_extent.
Grid make_grid(double a, double b, std::size_t n);

/// Periodic grid of n nodes covering one period [a, b).
Grid make_periodic_grid(double a, double b, std::size_t n);

/// Complex samples on a grid.
struct GridFunction {
  Grid grid;
  std::vector<cplx> values;

  GridFunction() = default;
  GridFunction(Grid g, std::vector<cplx> v);
  explicit GridFunction(const Grid& g) : grid(g), values(g.size()) {}

  std::size_t size() const noexcept { return values.size(); }
  cplx operator[](std::size_t i) const noexcept { return values[i]; }
  cplx& operator[](std::size_t i) noexcept { return values[i]; }
};

struct Dirichlet {};

/// Bloch-periodic closure: psi(x + (b - a)) = exp(i theta) psi(x).
struct Bloch {
  double theta = 0.0;
};

using BoundaryCondition = std::variant<Dirichlet, Bloch>;

enum class Structure { general, tridiagonal, tridiagonal_plus_corners };

/// Square complex matrix. Tridiagonal structures keep only their bands
/// (plus the two corner entries), so entries outside the declared structure
/// are exactly zero and never stored.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  static ComplexMatrix dense(std::size_t n);
  static ComplexMatrix dense(std::size_t n, std::vector<cplx> row_major);
  static ComplexMatrix tridiagonal(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> super);
  /// Tridiagonal plus entries at (0, n-1) and (n-1, 0).
  static ComplexMatrix with_corners(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> super,
                                    cplx upper_right, cplx lower_left);

  std::size_t size() const noexcept { return n_; }
  Structure structure() const noexcept { return structure_; }
  bool is_banded() const noexcept { return structure_ != Structure::general; }

  cplx operator()(std::size_t i, std::size_t j) const;
  /// Throws std::out_of_range when (i, j) lies outside the structure.
  void set(std::size_t i, std::size_t j, cplx value);

  std::span<const cplx> diagonal() const noexcept { return diag_; }
  std::span<const cplx> sub_diagonal() const noexcept { return sub_; }
  std::span<const cplx> super_diagonal() const noexcept { return super_; }
  cplx upper_right() const noexcept { return upper_right_; }
  cplx lower_left() const noexcept { return lower_left_; }

  std::vector<cplx> multiply(std::span<const cplx> x) const;
  double frobenius_norm() const;
  cplx trace() const;
  /// Row-major dense copy.
  std::vector<cplx> to_dense() const;

 private:
  std::size_t n_ = 0;
  Structure structure_ = Structure::general;
  std::vector<cplx> dense_;
  std::vector<cplx> sub_, diag_, super_;
  cplx upper_right_{}, lower_left_{};
};

/// Finite-difference matrix of -d^2/dx^2 + U(x), central second differences.
ComplexMatrix assemble_1d(const GridFunction& potential, const BoundaryCondition& bc = Dirichlet{});

/// Reduced radial operator -u'' + [l(l+1)/r^2 + V(r)] u with u(0) = u(R) = 0.
ComplexMatrix assemble_radial(const GridFunction& potential, unsigned l);

/// h * sum conj(f_j) g_j. Throws grid_mismatch.
cplx inner_product(const GridFunction& f, const GridFunction& g);

/// Discrete norm sqrt(h * sum |f_j|^2).
double norm(const GridFunction& f);

/// Rotates v so its entry of largest modulus is real and positive.
void align_phase(std::span<cplx> v);

/// Scales f to unit discrete norm and aligns the phase. Throws zero_function.
GridFunction normalize(const GridFunction& f);

/// Nonzero entries as CSV rows "row,col,re,im".
void write_matrix_csv(std::ostream& out, const ComplexMatrix& m);

}  // namespace spectra
