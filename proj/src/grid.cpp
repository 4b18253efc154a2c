#include "spectra/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

void check_extent(double a, double b, std::size_t n) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a)) {
    throw Error(ErrorCode::invalid_extent,
                "grid requires finite b > a, got a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
  if (n < 2) {
    throw Error(ErrorCode::invalid_extent, "grid requires at least 2 nodes, got " + std::to_string(n));
  }
}

}  // namespace

Grid make_grid(double a, double b, std::size_t n) {
  check_extent(a, b, n);
  Grid g;
  g.a_ = a;
  g.b_ = b;
  g.n_ = n;
  g.h_ = (b - a) / static_cast<double>(n + 1);
  g.periodic_ = false;
  return g;
}

Grid make_periodic_grid(double a, double b, std::size_t n) {
  check_extent(a, b, n);
  Grid g;
  g.a_ = a;
  g.b_ = b;
  g.n_ = n;
  g.h_ = (b - a) / static_cast<double>(n);
  g.periodic_ = true;
  return g;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = node(i);
  return xs;
}

bool Grid::symmetric() const noexcept {
  return n_ > 0 && std::abs(a_ + b_) <= 1e-14 * std::max(std::abs(a_), std::abs(b_));
}

std::size_t Grid::mirror(std::size_t i) const noexcept {
  if (!periodic_) return n_ - 1 - i;
  return i == n_ - 1 ? i : n_ - 2 - i;
}

GridFunction::GridFunction(Grid g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::grid_mismatch, "grid function has " + std::to_string(values.size()) +
                                              " values for a grid of " + std::to_string(grid.size()) + " nodes");
  }
}

// ComplexMatrix -------------------------------------------------------------

ComplexMatrix ComplexMatrix::dense(std::size_t n) { return dense(n, std::vector<cplx>(n * n)); }

ComplexMatrix ComplexMatrix::dense(std::size_t n, std::vector<cplx> row_major) {
  if (row_major.size() != n * n) throw Error(ErrorCode::dimension_mismatch, "dense matrix needs n*n entries");
  ComplexMatrix m;
  m.n_ = n;
  m.structure_ = Structure::general;
  m.dense_ = std::move(row_major);
  return m;
}

ComplexMatrix ComplexMatrix::tridiagonal(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> super) {
  const std::size_t n = diag.size();
  if (n == 0 || sub.size() != n - 1 || super.size() != n - 1) {
    throw Error(ErrorCode::dimension_mismatch, "tridiagonal bands have inconsistent lengths");
  }
  ComplexMatrix m;
  m.n_ = n;
  m.structure_ = Structure::tridiagonal;
  m.sub_ = std::move(sub);
  m.diag_ = std::move(diag);
  m.super_ = std::move(super);
  return m;
}

ComplexMatrix ComplexMatrix::with_corners(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> super,
                                          cplx upper_right, cplx lower_left) {
  ComplexMatrix m = tridiagonal(std::move(sub), std::move(diag), std::move(super));
  if (m.n_ < 3) throw Error(ErrorCode::dimension_mismatch, "corner entries need n >= 3");
  m.structure_ = Structure::tridiagonal_plus_corners;
  m.upper_right_ = upper_right;
  m.lower_left_ = lower_left;
  return m;
}

cplx ComplexMatrix::operator()(std::size_t i, std::size_t j) const {
  if (structure_ == Structure::general) return dense_[i * n_ + j];
  if (i == j) return diag_[i];
  if (j == i + 1) return super_[i];
  if (i == j + 1) return sub_[j];
  if (structure_ == Structure::tridiagonal_plus_corners) {
    if (i == 0 && j == n_ - 1) return upper_right_;
    if (i == n_ - 1 && j == 0) return lower_left_;
  }
  return {};
}

void ComplexMatrix::set(std::size_t i, std::size_t j, cplx value) {
  if (i >= n_ || j >= n_) throw std::out_of_range("matrix index out of range");
  if (structure_ == Structure::general) {
    dense_[i * n_ + j] = value;
    return;
  }
  if (i == j) {
    diag_[i] = value;
  } else if (j == i + 1) {
    super_[i] = value;
  } else if (i == j + 1) {
    sub_[j] = value;
  } else if (structure_ == Structure::tridiagonal_plus_corners && i == 0 && j == n_ - 1) {
    upper_right_ = value;
  } else if (structure_ == Structure::tridiagonal_plus_corners && i == n_ - 1 && j == 0) {
    lower_left_ = value;
  } else {
    throw std::out_of_range("entry outside the matrix structure");
  }
}

std::vector<cplx> ComplexMatrix::multiply(std::span<const cplx> x) const {
  if (x.size() != n_) throw Error(ErrorCode::dimension_mismatch, "matrix-vector size mismatch");
  std::vector<cplx> y(n_);
  if (structure_ == Structure::general) {
    for (std::size_t i = 0; i < n_; ++i) {
      cplx s{};
      const cplx* row = &dense_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    cplx s = diag_[i] * x[i];
    if (i > 0) s += sub_[i - 1] * x[i - 1];
    if (i + 1 < n_) s += super_[i] * x[i + 1];
    y[i] = s;
  }
  if (structure_ == Structure::tridiagonal_plus_corners) {
    y[0] += upper_right_ * x[n_ - 1];
    y[n_ - 1] += lower_left_ * x[0];
  }
  return y;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  auto acc = [&s](const std::vector<cplx>& v) {
    for (const cplx& z : v) s += std::norm(z);
  };
  if (structure_ == Structure::general) {
    acc(dense_);
  } else {
    acc(sub_);
    acc(diag_);
    acc(super_);
    s += std::norm(upper_right_) + std::norm(lower_left_);
  }
  return std::sqrt(s);
}

cplx ComplexMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<cplx> ComplexMatrix::to_dense() const {
  if (structure_ == Structure::general) return dense_;
  std::vector<cplx> d(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    d[i * n_ + i] = diag_[i];
    if (i + 1 < n_) {
      d[i * n_ + i + 1] = super_[i];
      d[(i + 1) * n_ + i] = sub_[i];
    }
  }
  if (structure_ == Structure::tridiagonal_plus_corners) {
    d[n_ - 1] = upper_right_;
    d[(n_ - 1) * n_] = lower_left_;
  }
  return d;
}

// Assembly --------------------------------------------------------------------

ComplexMatrix assemble_1d(const GridFunction& potential, const BoundaryCondition& bc) {
  const Grid& g = potential.grid;
  const std::size_t n = g.size();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  std::vector<cplx> diag(n), off(n - 1, cplx(-inv_h2, 0.0));
  for (std::size_t j = 0; j < n; ++j) diag[j] = 2.0 * inv_h2 + potential.values[j];

  if (const auto* bloch = std::get_if<Bloch>(&bc)) {
    const cplx phase = std::polar(1.0, bloch->theta);
    return ComplexMatrix::with_corners(off, std::move(diag), off, -inv_h2 * std::conj(phase), -inv_h2 * phase);
  }
  return ComplexMatrix::tridiagonal(off, std::move(diag), off);
}

ComplexMatrix assemble_radial(const GridFunction& potential, unsigned l) {
  const Grid& g = potential.grid;
  if (g.a() < 0.0) {
    throw Error(ErrorCode::invalid_extent, "radial grid must start at r = 0 or beyond");
  }
  GridFunction effective = potential;
  const double centrifugal = static_cast<double>(l) * static_cast<double>(l + 1);
  if (centrifugal != 0.0) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double r = g.node(j);
      effective.values[j] += centrifugal / (r * r);
    }
  }
  return assemble_1d(effective, Dirichlet{});
}

// Quadrature ------------------------------------------------------------------

cplx inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid) || f.size() != g.size()) {
    throw Error(ErrorCode::grid_mismatch, "inner product of functions on different grids");
  }
  cplx s{};
  for (std::size_t j = 0; j < f.size(); ++j) s += std::conj(f.values[j]) * g.values[j];
  return f.grid.spacing() * s;
}

double norm(const GridFunction& f) {
  double s = 0.0;
  for (const cplx& z : f.values) s += std::norm(z);
  return std::sqrt(f.grid.spacing() * s);
}

void align_phase(std::span<cplx> v) {
  if (v.empty()) return;
  std::size_t imax = 0;
  double amax = -1.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double a = std::abs(v[j]);
    if (a > amax) {
      amax = a;
      imax = j;
    }
  }
  if (amax <= 0.0) return;
  const cplx rot = std::conj(v[imax]) / amax;
  for (cplx& z : v) z *= rot;
  v[imax] = cplx(amax, 0.0);
}

GridFunction normalize(const GridFunction& f) {
  const double nrm = norm(f);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw Error(ErrorCode::zero_function, "cannot normalize a zero (or non-finite) function");
  }
  GridFunction out = f;
  for (cplx& z : out.values) z /= nrm;
  align_phase(out.values);
  return out;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m) {
  out << "row,col,re,im\n";
  char buf[128];
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m.is_banded() && !(i == j || i == j + 1 || j == i + 1 || (i == 0 && j == m.size() - 1) ||
                             (j == 0 && i == m.size() - 1))) {
        continue;
      }
      const cplx z = m(i, j);
      if (z == cplx{}) continue;
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", i, j, z.real(), z.imag());
      out << buf;
    }
  }
}

}  // namespace spectra
