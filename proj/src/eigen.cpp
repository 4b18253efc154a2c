#include "spectra/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxInverseIterations = 200;

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

double two_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

struct Dense {
  std::size_t n;
  std::vector<cplx> a;
  cplx& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Diagonal similarity by powers of two so row and column norms are comparable.
void balance(Dense& m) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const std::size_t n = m.n;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(m(j, i));
        r += abs1(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double inv = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) m(i, j) *= inv;
        for (std::size_t j = 0; j < n; ++j) m(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form, in place.
void reduce_to_hessenberg(Dense& m) {
  const std::size_t n = m.n;
  if (n < 3) return;
  std::vector<cplx> v(n), s(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    double tail = 0.0;
    for (std::size_t i = 1; i < len; ++i) tail += std::norm(m(k + 1 + i, k));
    if (tail == 0.0) continue;

    const cplx x0 = m(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const cplx phase = x0 == cplx{} ? cplx(1.0, 0.0) : x0 / std::abs(x0);
    const cplx beta = -phase * xnorm;
    v[0] = x0 - beta;
    for (std::size_t i = 1; i < len; ++i) v[i] = m(k + 1 + i, k);
    double vv = 0.0;
    for (std::size_t i = 0; i < len; ++i) vv += std::norm(v[i]);
    const double scale = 2.0 / vv;

    // Left: rows k+1.., columns k..
    std::fill(s.begin() + k, s.end(), cplx{});
    for (std::size_t i = 0; i < len; ++i) {
      const cplx cv = std::conj(v[i]);
      const cplx* row = &m.a[(k + 1 + i) * n];
      for (std::size_t j = k; j < n; ++j) s[j] += cv * row[j];
    }
    for (std::size_t i = 0; i < len; ++i) {
      const cplx f = scale * v[i];
      cplx* row = &m.a[(k + 1 + i) * n];
      for (std::size_t j = k; j < n; ++j) row[j] -= f * s[j];
    }
    // Right: all rows, columns k+1..
    for (std::size_t i = 0; i < n; ++i) {
      cplx* row = &m.a[i * n + k + 1];
      cplx t{};
      for (std::size_t l = 0; l < len; ++l) t += row[l] * v[l];
      t *= scale;
      for (std::size_t l = 0; l < len; ++l) row[l] -= t * std::conj(v[l]);
    }
    m(k + 1, k) = beta;
    for (std::size_t i = 1; i < len; ++i) m(k + 1 + i, k) = cplx{};
  }
}

struct Rotation {
  double c;
  cplx s;
};

// [c s; -conj(s) c] [a; b] = [r; 0]
Rotation make_rotation(cplx a, cplx b) {
  if (b == cplx{}) return {1.0, cplx{}};
  if (a == cplx{}) return {0.0, std::conj(b) / std::abs(b)};
  const double aa = std::abs(a);
  const double nrm = std::hypot(aa, std::abs(b));
  return {aa / nrm, (a / aa) * std::conj(b) / nrm};
}

cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx p = 0.5 * (a - d);
  const cplx bc = b * c;
  const cplx disc = std::sqrt(p * p + bc);
  const cplx den1 = p + disc, den2 = p - disc;
  const cplx den = std::abs(den1) >= std::abs(den2) ? den1 : den2;
  if (den == cplx{}) return d;
  return d - bc / den;
}

struct QrOutcome {
  std::vector<cplx> values;
  int sweeps = 0;
  int deflations = 0;
};

QrOutcome hessenberg_qr(Dense& h, const SolverOptions& opts) {
  const std::size_t n = h.n;
  QrOutcome out;
  out.values.resize(n);
  double hnorm = 0.0;
  for (const cplx& z : h.a) hnorm = std::max(hnorm, abs1(z));
  const double small = std::numeric_limits<double>::min() * (static_cast<double>(n) / kEps);
  std::vector<Rotation> rots(n);

  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  int iter = 0;
  while (hi >= 0) {
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      const double sub = abs1(h(lo, lo - 1));
      double ref = abs1(h(lo, lo)) + abs1(h(lo - 1, lo - 1));
      if (ref == 0.0) ref = hnorm;
      if (sub <= std::max(opts.deflation_tol * ref, small)) {
        h(lo, lo - 1) = cplx{};
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out.values[hi] = h(hi, hi);
      --hi;
      ++out.deflations;
      iter = 0;
      continue;
    }
    if (iter >= opts.max_sweeps) {
      throw Error(ErrorCode::non_convergence, "QR iteration failed to deflate subdiagonal (" + std::to_string(hi) +
                                                  "," + std::to_string(hi - 1) + ") after " +
                                                  std::to_string(opts.max_sweeps) + " sweeps");
    }
    ++iter;
    ++out.sweeps;

    cplx shift;
    if (iter % 10 == 0) {
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real()) + cplx(0.0, 0.75 * std::abs(h(hi, hi - 1).imag()));
    } else {
      shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    const auto ulo = static_cast<std::size_t>(lo), uhi = static_cast<std::size_t>(hi);
    for (std::size_t k = ulo; k <= uhi; ++k) h(k, k) -= shift;
    for (std::size_t k = ulo; k < uhi; ++k) {
      const Rotation g = make_rotation(h(k, k), h(k + 1, k));
      rots[k] = g;
      const cplx ms = -std::conj(g.s);
      for (std::size_t j = k; j <= uhi; ++j) {
        const cplx x = h(k, j), y = h(k + 1, j);
        h(k, j) = g.c * x + g.s * y;
        h(k + 1, j) = ms * x + g.c * y;
      }
      h(k + 1, k) = cplx{};
    }
    for (std::size_t k = ulo; k < uhi; ++k) {
      const Rotation g = rots[k];
      const cplx cs = std::conj(g.s);
      const std::size_t last = std::min(k + 1, uhi);
      for (std::size_t i = ulo; i <= last; ++i) {
        const cplx x = h(i, k), y = h(i, k + 1);
        h(i, k) = x * g.c + y * cs;
        h(i, k + 1) = -x * g.s + y * g.c;
      }
    }
    for (std::size_t k = ulo; k <= uhi; ++k) h(k, k) += shift;
  }
  return out;
}

QrOutcome all_eigenvalues(const ComplexMatrix& m, const SolverOptions& opts) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const cplx z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::invalid_parameter, "matrix has non-finite entries");
      }
    }
  }
  Dense d{m.size(), m.to_dense()};
  balance(d);
  reduce_to_hessenberg(d);
  return hessenberg_qr(d, opts);
}

// LU factorization of (M - shift I) for repeated solves.
class ShiftedFactor {
 public:
  ShiftedFactor(const ComplexMatrix& m, cplx shift) : n_(m.size()) {
    if (m.structure() == Structure::tridiagonal) {
      tridiagonal_ = true;
      dl_.assign(m.sub_diagonal().begin(), m.sub_diagonal().end());
      du_.assign(m.super_diagonal().begin(), m.super_diagonal().end());
      d_.assign(m.diagonal().begin(), m.diagonal().end());
      for (cplx& z : d_) z -= shift;
      factor_tridiagonal();
    } else {
      lu_ = m.to_dense();
      for (std::size_t i = 0; i < n_; ++i) lu_[i * n_ + i] -= shift;
      factor_dense();
    }
  }

  bool singular() const noexcept { return singular_; }

  void solve(std::vector<cplx>& b) const { tridiagonal_ ? solve_tridiagonal(b) : solve_dense(b); }

 private:
  void factor_tridiagonal() {
    const std::size_t n = n_;
    du2_.assign(n > 2 ? n - 2 : 0, cplx{});
    pivot_.resize(n);
    for (std::size_t i = 0; i < n; ++i) pivot_[i] = i;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (abs1(d_[i]) >= abs1(dl_[i])) {
        if (d_[i] != cplx{}) {
          const cplx fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const cplx fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const cplx temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        pivot_[i] = i + 1;
      }
    }
    for (const cplx& z : d_) {
      if (z == cplx{}) singular_ = true;
    }
  }

  void solve_tridiagonal(std::vector<cplx>& b) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (pivot_[i] == i) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const cplx temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n < 2 ? 0 : n - 2; i-- > 0;) {
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
  }

  void factor_dense() {
    const std::size_t n = n_;
    pivot_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = abs1(lu_[k * n + k]);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = abs1(lu_[i * n + k]);
        if (v > best) {
          best = v;
          p = i;
        }
      }
      pivot_[k] = p;
      if (p != k) {
        std::swap_ranges(lu_.begin() + static_cast<std::ptrdiff_t>(k * n),
                         lu_.begin() + static_cast<std::ptrdiff_t>((k + 1) * n),
                         lu_.begin() + static_cast<std::ptrdiff_t>(p * n));
      }
      const cplx piv = lu_[k * n + k];
      if (piv == cplx{}) {
        singular_ = true;
        continue;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        cplx* row = &lu_[i * n];
        const cplx f = row[k] / piv;
        row[k] = f;
        if (f == cplx{}) continue;
        const cplx* prow = &lu_[k * n];
        for (std::size_t j = k + 1; j < n; ++j) row[j] -= f * prow[j];
      }
    }
  }

  void solve_dense(std::vector<cplx>& b) const {
    const std::size_t n = n_;
    for (std::size_t k = 0; k < n; ++k) {
      if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
      for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu_[i * n + k] * b[k];
    }
    for (std::size_t i = n; i-- > 0;) {
      cplx s = b[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu_[i * n + j] * b[j];
      b[i] = s / lu_[i * n + i];
    }
  }

  std::size_t n_;
  bool tridiagonal_ = false;
  bool singular_ = false;
  std::vector<cplx> dl_, d_, du_, du2_;
  std::vector<cplx> lu_;
  std::vector<std::size_t> pivot_;
};

cplx rayleigh(std::span<const cplx> x, std::span<const cplx> mx) {
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * mx[i];
  return s;
}

double pair_residual(std::span<const cplx> x, std::span<const cplx> mx, cplx value, double matrix_norm) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r += std::norm(mx[i] - value * x[i]);
  const double xn = two_norm(x);
  return std::sqrt(r) / (matrix_norm * xn);
}

bool is_real(const ComplexMatrix& m) {
  const auto real_span = [](std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(), [](cplx z) { return z.imag() == 0.0; });
  };
  if (m.structure() == Structure::general) return real_span(m.to_dense());
  return real_span(m.diagonal()) && real_span(m.sub_diagonal()) && real_span(m.super_diagonal()) &&
         m.upper_right().imag() == 0.0 && m.lower_left().imag() == 0.0;
}

// Factors M - shift I, nudging the shift off an exact eigenvalue if needed.
ShiftedFactor factor_near(const ComplexMatrix& m, cplx& shift) {
  ShiftedFactor factor(m, shift);
  for (int attempt = 1; factor.singular() && attempt <= 8; ++attempt) {
    shift += std::ldexp(kEps, 4 * attempt) * std::max(1.0, std::abs(shift));
    factor = ShiftedFactor(m, shift);
  }
  if (factor.singular()) throw Error(ErrorCode::non_convergence, "shifted matrix stays singular");
  return factor;
}

// Rayleigh-Ritz on the span of recent iterates. Returns the Ritz pair whose
// value lies nearest the target, or false if the span is degenerate.
bool ritz_restart(const ComplexMatrix& m, const std::vector<std::vector<cplx>>& history, cplx target,
                  std::vector<cplx>& x, cplx& value) {
  const std::size_t n = m.size();
  std::vector<std::vector<cplx>> q;
  for (const auto& v : history) {
    std::vector<cplx> w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) {
        cplx dot{};
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(u[i]) * w[i];
        for (std::size_t i = 0; i < n; ++i) w[i] -= dot * u[i];
      }
    }
    const double wn = two_norm(w);
    if (wn < 1e-8 * two_norm(v)) continue;
    for (cplx& z : w) z /= wn;
    q.push_back(std::move(w));
  }
  const std::size_t k = q.size();
  if (k < 2) return false;
  std::vector<std::vector<cplx>> mq;
  for (const auto& u : q) mq.push_back(m.multiply(u));
  std::vector<cplx> g(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      cplx dot{};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(q[i][r]) * mq[j][r];
      g[i * k + j] = dot;
    }
  }
  const ComplexMatrix small = ComplexMatrix::dense(k, g);
  const QrOutcome qr = all_eigenvalues(small, SolverOptions{});
  if (qr.values.empty()) return false;
  cplx mu = qr.values.front();
  for (cplx z : qr.values) {
    if (std::abs(z - target) < std::abs(mu - target)) mu = z;
  }
  cplx small_shift = mu;
  ShiftedFactor factor = factor_near(small, small_shift);
  std::vector<cplx> y(k, cplx{1.0, 0.0});
  for (int pass = 0; pass < 3; ++pass) {
    factor.solve(y);
    const double yn = two_norm(y);
    if (!std::isfinite(yn) || yn == 0.0) return false;
    for (cplx& z : y) z /= yn;
  }
  x.assign(n, cplx{});
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * q[j][i];
  }
  const double xn = two_norm(x);
  for (cplx& z : x) z /= xn;
  value = mu;
  return true;
}

// Fixed-shift inverse iteration. When the convergence rate stalls (two
// eigenvalues nearly equidistant from the shift) it restarts from the Ritz
// vector of recent iterates nearest the shift, and falls back to Rayleigh
// quotient shifts after repeated stalls. Once the residual reaches the
// tolerance, two further solves remove what is left of neighbouring
// eigenvectors.
EigenPair iterate(const ComplexMatrix& m, cplx shift, const SolverOptions& opts, std::span<const cplx> start,
                  std::uint64_t seed) {
  constexpr int kPolishSteps = 2;
  constexpr int kStallLimit = 6;
  constexpr int kMaxRitzRestarts = 4;
  const std::size_t n = m.size();
  const std::size_t window = std::min<std::size_t>(n, 8);
  const bool real_arithmetic =
      is_real(m) && std::abs(shift.imag()) <= std::sqrt(kEps) * std::max(1.0, std::abs(shift));
  if (real_arithmetic) shift = shift.real();
  const cplx target = shift;
  double matrix_norm = m.frobenius_norm();
  if (matrix_norm == 0.0) matrix_norm = 1.0;

  ShiftedFactor factor = factor_near(m, shift);

  std::vector<cplx> x = start.empty() ? seeded_vector(n, seed) : std::vector<cplx>(start.begin(), start.end());
  if (x.size() != n) throw Error(ErrorCode::dimension_mismatch, "start vector length differs from matrix size");
  double xn = two_norm(x);
  if (!(xn > 0.0) || !std::isfinite(xn)) {
    x = seeded_vector(n, seed);
    xn = two_norm(x);
  }
  if (real_arithmetic && start.empty()) {
    for (cplx& z : x) z = z.real();
    xn = two_norm(x);
  }
  for (cplx& z : x) z /= xn;

  EigenPair best;
  best.residual = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  int slow = 0, polish = 0, restarts = 0;
  bool rayleigh_shifts = false;
  std::vector<std::vector<cplx>> history;
  for (int it = 1; it <= kMaxInverseIterations; ++it) {
    factor.solve(x);
    const double yn = two_norm(x);
    if (!std::isfinite(yn) || yn == 0.0) {
      throw Error(ErrorCode::non_convergence, "inverse iteration produced a non-finite vector");
    }
    for (cplx& z : x) z /= yn;
    const std::vector<cplx> mx = m.multiply(x);
    const cplx value = rayleigh(x, mx);
    const double res = pair_residual(x, mx, value, matrix_norm);

    if (polish > 0) {
      if (res <= std::max(opts.inverse_tol, 2.0 * best.residual)) {
        best = EigenPair{value, x, res, false, it};
      }
      if (++polish > kPolishSteps) break;
      continue;
    }
    if (res < best.residual) best = EigenPair{value, x, res, false, it};
    if (best.residual <= opts.inverse_tol) {
      polish = 1;
      continue;
    }

    if (history.size() == window) history.erase(history.begin());
    history.push_back(x);
    slow = res > 0.5 * previous ? slow + 1 : 0;
    previous = res;
    if (slow >= kStallLimit) {
      if (best.residual <= kConvergedResidual) break;
      slow = 0;
      previous = std::numeric_limits<double>::infinity();
      cplx ritz{};
      if (restarts < kMaxRitzRestarts && ritz_restart(m, history, target, x, ritz)) {
        ++restarts;
        history.clear();
        shift = ritz;
        factor = factor_near(m, shift);
        continue;
      }
      rayleigh_shifts = true;
    }
    if (rayleigh_shifts) {
      shift = real_arithmetic ? cplx(value.real()) : value;
      factor = factor_near(m, shift);
    }
  }
  best.converged = best.residual <= kConvergedResidual;
  align_phase(best.vector);
  return best;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

bool spectral_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::vector<cplx> seeded_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto unit = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  std::vector<cplx> v(n);
  for (cplx& z : v) {
    const double re = unit() - 0.5;
    const double im = unit() - 0.5;
    z = cplx(re, im);
  }
  return v;
}

std::vector<cplx> schur_eigenvalues(const ComplexMatrix& m, const SolverOptions& opts) {
  return all_eigenvalues(m, opts).values;
}

Spectrum eigen_decompose(const ComplexMatrix& m, const SolverOptions& opts) {
  QrOutcome qr = all_eigenvalues(m, opts);
  std::sort(qr.values.begin(), qr.values.end(), spectral_less);

  Spectrum spec;
  spec.qr_sweeps = qr.sweeps;
  spec.deflations = qr.deflations;
  spec.matrix_norm = m.frobenius_norm();
  spec.pairs.reserve(qr.values.size());

  constexpr double perturbation = 1e-10;
  for (std::size_t k = 0; k < qr.values.size(); ++k) {
    cplx shift = qr.values[k];
    int repeats = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (qr.values[j] == qr.values[k]) ++repeats;
    }
    if (repeats > 0) {
      const double step = perturbation * repeats;
      shift = shift == cplx{} ? cplx(step, 0.0) : shift * (1.0 + step);
    }
    EigenPair pair;
    try {
      pair = iterate(m, shift, opts, {}, mix_seed(opts.seed, k));
    } catch (const Error&) {
      pair.value = qr.values[k];
      pair.vector = seeded_vector(m.size(), mix_seed(opts.seed, k));
      pair.residual = std::numeric_limits<double>::infinity();
      pair.converged = false;
    }
    spec.pairs.push_back(std::move(pair));
  }
  std::stable_sort(spec.pairs.begin(), spec.pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return spectral_less(a.value, b.value); });
  return spec;
}

EigenPair inverse_iteration(const ComplexMatrix& m, cplx shift, const SolverOptions& opts,
                            std::span<const cplx> start) {
  EigenPair pair = iterate(m, shift, opts, start, opts.seed);
  if (!pair.converged) {
    throw Error(ErrorCode::non_convergence, "inverse iteration did not converge (residual " +
                                                std::to_string(pair.residual) + ")");
  }
  return pair;
}

double residual_norm(const ComplexMatrix& m, const EigenPair& pair) {
  if (pair.vector.size() != m.size()) {
    throw Error(ErrorCode::dimension_mismatch, "eigenvector length differs from matrix size");
  }
  double matrix_norm = m.frobenius_norm();
  if (matrix_norm == 0.0) matrix_norm = 1.0;
  const double xn = two_norm(pair.vector);
  if (xn == 0.0) return 0.0;
  const std::vector<cplx> mx = m.multiply(pair.vector);
  return pair_residual(pair.vector, mx, pair.value, matrix_norm);
}

}  // namespace spectra
