#include "holonomy/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

void require_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    std::ostringstream msg;
    msg << "dimension " << dim << " outside supported range 1.." << kMaxDim;
    throw ContractError(msg.str());
  }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ContractError(msg.str());
  }
}

constexpr double kOffDiagonalTolerance = 1e-14;
constexpr int kMaxSweeps = 50;
constexpr double kDegenerateGap = 1e-9;

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t dim) : dim_(dim) { require_dim(dim); }

StateVector::StateVector(std::initializer_list<Complex> amplitudes) : dim_(amplitudes.size()) {
  require_dim(dim_);
  std::copy(amplitudes.begin(), amplitudes.end(), data_.begin());
}

StateVector::StateVector(std::span<const Complex> amplitudes) : dim_(amplitudes.size()) {
  require_dim(dim_);
  std::copy(amplitudes.begin(), amplitudes.end(), data_.begin());
}

StateVector StateVector::basis(std::size_t dim, std::size_t k) {
  StateVector v(dim);
  if (k >= dim) throw ContractError("basis index out of range");
  v[k] = 1.0;
  return v;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += std::norm(data_[i]);
  return s;
}

StateVector StateVector::normalized() const {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw ContractError("cannot normalize the zero vector");
  StateVector out = *this;
  out *= 1.0 / n;
  return out;
}

StateVector& StateVector::operator*=(Complex s) {
  for (std::size_t i = 0; i < dim_; ++i) data_[i] *= s;
  return *this;
}

StateVector& StateVector::operator+=(const StateVector& other) {
  require_same_dim(dim_, other.dim_, "vector sum");
  for (std::size_t i = 0; i < dim_; ++i) data_[i] += other.data_[i];
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  require_same_dim(dim_, other.dim_, "vector difference");
  for (std::size_t i = 0; i < dim_; ++i) data_[i] -= other.data_[i];
  return *this;
}

StateVector operator*(Complex s, StateVector v) { return v *= s; }
StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner product");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// SquareOperator

SquareOperator::SquareOperator(std::size_t dim) : dim_(dim) { require_dim(dim); }

SquareOperator SquareOperator::identity(std::size_t dim) {
  SquareOperator m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SquareOperator SquareOperator::diagonal(std::span<const double> entries) {
  SquareOperator m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

SquareOperator SquareOperator::from_columns(std::span<const StateVector> columns) {
  SquareOperator m(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    require_same_dim(columns[c].dim(), columns.size(), "from_columns");
    for (std::size_t r = 0; r < columns.size(); ++r) m(r, c) = columns[c][r];
  }
  return m;
}

StateVector SquareOperator::column(std::size_t c) const {
  StateVector v(dim_);
  for (std::size_t r = 0; r < dim_; ++r) v[r] = (*this)(r, c);
  return v;
}

SquareOperator SquareOperator::adjoint() const {
  SquareOperator m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

double SquareOperator::max_abs() const {
  double m = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m = std::max(m, std::abs((*this)(r, c)));
  return m;
}

double SquareOperator::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) s += std::norm((*this)(r, c));
  return std::sqrt(s);
}

double SquareOperator::max_hermitian_defect(std::size_t* row, std::size_t* col) const {
  double worst = 0.0;
  std::size_t wr = 0, wc = 0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      const double d = std::abs((*this)(r, c) - std::conj((*this)(c, r)));
      if (d > worst) {
        worst = d;
        wr = r;
        wc = c;
      }
    }
  }
  if (row) *row = wr;
  if (col) *col = wc;
  return worst;
}

SquareOperator& SquareOperator::operator*=(Complex s) {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) *= s;
  return *this;
}

SquareOperator& SquareOperator::operator+=(const SquareOperator& other) {
  require_same_dim(dim_, other.dim_, "operator sum");
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) += other(r, c);
  return *this;
}

SquareOperator& SquareOperator::operator-=(const SquareOperator& other) {
  require_same_dim(dim_, other.dim_, "operator difference");
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) -= other(r, c);
  return *this;
}

SquareOperator operator*(const SquareOperator& a, const SquareOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator product");
  const std::size_t n = a.dim();
  SquareOperator m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      for (std::size_t c = 0; c < n; ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

StateVector operator*(const SquareOperator& a, const StateVector& v) {
  require_same_dim(a.dim(), v.dim(), "operator-vector product");
  StateVector out(v.dim());
  for (std::size_t r = 0; r < v.dim(); ++r) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < v.dim(); ++c) s += a(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

SquareOperator operator*(Complex s, SquareOperator a) { return a *= s; }
SquareOperator operator+(SquareOperator a, const SquareOperator& b) { return a += b; }
SquareOperator operator-(SquareOperator a, const SquareOperator& b) { return a -= b; }

double max_abs_diff(const SquareOperator& a, const SquareOperator& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

void require_hermitian(const SquareOperator& h) {
  std::size_t r = 0, c = 0;
  const double defect = h.max_hermitian_defect(&r, &c);
  if (defect > 0.0 && !(defect < 1e-12 * h.max_abs())) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "operator is not Hermitian: |H(" << r << "," << c << ") - conj(H(" << c << "," << r
        << "))| = " << defect << " (H(" << r << "," << c << ") = " << h(r, c) << ", H(" << c
        << "," << r << ") = " << h(c, r) << ")";
    throw ContractError(msg.str());
  }
}

// ---------------------------------------------------------------------------
// Eigendecomposition

namespace {

double off_diagonal_norm(const SquareOperator& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q). The rotation is a phase on
// column q that makes a(p,q) real, followed by a real Givens rotation.
void rotate(SquareOperator& a, SquareOperator& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double b = std::abs(apq);
  if (b == 0.0) return;
  const Complex phase = apq / b;  // e^{i theta}
  const Complex phase_conj = std::conj(phase);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double tau = (app - aqq) / (2.0 * b);
  const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::hypot(1.0, tau));
  const double c = 1.0 / std::hypot(1.0, t);
  const double s = t * c;

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s * phase_conj * akq;
    a(k, q) = s * akp + c * phase_conj * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s * phase * aqk;
    a(q, k) = s * apk + c * phase * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - s * phase_conj * vkq;
    v(k, q) = s * vkp + c * phase_conj * vkq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

void orthonormalize_cluster(std::vector<StateVector>& vectors, std::size_t begin, std::size_t end) {
  for (std::size_t k = begin; k < end; ++k) {
    for (std::size_t j = begin; j < k; ++j) vectors[k] -= inner(vectors[j], vectors[k]) * vectors[j];
    vectors[k] = vectors[k].normalized();
  }
}

void fix_phase(StateVector& v) {
  double largest = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) largest = std::max(largest, std::abs(v[i]));
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (std::abs(v[i]) >= largest * (1.0 - 1e-10)) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::abs(v[i]);
      return;
    }
  }
}

}  // namespace

EigenSystem hermitian_eig(const SquareOperator& h) {
  require_hermitian(h);
  const std::size_t n = h.dim();
  SquareOperator a = h;
  SquareOperator v = SquareOperator::identity(n);

  const double scale = h.frobenius_norm();
  if (scale > 0.0) {
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
      if (off_diagonal_norm(a) < kOffDiagonalTolerance * scale) break;
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    if (sweep == kMaxSweeps && off_diagonal_norm(a) >= kOffDiagonalTolerance * scale)
      throw NumericalError("hermitian_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem out;
  out.eigenvalues.resize(n);
  std::vector<StateVector> vectors;
  vectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    vectors.push_back(v.column(order[k]));
  }

  const double gap = kDegenerateGap * std::max(h.max_abs(), 1e-300);
  std::size_t begin = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == n || out.eigenvalues[k] - out.eigenvalues[k - 1] >= gap) {
      if (k - begin > 1) orthonormalize_cluster(vectors, begin, k);
      begin = k;
    }
  }
  for (auto& vec : vectors) fix_phase(vec);
  out.eigenvectors = SquareOperator::from_columns(vectors);
  return out;
}

SquareOperator expm_i_hermitian(const EigenSystem& eig, double s) {
  const std::size_t n = eig.dim();
  const SquareOperator& v = eig.eigenvectors;
  std::array<Complex, kMaxDim> phases{};
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, -s * eig.eigenvalues[k]);
  SquareOperator u(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += v(r, k) * phases[k] * std::conj(v(c, k));
      u(r, c) = acc;
    }
  return u;
}

SquareOperator expm_i_hermitian(const SquareOperator& h, double s) {
  if (!std::isfinite(s)) throw ContractError("expm_i_hermitian: duration must be finite");
  return expm_i_hermitian(hermitian_eig(h), s);
}

double fidelity(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "fidelity");
  return std::min(1.0, std::norm(inner(a, b)));
}

std::vector<double> populations(const StateVector& psi, std::span<const StateVector> basis) {
  for (std::size_t j = 0; j < basis.size(); ++j) {
    require_same_dim(basis[j].dim(), psi.dim(), "populations");
    for (std::size_t k = j; k < basis.size(); ++k) {
      const Complex g = inner(basis[j], basis[k]);
      const double expected = (j == k) ? 1.0 : 0.0;
      if (std::abs(g - expected) > 1e-9) {
        std::ostringstream msg;
        msg << "populations: basis is not orthonormal (<b" << j << "|b" << k << "> = " << g << ")";
        throw ContractError(msg.str());
      }
    }
  }
  std::vector<double> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(std::norm(inner(b, psi)));
  return out;
}

std::vector<double> populations(const StateVector& psi, const EigenSystem& basis) {
  std::vector<StateVector> columns;
  for (std::size_t k = 0; k < basis.dim(); ++k) columns.push_back(basis.vector(k));
  return populations(psi, columns);
}

}  // namespace holonomy
