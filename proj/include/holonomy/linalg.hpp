#pragma once

// Dense complex linear algebra for the handful of small (dim <= 8) Hermitian
// problems this project needs. Storage is inline so states and operators are
// plain values that can be copied into worker threads freely.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace holonomy {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 8;

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t dim);
  StateVector(std::initializer_list<Complex> amplitudes);
  explicit StateVector(std::span<const Complex> amplitudes);

  static StateVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return dim_; }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const Complex> amplitudes() const { return {data_.data(), dim_}; }

  double norm_squared() const;
  StateVector normalized() const;

  StateVector& operator*=(Complex s);
  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);

 private:
  std::array<Complex, kMaxDim> data_{};
  std::size_t dim_ = 0;
};

StateVector operator*(Complex s, StateVector v);
StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);

// <a|b>, antilinear in the first argument.
Complex inner(const StateVector& a, const StateVector& b);

// Row-major dim x dim complex matrix.
class SquareOperator {
 public:
  SquareOperator() = default;
  explicit SquareOperator(std::size_t dim);

  static SquareOperator identity(std::size_t dim);
  static SquareOperator diagonal(std::span<const double> entries);
  // Matrix whose k-th column is columns[k].
  static SquareOperator from_columns(std::span<const StateVector> columns);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * kMaxDim + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * kMaxDim + c]; }

  StateVector column(std::size_t c) const;
  SquareOperator adjoint() const;

  double max_abs() const;
  double frobenius_norm() const;
  // Largest |H_ij - conj(H_ji)| and where it occurs.
  double max_hermitian_defect(std::size_t* row = nullptr, std::size_t* col = nullptr) const;

  SquareOperator& operator*=(Complex s);
  SquareOperator& operator+=(const SquareOperator& other);
  SquareOperator& operator-=(const SquareOperator& other);

 private:
  std::array<Complex, kMaxDim * kMaxDim> data_{};
  std::size_t dim_ = 0;
};

SquareOperator operator*(const SquareOperator& a, const SquareOperator& b);
StateVector operator*(const SquareOperator& a, const StateVector& v);
SquareOperator operator*(Complex s, SquareOperator a);
SquareOperator operator+(SquareOperator a, const SquareOperator& b);
SquareOperator operator-(SquareOperator a, const SquareOperator& b);

// max_ij |A_ij - B_ij|
double max_abs_diff(const SquareOperator& a, const SquareOperator& b);

// Throws ContractError naming the worst entry unless
// max|H - H^dagger| < 1e-12 * max|H|.
void require_hermitian(const SquareOperator& h);

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  SquareOperator eigenvectors;      // orthonormal columns, same order

  std::size_t dim() const { return eigenvalues.size(); }
  StateVector vector(std::size_t k) const { return eigenvectors.column(k); }
};

// Cyclic complex Jacobi. Sweeps until the off-diagonal Frobenius norm drops
// below 1e-14 ||H||_F (at most 50 sweeps). Eigenvectors inside a numerically
// degenerate cluster are re-orthonormalized; each eigenvector is phased so
// its largest component is real and positive.
EigenSystem hermitian_eig(const SquareOperator& h);

// exp(-i s H) = V diag(exp(-i s lambda)) V^dagger.
SquareOperator expm_i_hermitian(const SquareOperator& h, double s);
SquareOperator expm_i_hermitian(const EigenSystem& eig, double s);

// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

// |<b_k|psi>|^2 for each column b_k; the basis must be orthonormal to 1e-9.
std::vector<double> populations(const StateVector& psi, std::span<const StateVector> basis);
std::vector<double> populations(const StateVector& psi, const EigenSystem& basis);

}  // namespace holonomy
