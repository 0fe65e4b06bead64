#pragma once

#include <complex>
#include <vector>

// Dense complex linear algebra with tensor-product structure.
// Matrices are square, row-major, tagged with an ordered list of subsystem
// dimensions whose product equals the matrix side. All operations are pure.

namespace ddmem {

using cxd = std::complex<double>;

class TensorOperator {
 public:
  TensorOperator() = default;
  explicit TensorOperator(std::vector<int> dims);  // zero matrix
  TensorOperator(std::vector<int> dims, std::vector<cxd> data);

  static TensorOperator identity(std::vector<int> dims);

  int side() const { return n_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<cxd>& data() const { return a_; }
  std::vector<cxd>& data() { return a_; }

  cxd& operator()(int r, int c) { return a_[static_cast<size_t>(r) * n_ + c]; }
  const cxd& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * n_ + c]; }

  TensorOperator operator+(const TensorOperator& o) const;
  TensorOperator operator-(const TensorOperator& o) const;
  TensorOperator operator*(const TensorOperator& o) const;  // matrix product
  TensorOperator operator*(cxd s) const;
  TensorOperator& operator+=(const TensorOperator& o);
  TensorOperator& operator-=(const TensorOperator& o);

  TensorOperator adjoint() const;
  TensorOperator transpose() const;
  cxd trace() const;
  double max_norm() const;        // max |entry|
  double frobenius_norm() const;
  double hermiticity_residual() const;  // ||A - A'||_max
  TensorOperator hermitized() const;    // (A + A')/2

  bool is_density(double herm_tol, double trace_tol) const;

 private:
  std::vector<int> dims_;
  int n_ = 0;
  std::vector<cxd> a_;
};

inline TensorOperator operator*(cxd s, const TensorOperator& t) { return t * s; }

// Kronecker product; dims(out) = concat(dims(a), dims(b)), left factor outermost.
TensorOperator kron(const TensorOperator& a, const TensorOperator& b);

// Partial trace keeping the listed factor indices (0-based, strictly ascending).
TensorOperator partial_trace(const TensorOperator& op, const std::vector<int>& keep);

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  TensorOperator eigenvectors;      // columns, unitary
};

// Cyclic-Jacobi eigensolver for Hermitian matrices.
Spectrum hermitian_eig(const TensorOperator& h);

// D = (1/2) Tr|r1 - r2|, for equal-dims density matrices.
double trace_distance(const TensorOperator& r1, const TensorOperator& r2);

// exp(-i h t) via spectral decomposition; h must be Hermitian.
TensorOperator unitary_exp(const TensorOperator& h, double t);

// U rho U^dagger
TensorOperator conjugate_by(const TensorOperator& u, const TensorOperator& rho);

}  // namespace ddmem
