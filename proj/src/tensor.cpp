#include "ddmem/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ddmem/tolerances.hpp"

namespace ddmem {

namespace {

int product(const std::vector<int>& dims) {
  int n = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("TensorOperator: nonpositive factor dimension");
    n *= d;
  }
  return n;
}

}  // namespace

TensorOperator::TensorOperator(std::vector<int> dims)
    : dims_(std::move(dims)), n_(product(dims_)), a_(static_cast<size_t>(n_) * n_) {}

TensorOperator::TensorOperator(std::vector<int> dims, std::vector<cxd> data)
    : dims_(std::move(dims)), n_(product(dims_)), a_(std::move(data)) {
  if (a_.size() != static_cast<size_t>(n_) * n_)
    throw std::invalid_argument("TensorOperator: data size does not match dims");
}

TensorOperator TensorOperator::identity(std::vector<int> dims) {
  TensorOperator t(std::move(dims));
  for (int i = 0; i < t.n_; ++i) t(i, i) = 1.0;
  return t;
}

TensorOperator TensorOperator::operator+(const TensorOperator& o) const {
  TensorOperator r = *this;
  r += o;
  return r;
}

TensorOperator TensorOperator::operator-(const TensorOperator& o) const {
  TensorOperator r = *this;
  r -= o;
  return r;
}

TensorOperator& TensorOperator::operator+=(const TensorOperator& o) {
  if (o.n_ != n_) throw std::invalid_argument("TensorOperator: size mismatch in +=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

TensorOperator& TensorOperator::operator-=(const TensorOperator& o) {
  if (o.n_ != n_) throw std::invalid_argument("TensorOperator: size mismatch in -=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

TensorOperator TensorOperator::operator*(const TensorOperator& o) const {
  if (o.n_ != n_) throw std::invalid_argument("TensorOperator: size mismatch in *");
  TensorOperator r(dims_);
  const int n = n_;
  for (int i = 0; i < n; ++i) {
    const cxd* ai = &a_[static_cast<size_t>(i) * n];
    cxd* ri = &r.a_[static_cast<size_t>(i) * n];
    for (int k = 0; k < n; ++k) {
      const cxd v = ai[k];
      if (v == cxd(0.0, 0.0)) continue;
      const cxd* bk = &o.a_[static_cast<size_t>(k) * n];
      for (int j = 0; j < n; ++j) ri[j] += v * bk[j];
    }
  }
  return r;
}

TensorOperator TensorOperator::operator*(cxd s) const {
  TensorOperator r = *this;
  for (auto& v : r.a_) v *= s;
  return r;
}

TensorOperator TensorOperator::adjoint() const {
  TensorOperator r(dims_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

TensorOperator TensorOperator::transpose() const {
  TensorOperator r(dims_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

cxd TensorOperator::trace() const {
  cxd t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double TensorOperator::max_norm() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double TensorOperator::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double TensorOperator::hermiticity_residual() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

TensorOperator TensorOperator::hermitized() const {
  TensorOperator r(dims_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  return r;
}

bool TensorOperator::is_density(double herm_tol, double trace_tol) const {
  return hermiticity_residual() <= herm_tol && std::abs(trace() - 1.0) <= trace_tol;
}

TensorOperator kron(const TensorOperator& a, const TensorOperator& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  const int na = a.side(), nb = b.side();
  TensorOperator r(std::move(dims));
  for (int ia = 0; ia < na; ++ia)
    for (int ja = 0; ja < na; ++ja) {
      const cxd va = a(ia, ja);
      if (va == cxd(0.0, 0.0)) continue;
      for (int ib = 0; ib < nb; ++ib)
        for (int jb = 0; jb < nb; ++jb)
          r(ia * nb + ib, ja * nb + jb) = va * b(ib, jb);
    }
  return r;
}

TensorOperator partial_trace(const TensorOperator& op, const std::vector<int>& keep) {
  const auto& dims = op.dims();
  const int nf = static_cast<int>(dims.size());
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= nf)
      throw std::invalid_argument("partial_trace: keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep indices must be strictly ascending");
  }

  // strides of each factor in the flattened index
  std::vector<long> stride(nf, 1);
  for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  std::vector<int> traced;
  std::vector<int> kept_dims;
  for (int f = 0; f < nf; ++f) {
    if (std::find(keep.begin(), keep.end(), f) == keep.end())
      traced.push_back(f);
    else
      kept_dims.push_back(dims[f]);
  }

  int nk = 1;
  for (int d : kept_dims) nk *= d;
  int nt = 1;
  for (int f : traced) nt *= dims[f];

  // base offsets for every kept multi-index and every traced multi-index
  std::vector<long> koff(nk, 0);
  {
    int block = nk;
    for (size_t m = 0; m < keep.size(); ++m) {
      const int d = dims[keep[m]];
      block /= d;
      for (int idx = 0; idx < nk; ++idx) {
        const int digit = (idx / block) % d;
        koff[idx] += digit * stride[keep[m]];
      }
    }
  }
  std::vector<long> toff(nt, 0);
  {
    int block = nt;
    for (size_t m = 0; m < traced.size(); ++m) {
      const int d = dims[traced[m]];
      block /= d;
      for (int idx = 0; idx < nt; ++idx) {
        const int digit = (idx / block) % d;
        toff[idx] += digit * stride[traced[m]];
      }
    }
  }

  TensorOperator out(kept_dims);
  const int n = op.side();
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      cxd s = 0.0;
      for (int t = 0; t < nt; ++t)
        s += op.data()[(koff[i] + toff[t]) * n + (koff[j] + toff[t])];
      out(i, j) = s;
    }
  return out;
}

Spectrum hermitian_eig(const TensorOperator& h) {
  if (h.hermiticity_residual() > tol::eig_input_herm)
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");

  const int n = h.side();
  TensorOperator a = h.hermitized();  // work on the exactly-Hermitian part
  TensorOperator v = TensorOperator::identity(h.dims());

  const double scale = a.frobenius_norm();
  const double stop = tol::jacobi_offdiag * (scale > 0 ? scale : 1.0);

  auto offdiag_frobenius = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  const int max_sweeps = 100;
  int sweep = 0;
  while (offdiag_frobenius() > stop && sweep++ < max_sweeps) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cxd apq = a(p, q);
        const double x = std::abs(apq);
        if (x <= stop / (static_cast<double>(n) * n)) continue;

        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const cxd phase = apq / x;  // e^{i phi}
        // real rotation zeroing the off-diagonal of [[alpha, x],[x, beta]]
        const double theta = (alpha - beta) / (2.0 * x);
        const double t = (theta >= 0.0)
                             ? -1.0 / (theta + std::sqrt(theta * theta + 1.0))
                             : 1.0 / (-theta + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // R = P G with P = diag(e^{i phi/2}, e^{-i phi/2}), G = [[c, s],[-s, c]]
        const cxd half = std::sqrt(phase);
        const cxd rpp = c * half, rpq = s * half;
        const cxd rqp = -s * std::conj(half), rqq = c * std::conj(half);

        for (int i = 0; i < n; ++i) {  // A <- A R
          const cxd ap = a(i, p), aq = a(i, q);
          a(i, p) = ap * rpp + aq * rqp;
          a(i, q) = ap * rpq + aq * rqq;
        }
        for (int j = 0; j < n; ++j) {  // A <- R' A
          const cxd ap = a(p, j), aq = a(q, j);
          a(p, j) = std::conj(rpp) * ap + std::conj(rqp) * aq;
          a(q, j) = std::conj(rpq) * ap + std::conj(rqq) * aq;
        }
        for (int i = 0; i < n; ++i) {  // V <- V R
          const cxd vp = v(i, p), vq = v(i, q);
          v(i, p) = vp * rpp + vq * rqp;
          v(i, q) = vp * rpq + vq * rqq;
        }
      }
    }
  }
  if (sweep > max_sweeps)
    throw std::runtime_error("hermitian_eig: Jacobi sweeps did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  Spectrum sp;
  sp.eigenvalues.resize(n);
  sp.eigenvectors = TensorOperator(h.dims());
  for (int m = 0; m < n; ++m) {
    sp.eigenvalues[m] = a(order[m], order[m]).real();
    for (int i = 0; i < n; ++i) sp.eigenvectors(i, m) = v(i, order[m]);
  }
  return sp;
}

double trace_distance(const TensorOperator& r1, const TensorOperator& r2) {
  if (r1.dims() != r2.dims())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  const Spectrum sp = hermitian_eig(r1 - r2);
  double d = 0.0;
  for (double lam : sp.eigenvalues) d += std::abs(lam);
  return 0.5 * d;
}

TensorOperator unitary_exp(const TensorOperator& h, double t) {
  if (h.hermiticity_residual() > tol::eig_input_herm)
    throw std::invalid_argument("unitary_exp: input is not Hermitian");
  const Spectrum sp = hermitian_eig(h);
  const int n = h.side();
  TensorOperator u(h.dims());
  // U = V diag(e^{-i lambda t}) V'
  for (int m = 0; m < n; ++m) {
    const cxd ph = std::exp(cxd(0.0, -sp.eigenvalues[m] * t));
    for (int i = 0; i < n; ++i) {
      const cxd vim = sp.eigenvectors(i, m) * ph;
      for (int j = 0; j < n; ++j)
        u(i, j) += vim * std::conj(sp.eigenvectors(j, m));
    }
  }
  return u;
}

TensorOperator conjugate_by(const TensorOperator& u, const TensorOperator& rho) {
  return u * rho * u.adjoint();
}

}  // namespace ddmem
