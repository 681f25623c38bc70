#include "frobkit/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frobkit/error.hpp"

namespace frobkit {

template <class Tag>
Graded<Tag>::Graded(int n, int k) : n_(n), k_(k) {
  coeffs_.assign(index_table(n, k).size(), 0.0);
}

template <class Tag>
Graded<Tag>::Graded(int n, int k, std::vector<double> coeffs)
    : n_(n), k_(k), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != index_table(n, k).size()) {
    throw DimensionMismatch("expected " +
                            std::to_string(binomial(n, k)) +
                            " coefficients, got " +
                            std::to_string(coeffs_.size()));
  }
}

template <class Tag>
Graded<Tag> Graded<Tag>::scalar(int n, double value) {
  return Graded(n, 0, {value});
}

template <class Tag>
Graded<Tag> Graded<Tag>::basis(int n, std::vector<int> indices,
                               double coeff) {
  const int k = static_cast<int>(indices.size());
  Graded out(n, k);
  const int sign = perm_sign(indices);
  if (sign == 0) return out;
  std::sort(indices.begin(), indices.end());
  out.coeffs_[MultiIndex(n, std::move(indices)).position()] = sign * coeff;
  return out;
}

template <class Tag>
Graded<Tag> Graded<Tag>::volume(int n) {
  Graded out(n, n);
  out.coeffs_[0] = 1.0;
  return out;
}

template <class Tag>
double Graded<Tag>::coeff(const MultiIndex& index) const {
  if (index.n() != n_ || index.k() != k_) {
    throw GradeError("multi-index shape does not match the element");
  }
  return coeffs_[index.position()];
}

template <class Tag>
double Graded<Tag>::norm() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return std::sqrt(s);
}

template <class Tag>
double Graded<Tag>::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

template <class Tag>
void Graded<Tag>::check_same_shape(const Graded& other) const {
  if (other.n_ != n_) throw DimensionMismatch("ambient dimensions differ");
  if (other.k_ != k_) throw GradeError("grades differ");
}

template <class Tag>
Graded<Tag>& Graded<Tag>::operator+=(const Graded& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other[i];
  return *this;
}

template <class Tag>
Graded<Tag>& Graded<Tag>::operator-=(const Graded& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other[i];
  return *this;
}

template <class Tag>
Graded<Tag>& Graded<Tag>::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

template <class Tag>
std::string Graded<Tag>::to_string() const {
  std::ostringstream out;
  out.precision(17);
  const char* symbol = std::is_same_v<Tag, VectorTag> ? "e" : "dx";
  const auto& table = index_table(n_, k_);
  bool first = true;
  for (std::size_t p = 0; p < coeffs_.size(); ++p) {
    if (coeffs_[p] == 0.0) continue;
    if (!first) out << " + ";
    first = false;
    out << coeffs_[p];
    if (k_ > 0) {
      out << " " << symbol;
      for (int j : MultiIndex::from_mask(n_, table[p]).entries()) out << j;
    }
  }
  if (first) out << "0";
  return out.str();
}

template class Graded<VectorTag>;
template class Graded<CovectorTag>;

namespace {

template <class Tag>
Graded<Tag> wedge_impl(const Graded<Tag>& a, const Graded<Tag>& b) {
  if (a.n() != b.n()) throw DimensionMismatch("wedge: ambient dimensions");
  const int n = a.n();
  if (a.k() + b.k() > n) {
    throw GradeError("wedge: grade " + std::to_string(a.k() + b.k()) +
                     " exceeds the ambient dimension");
  }
  Graded<Tag> out(n, a.k() + b.k());
  const auto& ta = index_table(n, a.k());
  const auto& tb = index_table(n, b.k());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < tb.size(); ++j) {
      if (b[j] == 0.0) continue;
      const int s = wedge_sign(ta[i], tb[j]);
      if (s == 0) continue;
      out[index_position(n, ta[i] | tb[j])] += s * a[i] * b[j];
    }
  }
  return out;
}

}  // namespace

MultiVector wedge(const MultiVector& a, const MultiVector& b) {
  return wedge_impl(a, b);
}

MultiCovector wedge(const MultiCovector& a, const MultiCovector& b) {
  return wedge_impl(a, b);
}

double pair(const MultiVector& v, const MultiCovector& alpha) {
  if (v.n() != alpha.n()) throw DimensionMismatch("pair: ambient dimensions");
  if (v.k() != alpha.k()) throw GradeError("pair: grades differ");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * alpha[i];
  return s;
}

MultiVector trace(const MultiVector& v, const MultiCovector& alpha) {
  if (v.n() != alpha.n()) throw DimensionMismatch("trace: ambient dimensions");
  if (alpha.k() > v.k()) {
    throw GradeError("trace: covector grade exceeds vector grade");
  }
  const int n = v.n();
  MultiVector out(n, v.k() - alpha.k());
  const auto& ta = index_table(n, alpha.k());
  const auto& tout = index_table(n, out.k());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < tout.size(); ++j) {
      const int s = wedge_sign(ta[i], tout[j]);
      if (s == 0) continue;
      out[j] += s * alpha[i] * v[index_position(n, ta[i] | tout[j])];
    }
  }
  return out;
}

MultiCovector antitrace(const MultiVector& v, const MultiCovector& alpha) {
  if (v.n() != alpha.n()) {
    throw DimensionMismatch("antitrace: ambient dimensions");
  }
  if (v.k() > alpha.k()) {
    throw GradeError("antitrace: vector grade exceeds covector grade");
  }
  const int n = v.n();
  MultiCovector out(n, alpha.k() - v.k());
  const auto& tv = index_table(n, v.k());
  const auto& tout = index_table(n, out.k());
  for (std::size_t i = 0; i < tv.size(); ++i) {
    if (v[i] == 0.0) continue;
    for (std::size_t j = 0; j < tout.size(); ++j) {
      const int s = wedge_sign(tout[j], tv[i]);
      if (s == 0) continue;
      out[j] += s * v[i] * alpha[index_position(n, tout[j] | tv[i])];
    }
  }
  return out;
}

namespace {

// sign(first, second): sign of the permutation reordering the concatenated
// index sequence.
int concatenation_sign(const MultiIndex& first, const MultiIndex& second) {
  std::vector<int> seq = first.entries();
  seq.insert(seq.end(), second.entries().begin(), second.entries().end());
  return perm_sign(seq);
}

}  // namespace

MultiCovector star_vec(const MultiVector& v) {
  const int n = v.n();
  MultiCovector out(n, n - v.k());
  const auto& table = index_table(n, v.k());
  for (std::size_t p = 0; p < table.size(); ++p) {
    const auto i = MultiIndex::from_mask(n, table[p]);
    const auto j = i.complement();
    int sign = concatenation_sign(j, i);
#ifdef FROBKIT_INJECT_STAR_FAULT
    if (p == 0) sign = -sign;
#endif
    out[j.position()] = sign * v[p];
  }
  return out;
}

MultiVector star_covec(const MultiCovector& alpha) {
  const int n = alpha.n();
  MultiVector out(n, n - alpha.k());
  const auto& table = index_table(n, alpha.k());
  for (std::size_t p = 0; p < table.size(); ++p) {
    const auto i = MultiIndex::from_mask(n, table[p]);
    const auto j = i.complement();
    out[j.position()] = concatenation_sign(i, j) * alpha[p];
  }
  return out;
}

Subspace span_of(const MultiVector& v, double tol) {
  const int n = v.n();
  if (v.k() == 0) return Subspace(n);
  const auto& table = index_table(n, v.k() - 1);
  Eigen::MatrixXd gens(n, static_cast<Eigen::Index>(table.size()));
  for (std::size_t p = 0; p < table.size(); ++p) {
    MultiCovector beta(n, v.k() - 1);
    beta[p] = 1.0;
    const MultiVector column = trace(v, beta);
    for (int r = 0; r < n; ++r) gens(r, static_cast<Eigen::Index>(p)) = column[r];
  }
  return Subspace::from_columns(gens, tol);
}

bool is_simple(const MultiVector& v, double tol) {
  if (v.max_abs() == 0.0) throw Error("is_simple: zero multivector");
  return span_of(v, tol).dim() == v.k();
}

}  // namespace frobkit
