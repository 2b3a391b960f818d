#include "wml/tensor.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>

namespace wml {

namespace {

// Strides for the mixed-radix flat index; stride[i] = prod of dims right of i.
std::vector<std::size_t> strides_of(const std::vector<int>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * static_cast<std::size_t>(dims[i + 1]);
  return s;
}

void check_dims(const std::vector<int>& dims) {
  if (dims.empty()) throw shape_error("dims: empty subsystem list");
  for (int d : dims)
    if (d < 1) throw shape_error("dims: every subsystem dimension must be >= 1");
}

}  // namespace

std::size_t dims_total(const std::vector<int>& dims) {
  check_dims(dims);
  std::size_t total = 1;
  for (int d : dims) {
    total *= static_cast<std::size_t>(d);
    if (total > kEntryLimit)
      throw size_error("dims_total: product exceeds the entry limit");
  }
  return total;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t rows = static_cast<std::size_t>(a.rows()) * b.rows();
  const std::size_t cols = static_cast<std::size_t>(a.cols()) * b.cols();
  check_entry_limit(rows, cols, "kron");
  Matrix out(rows, cols);
  for (Eigen::Index ia = 0; ia < a.rows(); ++ia)
    for (Eigen::Index ja = 0; ja < a.cols(); ++ja)
      out.block(ia * b.rows(), ja * b.cols(), b.rows(), b.cols()) =
          a(ia, ja) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  const std::size_t n = static_cast<std::size_t>(a.size()) * b.size();
  check_entry_limit(n, 1, "kron");
  Vector out(n);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix kron_power(const Matrix& a, int count) {
  if (count < 0) throw argument_error("kron_power: count must be >= 0");
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < count; ++i) out = kron(out, a);
  return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
  const std::size_t total = dims_total(dims);
  if (m.rows() != m.cols() ||
      static_cast<std::size_t>(m.rows()) != total)
    throw shape_error("partial_trace: matrix does not match dims");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) !=
      keep_sorted.end())
    throw shape_error("partial_trace: duplicate keep index");
  for (int k : keep_sorted)
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw shape_error("partial_trace: keep index out of range");

  std::vector<int> traced;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), i))
      traced.push_back(i);

  const auto stride = strides_of(dims);
  std::size_t keep_total = 1, trace_total = 1;
  for (int k : keep_sorted) keep_total *= static_cast<std::size_t>(dims[k]);
  for (int t : traced) trace_total *= static_cast<std::size_t>(dims[t]);

  // Flat index of a kept multi-index within the original space.
  auto embed = [&](std::size_t packed, const std::vector<int>& subsystems) {
    std::size_t flat = 0;
    for (int i = static_cast<int>(subsystems.size()) - 1; i >= 0; --i) {
      const int s = subsystems[i];
      flat += (packed % static_cast<std::size_t>(dims[s])) * stride[s];
      packed /= static_cast<std::size_t>(dims[s]);
    }
    return flat;
  };

  Matrix out = Matrix::Zero(keep_total, keep_total);
  for (std::size_t r = 0; r < keep_total; ++r) {
    const std::size_t rbase = embed(r, keep_sorted);
    for (std::size_t c = 0; c < keep_total; ++c) {
      const std::size_t cbase = embed(c, keep_sorted);
      Complex acc = 0.0;
      for (std::size_t t = 0; t < trace_total; ++t) {
        const std::size_t off = embed(t, traced);
        acc += m(rbase + off, cbase + off);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

namespace {

// index_map[old_flat] = new_flat under "subsystem i moves to slot perm[i]".
std::vector<std::size_t> permutation_index_map(const std::vector<int>& dims,
                                               const std::vector<int>& perm) {
  if (perm.size() != dims.size())
    throw argument_error("permute_subsystems: perm size mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(perm.size()) || seen[p])
      throw argument_error("permute_subsystems: perm is not a bijection");
    seen[p] = true;
  }
  std::vector<int> new_dims(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) new_dims[perm[i]] = dims[i];
  const auto old_stride = strides_of(dims);
  const auto new_stride = strides_of(new_dims);
  const std::size_t total = dims_total(dims);

  std::vector<std::size_t> map(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat, target = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const std::size_t digit = rest / old_stride[i];
      rest %= old_stride[i];
      target += digit * new_stride[perm[i]];
    }
    map[flat] = target;
  }
  return map;
}

}  // namespace

Matrix permute_subsystems(const Matrix& m, const std::vector<int>& dims,
                          const std::vector<int>& perm) {
  const std::size_t total = dims_total(dims);
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != total)
    throw shape_error("permute_subsystems: matrix does not match dims");
  const auto map = permutation_index_map(dims, perm);
  Matrix out(total, total);
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c) out(map[r], map[c]) = m(r, c);
  return out;
}

Vector permute_subsystems(const Vector& v, const std::vector<int>& dims,
                          const std::vector<int>& perm) {
  const std::size_t total = dims_total(dims);
  if (static_cast<std::size_t>(v.size()) != total)
    throw shape_error("permute_subsystems: vector does not match dims");
  const auto map = permutation_index_map(dims, perm);
  Vector out(total);
  for (std::size_t i = 0; i < total; ++i) out(map[i]) = v(i);
  return out;
}

Vector gamma_vector(int d) {
  if (d < 2) throw argument_error("gamma_vector: d must be >= 2");
  check_entry_limit(static_cast<std::size_t>(d) * d, 1, "gamma_vector");
  Vector g = Vector::Zero(static_cast<std::size_t>(d) * d);
  for (int j = 0; j < d; ++j) g(static_cast<std::size_t>(j) * d + j) = 1.0;
  return g;
}

Matrix swap_operator(int d) {
  if (d < 2) throw argument_error("swap_operator: d must be >= 2");
  const std::size_t n = static_cast<std::size_t>(d) * d;
  check_entry_limit(n, n, "swap_operator");
  Matrix s = Matrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      s(static_cast<std::size_t>(i) * d + j,
        static_cast<std::size_t>(j) * d + i) = 1.0;
  return s;
}

Matrix cycswap_operator(int d, int parties) {
  if (d < 2) throw argument_error("cycswap_operator: d must be >= 2");
  if (parties < 2) throw argument_error("cycswap_operator: parties must be >= 2");
  std::vector<int> dims(static_cast<std::size_t>(parties), d);
  const std::size_t total = dims_total(dims);
  check_entry_limit(total, total, "cycswap_operator");
  // |a_1,...,a_m> -> |a_m, a_1, ..., a_{m-1}>: digit i moves to slot (i+1) mod m.
  const auto stride = strides_of(dims);
  Matrix c = Matrix::Zero(total, total);
  for (std::size_t col = 0; col < total; ++col) {
    std::size_t rest = col, row = 0;
    for (int i = 0; i < parties; ++i) {
      const std::size_t digit = rest / stride[i];
      rest %= stride[i];
      row += digit * stride[(i + 1) % parties];
    }
    c(row, col) = 1.0;
  }
  return c;
}

Matrix mat_exp(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw shape_error("mat_exp: input must be square");
  if (!(tol > 0.0)) throw argument_error("mat_exp: tol must be > 0");
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  // Scale so the 1-norm is at most 1/2, exponentiate by Taylor, square back.
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    squarings = std::min(squarings, 64);
  }
  const Matrix b = a / std::pow(2.0, squarings);

  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  constexpr int kMaxTerms = 64;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term = (term * b) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().colwise().sum().maxCoeff() <=
        tol * sum.cwiseAbs().colwise().sum().maxCoeff())
      break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

double schatten_norm(const Matrix& a, int p) {
  if (p == 2) return std::sqrt(a.cwiseAbs2().sum());
  if (p == 1) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().sum();
  }
  throw argument_error("schatten_norm: p must be 1 or 2");
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw shape_error("hs_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

}  // namespace wml
