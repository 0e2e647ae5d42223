#include "hoq/kernels.hpp"

#include "hoq/error.hpp"
#include "hoq/subspace_algebra.hpp"

#include <algorithm>

namespace hoq::kernels {

std::vector<std::size_t> strides(const FactorProfile& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * static_cast<std::size_t>(dims[i]);
  return s;
}

std::size_t total_dim(const FactorProfile& dims) {
  std::size_t d = 1;
  for (int v : dims) d *= static_cast<std::size_t>(v);
  return d;
}

namespace {

void check_square(const Matrix& in, const FactorProfile& dims) {
  if (in.rows() != in.cols() || static_cast<std::size_t>(in.rows()) != total_dim(dims))
    throw DimensionError("matrix side " + std::to_string(in.rows()) + " does not match the factor dimensions");
}

struct TraceLayout {
  FactorProfile kept_dims;
  std::vector<std::size_t> kept_offset;    // flat offset in `in` for each kept multi-index
  std::vector<std::size_t> traced_offset;  // flat offset in `in` for each traced multi-index
};

// Enumerates flat offsets of a sub-grid of factors in row-major digit order.
std::vector<std::size_t> grid_offsets(const FactorProfile& dims, const std::vector<std::size_t>& stride,
                                      const std::vector<std::size_t>& factors) {
  std::vector<std::size_t> out{0};
  for (auto f : factors) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * static_cast<std::size_t>(dims[f]));
    for (auto base : out)
      for (int a = 0; a < dims[f]; ++a) next.push_back(base + static_cast<std::size_t>(a) * stride[f]);
    out.swap(next);
  }
  return out;
}

TraceLayout trace_layout(const FactorProfile& dims, std::span<const std::size_t> traced) {
  std::vector<bool> is_traced(dims.size(), false);
  for (auto t : traced) {
    if (t >= dims.size()) throw DimensionError("partial trace index " + std::to_string(t) + " out of range");
    if (is_traced[t]) throw InvalidArgument("partial trace index " + std::to_string(t) + " repeated");
    is_traced[t] = true;
  }
  std::vector<std::size_t> kept, gone;
  for (std::size_t i = 0; i < dims.size(); ++i) (is_traced[i] ? gone : kept).push_back(i);
  const auto stride = strides(dims);
  TraceLayout layout;
  for (auto k : kept) layout.kept_dims.push_back(dims[k]);
  layout.kept_offset = grid_offsets(dims, stride, kept);
  layout.traced_offset = grid_offsets(dims, stride, gone);
  return layout;
}

std::vector<std::size_t> reorder_map(const FactorProfile& dims, std::span<const std::size_t> perm) {
  if (!is_permutation(perm, dims.size())) throw InvalidArgument("reorder: not a permutation of the factors");
  const auto new_dims = permute_dims(dims, perm);
  const auto new_stride = strides(new_dims);
  const std::size_t n = total_dim(dims);
  std::vector<std::size_t> map(n);
  std::vector<int> digit(dims.size(), 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) target += static_cast<std::size_t>(digit[i]) * new_stride[perm[i]];
    map[flat] = target;
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (++digit[i] < dims[i]) break;
      digit[i] = 0;
    }
  }
  return map;
}

}  // namespace

// ---------------------------------------------------------------------------
// Serial reference

namespace serial {

Matrix factor_average(const Matrix& in, const FactorProfile& dims, std::size_t k) {
  check_square(in, dims);
  if (k >= dims.size()) throw DimensionError("factor index out of range");
  const auto s = strides(dims)[k];
  const auto d = static_cast<std::size_t>(dims[k]);
  const auto n = static_cast<std::size_t>(in.rows());
  Matrix out = Matrix::Zero(in.rows(), in.cols());
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t ck = (c / s) % d;
    const std::size_t base_c = c - ck * s;
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t rk = (r / s) % d;
      if (rk != ck) continue;
      const std::size_t base_r = r - rk * s;
      std::complex<double> acc = 0;
      for (std::size_t a = 0; a < d; ++a) acc += in(base_r + a * s, base_c + a * s);
      out(r, c) = acc / static_cast<double>(d);
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> traced) {
  check_square(in, dims);
  const auto layout = trace_layout(dims, traced);
  const auto m = layout.kept_offset.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t r = 0; r < m; ++r) {
      std::complex<double> acc = 0;
      for (auto t : layout.traced_offset) acc += in(layout.kept_offset[r] + t, layout.kept_offset[c] + t);
      out(r, c) = acc;
    }
  return out;
}

Matrix reorder(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> perm) {
  check_square(in, dims);
  const auto map = reorder_map(dims, perm);
  const auto n = map.size();
  Matrix out(in.rows(), in.cols());
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) out(map[r], map[c]) = in(r, c);
  return out;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP

namespace parallel {

Matrix factor_average(const Matrix& in, const FactorProfile& dims, std::size_t k) {
  check_square(in, dims);
  if (k >= dims.size()) throw DimensionError("factor index out of range");
  const auto s = static_cast<long>(strides(dims)[k]);
  const auto d = static_cast<long>(dims[k]);
  const auto n = static_cast<long>(in.rows());
  Matrix out = Matrix::Zero(in.rows(), in.cols());
  // Each (base_r, base_c) block is averaged once and written to its d diagonal slots.
#pragma omp parallel for schedule(static)
  for (long c = 0; c < n; ++c) {
    const long ck = (c / s) % d;
    if (ck != 0) continue;
    for (long r = 0; r < n; ++r) {
      if ((r / s) % d != 0) continue;
      std::complex<double> acc = 0;
      for (long a = 0; a < d; ++a) acc += in(r + a * s, c + a * s);
      acc /= static_cast<double>(d);
      for (long a = 0; a < d; ++a) out(r + a * s, c + a * s) = acc;
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> traced) {
  check_square(in, dims);
  const auto layout = trace_layout(dims, traced);
  const auto m = static_cast<long>(layout.kept_offset.size());
  Matrix out = Matrix::Zero(m, m);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < m; ++c)
    for (long r = 0; r < m; ++r) {
      std::complex<double> acc = 0;
      for (auto t : layout.traced_offset) acc += in(layout.kept_offset[r] + t, layout.kept_offset[c] + t);
      out(r, c) = acc;
    }
  return out;
}

Matrix reorder(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> perm) {
  check_square(in, dims);
  const auto map = reorder_map(dims, perm);
  const auto n = static_cast<long>(map.size());
  Matrix out(in.rows(), in.cols());
#pragma omp parallel for schedule(static)
  for (long c = 0; c < n; ++c)
    for (long r = 0; r < n; ++r) out(map[r], map[c]) = in(r, c);
  return out;
}

}  // namespace parallel

Matrix factor_average(const Matrix& in, const FactorProfile& dims, std::size_t k) {
  return in.rows() < kParallelThreshold ? serial::factor_average(in, dims, k) : parallel::factor_average(in, dims, k);
}

Matrix partial_trace(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> traced) {
  return in.rows() < kParallelThreshold ? serial::partial_trace(in, dims, traced)
                                        : parallel::partial_trace(in, dims, traced);
}

Matrix reorder(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> perm) {
  return in.rows() < kParallelThreshold ? serial::reorder(in, dims, perm) : parallel::reorder(in, dims, perm);
}

}  // namespace hoq::kernels
