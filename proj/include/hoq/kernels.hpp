#pragma once

// Dense tensor-factor kernels on complex matrices. Each kernel exists twice:
// `serial::` is the straightforward reference kept for testing, `parallel::`
// is the OpenMP version. The unqualified entry points dispatch on size.
//
// Index convention: for factors (d_0, ..., d_{k-1}) the flat index of the
// multi-index (i_0, ..., i_{k-1}) is sum_j i_j * prod_{l>j} d_l, i.e. factor 0
// is the most significant digit (Kronecker-product order).

#include "hoq/type_ast.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace hoq::kernels {

using Matrix = Eigen::MatrixXcd;

/// Matrices with side below this run the serial path.
inline constexpr Eigen::Index kParallelThreshold = 64;

namespace serial {
/// Tr_k[in] / d_k ⊗ I_k, re-embedded at factor k.
Matrix factor_average(const Matrix& in, const FactorProfile& dims, std::size_t k);
/// Trace out the listed factors; the remaining factors keep their order.
Matrix partial_trace(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> traced);
/// Scatter factor i to position perm[i].
Matrix reorder(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> perm);
}  // namespace serial

namespace parallel {
Matrix factor_average(const Matrix& in, const FactorProfile& dims, std::size_t k);
Matrix partial_trace(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> traced);
Matrix reorder(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> perm);
}  // namespace parallel

Matrix factor_average(const Matrix& in, const FactorProfile& dims, std::size_t k);
Matrix partial_trace(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> traced);
Matrix reorder(const Matrix& in, const FactorProfile& dims, std::span<const std::size_t> perm);

std::vector<std::size_t> strides(const FactorProfile& dims);
std::size_t total_dim(const FactorProfile& dims);

}  // namespace hoq::kernels
