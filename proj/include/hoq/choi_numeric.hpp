#pragma once

#include "hoq/kernels.hpp"
#include "hoq/rational.hpp"
#include "hoq/subspace_algebra.hpp"
#include "hoq/type_ast.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hoq {

using Matrix = Eigen::MatrixXcd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kMembershipTol = 1e-9;
inline constexpr double kDykstraTol = 1e-6;
inline constexpr int kDykstraMaxIter = 10000;

/// A Hermitian operator on a tensor product of factors. Factor 0 is the most
/// significant index of the matrix (Kronecker order).
class HermOp {
 public:
  HermOp() = default;
  /// Throws DimensionError if the side is not prod(dims), InvalidArgument if
  /// ||M - M^†||_F > herm_tol * ||M||_F.
  HermOp(FactorProfile dims, Matrix matrix, double herm_tol = kHermTol);

  /// Skips validation and symmetrises; for results of Hermiticity-preserving maps.
  static HermOp trusted(FactorProfile dims, Matrix matrix);
  static HermOp identity(FactorProfile dims, double scale = 1.0);

  const FactorProfile& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::Index side() const noexcept { return matrix_.rows(); }

  double trace() const;
  double frobenius() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// ||M - M^†||_F
  double hermiticity_residual() const;
  HermOp transpose() const;

 private:
  FactorProfile dims_;
  Matrix matrix_;
};

HermOp operator+(const HermOp& a, const HermOp& b);
HermOp operator-(const HermOp& a, const HermOp& b);
HermOp operator*(double s, const HermOp& a);
/// a ⊗ b with the factor lists concatenated.
HermOp kron(const HermOp& a, const HermOp& b);

struct MembershipReport {
  bool verdict = false;
  double lambda_measured = 0;
  Rational lambda_expected;
  double min_eigenvalue = 0;
  double hermiticity_residual = 0;
  /// Frobenius norm of the component in L_{T \ D_x}.
  double residual_outside_delta = 0;
  double tolerance = 0;
};

enum class Feasibility { Yes, NoCertificate };

struct FeasibilityReport {
  Feasibility feasible = Feasibility::NoCertificate;
  std::optional<HermOp> witness;
  int iterations = 0;
  /// ||negative part of (D - M)||_F for the last candidate D.
  double final_distance = 0;
  bool rejected_at_precheck = false;
  /// Tr M exceeds λ_x d_x, which no D in Evd(x) can dominate.
  bool trace_bound_violated = false;
  double tolerance = 0;
};

/// Tr_x[(O^T ⊗ I_y) M]. M's leading factors (ignoring size-1 factors) must
/// equal O's factors; the remaining factors of M are the output.
HermOp apply_inverse_choi(const HermOp& m, const HermOp& o);

/// Traces out the listed factor positions.
HermOp partial_trace(const HermOp& o, std::span<const std::size_t> positions);

/// Hilbert-Schmidt projection onto the direct sum of L_b over b in J.
HermOp project_delta(const HermOp& o, const StringSet& j);

HermOp reorder_factors(const HermOp& o, std::span<const std::size_t> perm);

MembershipReport check_deterministic(const HermOp& r, const TypeExpr& x, double tol = kMembershipTol);

FeasibilityReport check_admissible(const HermOp& m, const TypeExpr& x, double tol = kDykstraTol,
                                   int max_iter = kDykstraMaxIter);

/// λ_x I + X with X a Gaussian draw in L_{D_x} scaled to operator norm
/// 0.95 * spread * λ_x. spread = 0 returns λ_x I.
HermOp sample_deterministic(const TypeExpr& x, std::uint64_t seed, double spread = 1.0);

/// Randomised necessary test that M maps Evd(x) into Evd(y).
bool oracle_deterministic(const HermOp& m, const TypeExpr& x, const TypeExpr& y, int samples, std::uint64_t seed,
                          double tol = kMembershipTol);

/// Largest s with s*M admissible for x, by bisection to within `tol`.
double max_admissible_scale(const HermOp& m, const TypeExpr& x, double tol = 1e-4,
                            double dykstra_tol = kDykstraTol, int max_iter = kDykstraMaxIter);

/// Dims with size-1 factors removed.
FactorProfile strip_trivial(const FactorProfile& dims);

}  // namespace hoq
