#include "hoq/choi_numeric.hpp"

#include "hoq/error.hpp"
#include "hoq/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hoq {

namespace {

std::size_t side_of(const FactorProfile& dims) {
  std::size_t n = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidArgument("factor dimension < 1");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string dims_string(const FactorProfile& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Eigen::VectorXd eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

struct PsdSplit {
  Matrix positive;
  double negative_norm = 0;  // Frobenius norm of the clipped part
  double min_eigenvalue = 0;
};

PsdSplit psd_split(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  Eigen::VectorXd clipped = ev.cwiseMax(0.0);
  PsdSplit out;
  out.positive = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
  out.negative_norm = (ev - clipped).norm();
  out.min_eigenvalue = ev.size() ? ev.minCoeff() : 0.0;
  return out;
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

// Recursive split over factors, visiting only prefixes present in `j`.
void project_rec(const Matrix& o, const FactorProfile& dims, const std::vector<Bits>& strings, std::size_t lo,
                 std::size_t hi, std::size_t pos, Matrix& acc) {
  if (lo == hi) return;
  const std::size_t k = dims.size();
  const std::size_t remaining = k - pos;
  if (remaining < 63 && hi - lo == (std::size_t{1} << remaining)) {
    acc += o;  // every completion present: the sub-projector is the identity
    return;
  }
  // Within a shared prefix, strings with bit 0 at `pos` sort first.
  const Bits bit = Bits{1} << (k - 1 - pos);
  const std::size_t mid = static_cast<std::size_t>(
      std::partition_point(strings.begin() + lo, strings.begin() + hi, [bit](Bits b) { return (b & bit) == 0; }) -
      strings.begin());
  if (dims[pos] == 1) {
    project_rec(o, dims, strings, mid, hi, pos + 1, acc);
    return;
  }
  Matrix p1 = kernels::factor_average(o, dims, pos);
  if (mid < hi) project_rec(p1, dims, strings, mid, hi, pos + 1, acc);
  if (lo < mid) {
    Matrix p0 = o - p1;
    project_rec(p0, dims, strings, lo, mid, pos + 1, acc);
  }
}

Matrix project_matrix(const Matrix& o, const FactorProfile& dims, const StringSet& j) {
  if (j.length() != dims.size())
    throw DimensionError("project_delta: string length " + std::to_string(j.length()) + " for " +
                         std::to_string(dims.size()) + " factors");
  Matrix acc = Matrix::Zero(o.rows(), o.cols());
  project_rec(o, dims, j.strings(), 0, j.size(), 0, acc);
  return acc;
}

HermOp with_dims(const HermOp& o, FactorProfile dims) { return HermOp::trusted(std::move(dims), o.matrix()); }

// R's dims with size-1 factors dropped must match the normal-form dims of x.
void check_type_dims(const HermOp& r, const TypeSemantics& sem, const TypeExpr& x) {
  const auto rd = strip_trivial(r.dims());
  if (rd != sem.dims)
    throw DimensionError("operator dims " + dims_string(r.dims()) + " do not match type " + print_canonical(x) + " " +
                         dims_string(factor_dims(x)));
}

}  // namespace

FactorProfile strip_trivial(const FactorProfile& dims) {
  FactorProfile out;
  for (int d : dims)
    if (d != 1) out.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------
// HermOp

HermOp::HermOp(FactorProfile dims, Matrix matrix, double herm_tol) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  const auto n = side_of(dims_);
  if (matrix_.rows() != matrix_.cols() || static_cast<std::size_t>(matrix_.rows()) != n)
    throw DimensionError("matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                         " but dims " + dims_string(dims_) + " need side " + std::to_string(n));
  const double res = hermiticity_residual();
  if (res > herm_tol * std::max(1.0, matrix_.norm()))
    throw InvalidArgument("matrix is not Hermitian (residual " + std::to_string(res) + ")");
}

HermOp HermOp::trusted(FactorProfile dims, Matrix matrix) {
  HermOp out;
  out.dims_ = std::move(dims);
  out.matrix_ = hermitian_part(matrix);
  return out;
}

HermOp HermOp::identity(FactorProfile dims, double scale) {
  const auto n = static_cast<Eigen::Index>(side_of(dims));
  Matrix m = Matrix::Identity(n, n) * scale;
  return trusted(std::move(dims), std::move(m));
}

double HermOp::trace() const { return matrix_.trace().real(); }
double HermOp::frobenius() const { return matrix_.norm(); }
double HermOp::min_eigenvalue() const {
  const auto ev = eigenvalues(matrix_);
  return ev.size() ? ev.minCoeff() : 0.0;
}
double HermOp::max_eigenvalue() const {
  const auto ev = eigenvalues(matrix_);
  return ev.size() ? ev.maxCoeff() : 0.0;
}
double HermOp::hermiticity_residual() const { return (matrix_ - matrix_.adjoint()).norm(); }
HermOp HermOp::transpose() const { return trusted(dims_, matrix_.transpose()); }

HermOp operator+(const HermOp& a, const HermOp& b) {
  if (a.dims() != b.dims()) throw DimensionError("sum of operators with different dims");
  return HermOp::trusted(a.dims(), a.matrix() + b.matrix());
}

HermOp operator-(const HermOp& a, const HermOp& b) {
  if (a.dims() != b.dims()) throw DimensionError("difference of operators with different dims");
  return HermOp::trusted(a.dims(), a.matrix() - b.matrix());
}

HermOp operator*(double s, const HermOp& a) { return HermOp::trusted(a.dims(), s * a.matrix()); }

HermOp kron(const HermOp& a, const HermOp& b) {
  const auto na = a.side(), nb = b.side();
  Matrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  FactorProfile dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return HermOp::trusted(std::move(dims), std::move(out));
}

// ---------------------------------------------------------------------------
// Structural maps

HermOp apply_inverse_choi(const HermOp& m, const HermOp& o) {
  const auto md = strip_trivial(m.dims());
  const auto od = strip_trivial(o.dims());
  if (od.size() > md.size() || !std::equal(od.begin(), od.end(), md.begin()))
    throw DimensionError("input dims " + dims_string(o.dims()) + " are not a prefix of the Choi dims " +
                         dims_string(m.dims()));
  const FactorProfile out_dims(md.begin() + static_cast<long>(od.size()), md.end());
  const auto dx = o.side();
  const auto dy = m.side() / dx;
  Matrix out = Matrix::Zero(dy, dy);
  const Matrix& om = o.matrix();
  const Matrix& mm = m.matrix();
  for (Eigen::Index i = 0; i < dx; ++i)
    for (Eigen::Index j = 0; j < dx; ++j) {
      const auto c = om(j, i);
      if (c == std::complex<double>(0, 0)) continue;
      out.noalias() += c * mm.block(j * dy, i * dy, dy, dy);
    }
  return HermOp::trusted(out_dims, std::move(out));
}

HermOp partial_trace(const HermOp& o, std::span<const std::size_t> positions) {
  Matrix out = kernels::partial_trace(o.matrix(), o.dims(), positions);
  FactorProfile kept;
  for (std::size_t i = 0; i < o.dims().size(); ++i)
    if (std::find(positions.begin(), positions.end(), i) == positions.end()) kept.push_back(o.dims()[i]);
  return HermOp::trusted(std::move(kept), std::move(out));
}

HermOp project_delta(const HermOp& o, const StringSet& j) {
  return HermOp::trusted(o.dims(), project_matrix(hermitian_part(o.matrix()), o.dims(), j));
}

HermOp reorder_factors(const HermOp& o, std::span<const std::size_t> perm) {
  return HermOp::trusted(permute_dims(o.dims(), perm), kernels::reorder(o.matrix(), o.dims(), perm));
}

// ---------------------------------------------------------------------------
// Membership

MembershipReport check_deterministic(const HermOp& r, const TypeExpr& x, double tol) {
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  const auto sem = upsilon(x);
  check_type_dims(r, sem, x);
  const HermOp rn = with_dims(r, sem.dims);

  MembershipReport rep;
  rep.tolerance = tol;
  rep.lambda_expected = sem.lambda;
  rep.hermiticity_residual = r.hermiticity_residual();
  rep.min_eigenvalue = r.min_eigenvalue();
  rep.lambda_measured = r.trace() / static_cast<double>(r.side());
  const StringSet outside = complement_in_T(sem.delta);
  rep.residual_outside_delta = project_matrix(rn.matrix(), rn.dims(), outside).norm();

  const double scale = std::max(1.0, r.frobenius());
  rep.verdict = rep.hermiticity_residual <= tol * scale && rep.min_eigenvalue >= -tol &&
                std::abs(rep.lambda_measured - to_double(sem.lambda)) <= tol &&
                rep.residual_outside_delta <= tol * scale;
  return rep;
}

FeasibilityReport check_admissible(const HermOp& m, const TypeExpr& x, double tol, int max_iter) {
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  if (max_iter < 0) throw InvalidArgument("max_iter must be non-negative");
  const auto sem = upsilon(x);
  check_type_dims(m, sem, x);
  const double lambda = to_double(sem.lambda);
  const auto n = m.side();
  const Matrix& mm = m.matrix();

  FeasibilityReport rep;
  rep.tolerance = tol;

  const double m_min = m.min_eigenvalue();
  if (m_min <= -tol) {
    rep.rejected_at_precheck = true;
    rep.final_distance = psd_split(-mm).positive.norm();
    return rep;
  }
  if (m.trace() > lambda * static_cast<double>(n) + tol * static_cast<double>(n)) {
    rep.trace_bound_violated = true;
    rep.final_distance = (m.trace() - lambda * static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
    return rep;
  }

  const Matrix lambda_id = Matrix::Identity(n, n) * lambda;
  auto project_affine = [&](const Matrix& y) -> Matrix {
    return lambda_id + project_matrix(hermitian_part(y), sem.dims, sem.delta);
  };
  auto accept = [&](const Matrix& d, const PsdSplit& gap) {
    if (gap.min_eigenvalue < -tol) return false;
    return eigenvalues(d).minCoeff() >= -tol;
  };

  {
    const PsdSplit gap = psd_split(lambda_id - mm);
    rep.final_distance = gap.negative_norm;
    if (accept(lambda_id, gap)) {
      rep.feasible = Feasibility::Yes;
      rep.witness = HermOp::trusted(m.dims(), lambda_id);
      return rep;
    }
  }

  // Dykstra between A = λI + L_D and C = {Y : Y ⪰ M}.
  Matrix xk = lambda_id;
  Matrix p = Matrix::Zero(n, n);
  Matrix q = Matrix::Zero(n, n);
  double checkpoint = rep.final_distance;
  constexpr int kStallWindow = 50;
  constexpr int kStallMinIter = 100;
  constexpr double kStallProgress = 1e-5;
  for (int it = 1; it <= max_iter; ++it) {
    rep.iterations = it;
    const Matrix a = project_affine(xk + p);
    p = xk + p - a;
    const PsdSplit gap = psd_split(a - mm);
    rep.final_distance = gap.negative_norm;
    if (accept(a, gap)) {
      rep.feasible = Feasibility::Yes;
      rep.witness = HermOp::trusted(m.dims(), a);
      return rep;
    }
    const Matrix aq = a + q;
    const Matrix next = mm + psd_split(hermitian_part(aq - mm)).positive;
    q = aq - next;
    xk = next;
    if (it % kStallWindow == 0) {
      if (it >= kStallMinIter && checkpoint - rep.final_distance < kStallProgress * checkpoint) break;
      checkpoint = rep.final_distance;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Sampling

HermOp sample_deterministic(const TypeExpr& x, std::uint64_t seed, double spread) {
  if (!(spread >= 0 && spread <= 1)) throw InvalidArgument("spread must lie in [0, 1]");
  const auto sem = upsilon(x);
  const double lambda = to_double(sem.lambda);
  const FactorProfile dims = factor_dims(x);
  const auto n = static_cast<Eigen::Index>(side_of(dims));
  Matrix out = Matrix::Identity(n, n) * lambda;
  if (spread == 0 || sem.delta.empty()) return HermOp::trusted(dims, std::move(out));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = {re, im};
    }
  const Matrix xm = project_matrix(hermitian_part(g), sem.dims, sem.delta);
  const auto ev = eigenvalues(xm);
  const double opnorm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  if (opnorm > 0) out += xm * (0.95 * spread * lambda / opnorm);
  return HermOp::trusted(dims, std::move(out));
}

bool oracle_deterministic(const HermOp& m, const TypeExpr& x, const TypeExpr& y, int samples, std::uint64_t seed,
                          double tol) {
  if (samples < 0) throw InvalidArgument("samples must be non-negative");
  const auto md = strip_trivial(m.dims());
  auto expected = strip_trivial(factor_dims(x));
  const auto yd = strip_trivial(factor_dims(y));
  expected.insert(expected.end(), yd.begin(), yd.end());
  if (md != expected)
    throw DimensionError("Choi dims " + dims_string(m.dims()) + " do not match " + print_canonical(x) + " -> " +
                         print_canonical(y));
  if (m.min_eigenvalue() < -tol) return false;
  std::mt19937_64 seeds(seed);
  for (int s = 0; s < samples; ++s) {
    const HermOp d = sample_deterministic(x, seeds(), 1.0);
    if (!check_deterministic(apply_inverse_choi(m, d), y, tol).verdict) return false;
  }
  return true;
}

double max_admissible_scale(const HermOp& m, const TypeExpr& x, double tol, double dykstra_tol, int max_iter) {
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  const auto sem = upsilon(x);
  check_type_dims(m, sem, x);
  const auto ev = eigenvalues(m.matrix());
  if (ev.minCoeff() < -kMembershipTol) throw InvalidArgument("max_admissible_scale needs a positive semidefinite M");
  if (ev.maxCoeff() <= 0) throw InvalidArgument("max_admissible_scale needs M != 0");
  const double lambda = to_double(sem.lambda);
  double lo = lambda / ev.maxCoeff();                                   // lo*M <= λI
  double hi = lambda * static_cast<double>(m.side()) / m.trace();      // trace bound
  if (hi < lo) hi = lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const auto rep = check_admissible(mid * m, x, dykstra_tol, max_iter);
    (rep.feasible == Feasibility::Yes ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace hoq
