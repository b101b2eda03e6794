#include "lrcare/iterate_state.hpp"

#include <cmath>

#include "lrcare/dense_kernels.hpp"
#include "lrcare/manifest.hpp"
#include "lrcare/matrix_market.hpp"
#include "lrcare/shifts.hpp"

namespace lrcare {

namespace {

template <typename Scalar>
Matrix<Scalar> hcat(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(std::max(a.rows(), b.rows()), a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

// [[a, b], [c, d]]
template <typename Scalar>
Matrix<Scalar> blocks(const Matrix<Scalar>& a, const Matrix<Scalar>& b, const Matrix<Scalar>& c,
                      const Matrix<Scalar>& d) {
  const Index r1 = a.rows(), c1 = a.cols(), r2 = d.rows(), c2 = d.cols();
  Matrix<Scalar> out(r1 + r2, c1 + c2);
  out.topLeftCorner(r1, c1) = a;
  out.topRightCorner(r1, c2) = b;
  out.bottomLeftCorner(r2, c1) = c;
  out.bottomRightCorner(r2, c2) = d;
  return out;
}

template <typename Scalar>
Matrix<Scalar> mass_adjoint_times(const CareProblem& problem, const Matrix<Scalar>& x) {
  return problem.apply_mass_adjoint<Scalar>(x);
}

void require_full(bool gain_only, const char* what) {
  if (gain_only) throw ConfigError(std::string(what) + " is not available in gain-only mode");
}

}  // namespace

template <typename Scalar>
IterateState<Scalar> IterateState<Scalar>::initial(const CareProblem& problem, bool gain_only) {
  IterateState s;
  const Index n = problem.n(), m = problem.m(), p = problem.p();
  s.r_ = problem.c<Scalar>().adjoint();
  s.k_ = Matrix<Scalar>::Zero(n, m);
  s.gain_only_ = gain_only;
  if (!gain_only) {
    s.z_.resize(n, 0);
    s.yinv_.resize(0, 0);
    s.g_.resize(0, 0);
    s.h_.resize(p, 0);
    s.hminus_.resize(0, 0);
    s.bz_.resize(m, 0);
  }
  return s;
}

template <typename Scalar>
Matrix<Scalar> IterateState<Scalar>::apply_y(const Matrix<Scalar>& x) const {
  require_full(gain_only_, "Y");
  if (x.rows() != g_.rows()) throw Error("apply_y: dimension mismatch");
  if (x.rows() == 0) return x;
  Matrix<Scalar> t = g_.adjoint().template triangularView<Eigen::Lower>().solve(x);
  return g_.template triangularView<Eigen::Upper>().solve(t);
}

template <typename Scalar>
void IterateState<Scalar>::verify(const CareProblem& problem) const {
  if (gain_only_) return;
  const double yn = yinv_.norm();
  if ((g_.adjoint() * g_ - yinv_).norm() > 1e-10 * std::max(yn, 1e-300))
    throw Error("invariant violated: Cholesky factor does not reproduce Yinv");
  const Matrix<Scalar> ch = problem.c<Scalar>().adjoint();
  const Matrix<Scalar> corr = mass_adjoint_times<Scalar>(problem, Matrix<Scalar>(z_ * apply_y(h_.adjoint())));
  const double scale = ch.norm() + corr.norm();
  if ((ch + corr - r_).norm() > 1e-10 * scale)
    throw Error("invariant violated: R != C^H + E^H Z Y h^H");
  if (brad_residual(*this, problem) > 1e-8)
    throw Error("invariant violated: Arnoldi decomposition residual too large");
}

template <typename S>
IterateState<S> expand(IterateState<S> state, const CareProblem& problem,
                       const ExpansionBlock<S>& block) {
  require_full(state.gain_only_, "expand");
  const Index n = state.n(), p = state.p(), k = state.columns_;
  const Index q = block.zhat.cols();
  if (block.zhat.rows() != n || block.u1.rows() != p || block.u1.cols() != q ||
      block.u2.rows() != k || block.u2.cols() != q || block.d.rows() != q || block.d.cols() != q)
    throw Error("expansion block dimensions do not match the state");
  const Shift tag = block.shifts.empty() ? Shift(0.0) : block.shifts.front();

  const Matrix<S> bzhat = problem.b<S>().adjoint() * block.zhat;

  // H^H Y12 + Y12 D = Z^H B B^H Zhat + h^H U1 - Yinv U2
  Matrix<S> y12_rhs = state.bz_.adjoint() * bzhat + state.h_.adjoint() * block.u1 -
                      state.yinv_ * block.u2;
  const Matrix<S> y12 =
      solve_quasi_triangular_sylvester<S>(state.hminus_.adjoint(), block.d, y12_rhs);

  // D^H Y22 + Y22 D = Zhat^H B B^H Zhat + U1^H U1 - Y12^H U2 - U2^H Y12
  const Matrix<S> cross = y12.adjoint() * block.u2;
  const Matrix<S> q_rhs = hermitian_part<S>(
      bzhat.adjoint() * bzhat + block.u1.adjoint() * block.u1 - cross - cross.adjoint());
  const Matrix<S> y22 =
      hermitian_part<S>(solve_quasi_triangular_sylvester<S>(block.d.adjoint(), block.d, q_rhs));

  Matrix<S> g12(k, q);
  if (k > 0) g12 = state.g_.adjoint().template triangularView<Eigen::Lower>().solve(y12);
  const Matrix<S> g22 = upper_cholesky<S>(y22 - g12.adjoint() * g12, tag);

  state.yinv_ = blocks<S>(state.yinv_, y12, y12.adjoint(), y22);
  state.g_ = blocks<S>(state.g_, g12, Matrix<S>::Zero(q, k), g22);
  state.z_ = hcat<S>(state.z_, block.zhat);
  state.h_ = hcat<S>(state.h_, block.u1);
  state.hminus_ = blocks<S>(state.hminus_, block.u2, Matrix<S>::Zero(q, k), block.d);
  state.bz_ = hcat<S>(state.bz_, bzhat);
  state.shifts_.insert(state.shifts_.end(), block.shifts.begin(), block.shifts.end());
  state.columns_ += q;

  // R = C^H + E^H Z Y h^H, K = Z Y Z^H B
  const Index m = state.m();
  const Matrix<S> w = state.apply_y(hcat<S>(state.h_.adjoint(), state.bz_.adjoint()));
  const Matrix<S> zw = state.z_ * w;
  state.r_ = problem.c<S>().adjoint() + mass_adjoint_times<S>(problem, Matrix<S>(zw.leftCols(p)));
  state.k_ = zw.rightCols(m);

  if (state.check_invariants) state.verify(problem);
  return state;
}

template <typename S>
IterateState<S> expand_block_diagonal(IterateState<S> state, const CareProblem& problem,
                                      const Matrix<S>& zhat, const Matrix<S>& bzhat,
                                      const Matrix<S>& y22, const Matrix<S>& u1,
                                      const Matrix<S>& d, const std::vector<Shift>& shifts) {
  const Index n = state.n(), p = state.p(), m = state.m();
  const Index q = zhat.cols();
  if (zhat.rows() != n || bzhat.rows() != m || bzhat.cols() != q || y22.rows() != q ||
      y22.cols() != q || u1.rows() != p || u1.cols() != q || d.rows() != q || d.cols() != q)
    throw Error("block-diagonal expansion dimensions do not match the state");
  const Shift tag = shifts.empty() ? Shift(0.0) : shifts.front();

  const Matrix<S> y22h = hermitian_part<S>(y22);
  const Matrix<S> g22 = upper_cholesky<S>(y22h, tag);
  // y22^{-1} [U1^H, (B^H Zhat)^H]
  const Matrix<S> t = g22.adjoint().template triangularView<Eigen::Lower>().solve(
      hcat<S>(u1.adjoint(), bzhat.adjoint()));
  const Matrix<S> v = g22.template triangularView<Eigen::Upper>().solve(t);
  const Matrix<S> zv = zhat * v;

  if (!state.gain_only_) {
    const Index k = state.columns_;
    const Matrix<S> u2 = state.apply_y(
        Matrix<S>(state.h_.adjoint() * u1 + state.bz_.adjoint() * bzhat));
    state.yinv_ = blocks<S>(state.yinv_, Matrix<S>::Zero(k, q), Matrix<S>::Zero(q, k), y22h);
    state.g_ = blocks<S>(state.g_, Matrix<S>::Zero(k, q), Matrix<S>::Zero(q, k), g22);
    state.z_ = hcat<S>(state.z_, zhat);
    state.h_ = hcat<S>(state.h_, u1);
    state.hminus_ = blocks<S>(state.hminus_, u2, Matrix<S>::Zero(q, k), d);
    state.bz_ = hcat<S>(state.bz_, bzhat);
  }
  state.r_ += mass_adjoint_times<S>(problem, Matrix<S>(zv.leftCols(p)));
  state.k_ += zv.rightCols(m);
  state.shifts_.insert(state.shifts_.end(), shifts.begin(), shifts.end());
  state.columns_ += q;

  if (state.check_invariants) state.verify(problem);
  return state;
}

template <typename Scalar>
double residual_norm(const IterateState<Scalar>& state) {
  return (state.r().adjoint() * state.r()).norm();
}

template <typename Scalar>
CholeskyForm<Scalar> cholesky_form(const IterateState<Scalar>& state) {
  require_full(state.gain_only(), "cholesky_form");
  CholeskyForm<Scalar> out;
  out.g = state.g();
  if (state.columns() == 0) {
    out.factor.resize(state.n(), 0);
    return out;
  }
  out.factor = state.g()
                   .adjoint()
                   .template triangularView<Eigen::Lower>()
                   .solve(state.z().adjoint())
                   .adjoint();
  return out;
}

template <typename Scalar>
Matrix<Scalar> assemble_dense(const IterateState<Scalar>& state) {
  if (state.n() > kDenseLimit)
    throw ConfigError("dense assembly refused for n = " + std::to_string(state.n()));
  const auto cf = cholesky_form(state);
  if (cf.factor.cols() == 0) return Matrix<Scalar>::Zero(state.n(), state.n());
  return hermitian_part<Scalar>(cf.factor * cf.factor.adjoint());
}

template <typename Scalar>
double brad_residual(const IterateState<Scalar>& state, const CareProblem& problem) {
  require_full(state.gain_only(), "brad_residual");
  if (state.columns() == 0) return 0.0;
  const Matrix<Scalar> lhs = problem.a<Scalar>().adjoint() * state.z();
  const Matrix<Scalar> top = problem.c<Scalar>().adjoint() * state.h();
  const Matrix<Scalar> rest =
      mass_adjoint_times<Scalar>(problem, Matrix<Scalar>(state.z() * state.hminus()));
  const double scale = lhs.norm() + top.norm() + rest.norm();
  if (scale == 0.0) return 0.0;
  return (lhs - top - rest).norm() / scale;
}

namespace {

template <typename Scalar>
Matrix<Scalar> read_dense(const std::filesystem::path& path) {
  const MatrixXc m = read_matrix_market(path).dense();
  if constexpr (is_complex_v<Scalar>) {
    return m;
  } else {
    if ((m.imag().array() != 0.0).any())
      throw InputError(path.string() + ": complex data in a real state");
    return m.real();
  }
}

}  // namespace

template <typename Scalar>
void save_state(const IterateState<Scalar>& state, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Manifest man;
  man.set("scalar", is_complex_v<Scalar> ? "complex" : "real");
  man.set("columns", std::to_string(state.columns()));
  man.set("gain_only", state.gain_only() ? "true" : "false");
  auto put = [&](const std::string& key, const Matrix<Scalar>& m) {
    const std::string file = key + ".mtx";
    write_matrix_market_file<Scalar>(dir / file, m);
    man.set(key, file);
  };
  put("R", state.r());
  put("K", state.k());
  if (!state.gain_only()) {
    put("Z", state.z());
    put("Yinv", state.yinv());
    put("h", state.h());
    put("Hminus", state.hminus());
    put("BZ", state.bz());
  }
  write_shift_file(dir / "shifts.txt", state.shifts());
  man.set("shifts", "shifts.txt");
  man.write(dir / "state.manifest");
}

template <typename Scalar>
IterateState<Scalar> load_state(const std::filesystem::path& dir) {
  const Manifest man = Manifest::read(dir / "state.manifest");
  const std::string scalar = man.get("scalar").value_or("");
  if (scalar != (is_complex_v<Scalar> ? "complex" : "real"))
    throw InputError("state in " + dir.string() + " has scalar type '" + scalar + "'");
  IterateState<Scalar> s;
  s.gain_only_ = man.get("gain_only").value_or("false") == "true";
  s.columns_ = std::stol(man.get("columns").value_or("0"));
  s.r_ = read_dense<Scalar>(man.resolve("R"));
  s.k_ = read_dense<Scalar>(man.resolve("K"));
  s.shifts_ = read_shift_file(man.resolve("shifts"));
  if (!s.gain_only_) {
    s.z_ = read_dense<Scalar>(man.resolve("Z"));
    s.yinv_ = read_dense<Scalar>(man.resolve("Yinv"));
    s.h_ = read_dense<Scalar>(man.resolve("h"));
    s.hminus_ = read_dense<Scalar>(man.resolve("Hminus"));
    s.bz_ = read_dense<Scalar>(man.resolve("BZ"));
    if (s.z_.cols() != s.columns_ || s.yinv_.rows() != s.columns_)
      throw InputError("inconsistent state in " + dir.string());
    s.g_ = upper_cholesky<Scalar>(s.yinv_, Shift(0.0));
  }
  return s;
}

#define LRCARE_INSTANTIATE(S)                                                                   \
  template class IterateState<S>;                                                              \
  template IterateState<S> expand<S>(IterateState<S>, const CareProblem&,                      \
                                     const ExpansionBlock<S>&);                                \
  template IterateState<S> expand_block_diagonal<S>(                                           \
      IterateState<S>, const CareProblem&, const Matrix<S>&, const Matrix<S>&,                 \
      const Matrix<S>&, const Matrix<S>&, const Matrix<S>&, const std::vector<Shift>&);        \
  template double residual_norm<S>(const IterateState<S>&);                                    \
  template CholeskyForm<S> cholesky_form<S>(const IterateState<S>&);                           \
  template Matrix<S> assemble_dense<S>(const IterateState<S>&);                                \
  template double brad_residual<S>(const IterateState<S>&, const CareProblem&);                \
  template void save_state<S>(const IterateState<S>&, const std::filesystem::path&);           \
  template IterateState<S> load_state<S>(const std::filesystem::path&);

LRCARE_INSTANTIATE(double)
LRCARE_INSTANTIATE(cplx)

#undef LRCARE_INSTANTIATE

}  // namespace lrcare
