#include "lrcare/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "lrcare/log.hpp"

namespace lrcare {

namespace {

void check_shift(Shift mu) {
  if (!(mu.real() > 0.0) || !std::isfinite(mu.real()) || !std::isfinite(mu.imag()))
    throw ConfigError("shift " + format_shift(mu) + " must have positive real part");
}


MatrixXc orthonormal_basis(const MatrixXc& v) {
  Eigen::ColPivHouseholderQR<MatrixXc> qr(v);
  qr.setThreshold(1e-12);
  const Index rank = qr.rank();
  MatrixXc q = qr.householderQ() * MatrixXc::Identity(v.rows(), rank);
  return q;
}

}  // namespace

ShiftStrategy ShiftStrategy::fixed(std::vector<Shift> shifts, bool cyclic) {
  if (shifts.empty()) throw ConfigError("empty shift list");
  for (Shift mu : shifts) check_shift(mu);
  ShiftStrategy s;
  s.kind_ = Kind::fixed;
  s.list_ = std::move(shifts);
  s.cyclic_ = cyclic;
  return s;
}

ShiftStrategy ShiftStrategy::residual_projection(Index window) {
  if (window < 1) throw ConfigError("projection window must be at least 1");
  ShiftStrategy s;
  s.kind_ = Kind::residual_projection;
  s.window_ = window;
  return s;
}

bool ShiftStrategy::exhausted() const {
  return kind_ == Kind::fixed && !cyclic_ && position_ >= list_.size();
}

std::vector<Shift> ShiftStrategy::next_fixed(Index count, bool real_problem) {
  std::vector<Shift> out;
  auto take = [&]() -> bool {
    if (position_ >= list_.size()) {
      if (!cyclic_) return false;
      position_ = 0;
    }
    out.push_back(list_[position_++]);
    return true;
  };
  if (exhausted()) throw ConfigError("shift list exhausted");
  for (Index i = 0; i < count; ++i)
    if (!take()) break;
  // Do not split a conjugate pair across batches.
  if (real_problem &&
      std::count_if(out.begin(), out.end(), [](Shift s) { return s.imag() != 0.0; }) % 2 == 1)
    take();
  return out;
}

std::vector<Shift> projected_hamiltonian_shifts(const CareProblem& problem, const MatrixXc& basis,
                                                Index count) {
  const MatrixXc u = orthonormal_basis(basis);
  const Index k = u.cols();
  if (k == 0) return {};
  const MatrixXc au = problem.a<cplx>() * u;
  const MatrixXc ar = u.adjoint() * au;
  const MatrixXc bu = problem.b<cplx>().adjoint() * u;
  const MatrixXc cu = problem.c<cplx>() * u;

  MatrixXc ham(2 * k, 2 * k);
  ham.topLeftCorner(k, k) = ar;
  ham.topRightCorner(k, k) = bu.adjoint() * bu;
  ham.bottomLeftCorner(k, k) = cu.adjoint() * cu;
  ham.bottomRightCorner(k, k) = -ar.adjoint();
  if (problem.has_mass()) {
    const MatrixXc er = u.adjoint() * (problem.e<cplx>() * u);
    Eigen::PartialPivLU<MatrixXc> lu(er);
    Eigen::PartialPivLU<MatrixXc> luh(MatrixXc(er.adjoint()));
    ham.topRows(k) = lu.solve(MatrixXc(ham.topRows(k)));
    ham.bottomRows(k) = luh.solve(MatrixXc(ham.bottomRows(k)));
  }
  Eigen::ComplexEigenSolver<MatrixXc> es(ham, false);
  if (es.info() != Eigen::Success) return {};

  std::vector<Shift> stable;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx lambda = es.eigenvalues()(i);
    if (lambda.real() < 0.0 && std::isfinite(lambda.real())) stable.push_back(-lambda);
  }
  std::stable_sort(stable.begin(), stable.end(),
                   [](Shift a, Shift b) { return std::abs(a) > std::abs(b); });

  std::vector<Shift> out;
  const bool real = problem.field_is_real();
  for (Shift mu : stable) {
    if (static_cast<Index>(out.size()) >= count) break;
    if (!real) {
      out.push_back(mu);
      continue;
    }
    if (std::abs(mu.imag()) <= 1e-10 * std::abs(mu)) {
      out.emplace_back(mu.real(), 0.0);
    } else if (mu.imag() > 0.0) {
      out.push_back(mu);
      out.push_back(std::conj(mu));
    }
  }
  return out;
}

std::vector<Shift> ShiftStrategy::next_projection(const MatrixXc& r, const CareProblem& problem,
                                                  Index count) {
  history_.push_back(r);
  while (static_cast<Index>(history_.size()) > window_) history_.erase(history_.begin());
  Index cols = 0;
  for (const auto& h : history_) cols += h.cols();
  MatrixXc basis(r.rows(), cols);
  Index c = 0;
  for (const auto& h : history_) {
    basis.middleCols(c, h.cols()) = h;
    c += h.cols();
  }
  std::vector<Shift> out = projected_hamiltonian_shifts(problem, basis, count);
  if (out.empty()) {
    if (!last_.empty()) {
      warn("no stable projected eigenvalue; repeating the previous shifts");
      out = last_;
    } else {
      // ||A||_1 bounds the spectral radius; a crude but positive shift.
      const SparseXc& a = problem.a<cplx>();
      double norm = 0.0;
      for (Index j = 0; j < a.outerSize(); ++j) {
        double s = 0.0;
        for (SparseXc::InnerIterator it(a, j); it; ++it) s += std::abs(it.value());
        norm = std::max(norm, s);
      }
      warn("no stable projected eigenvalue; using the norm of A as shift");
      out = {Shift(norm > 0.0 ? norm : 1.0, 0.0)};
    }
  }
  last_ = out;
  return out;
}

template <typename Scalar>
std::vector<Shift> ShiftStrategy::next(const IterateState<Scalar>& state,
                                       const CareProblem& problem, Index count) {
  if (count < 1) throw ConfigError("shift count must be at least 1");
  std::vector<Shift> out;
  if (kind_ == Kind::fixed) {
    out = next_fixed(count, problem.field_is_real() && !is_complex_v<Scalar>);
  } else {
    out = next_projection(state.r().template cast<cplx>(), problem, count);
  }
  for (Shift mu : out) check_shift(mu);
  return out;
}

template std::vector<Shift> ShiftStrategy::next(const IterateState<double>&, const CareProblem&,
                                                Index);
template std::vector<Shift> ShiftStrategy::next(const IterateState<cplx>&, const CareProblem&,
                                                Index);

std::vector<Shift> parse_shifts(std::istream& in, const std::string& source) {
  std::vector<Shift> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    if (!(ls >> re)) {
      ls.clear();
      std::string rest;
      if (ls >> rest)
        throw InputError(source + ":" + std::to_string(lineno) + ": malformed shift");
      continue;
    }
    if (!(ls >> im)) im = 0.0;
    std::string extra;
    if (ls >> extra)
      throw InputError(source + ":" + std::to_string(lineno) + ": trailing text after shift");
    out.emplace_back(re, im);
  }
  return out;
}

std::vector<Shift> read_shift_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open shift file " + path.string());
  return parse_shifts(in, path.string());
}

void write_shift_file(const std::filesystem::path& path, const std::vector<Shift>& shifts) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  for (Shift mu : shifts) out << mu.real() << ' ' << mu.imag() << '\n';
}

}  // namespace lrcare
