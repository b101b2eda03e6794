#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lrcare/log.hpp"
#include "lrcare/manifest.hpp"
#include "lrcare/matrix_market.hpp"
#include "test_util.hpp"

using namespace lrcare;
using lrcare::testing::scalar_problem;

TEST(Problem, ScalarIsReal) {
  const auto p = scalar_problem();
  EXPECT_TRUE(p.field_is_real());
  EXPECT_EQ(p.n(), 1);
  EXPECT_EQ(p.m(), 1);
  EXPECT_EQ(p.p(), 1);
  EXPECT_FALSE(p.is_lyapunov());
  EXPECT_DOUBLE_EQ(p.initial_residual_norm(), 1.0);
}

TEST(Problem, Lyapunov) {
  const auto p = lrcare::testing::scalar_lyapunov();
  EXPECT_TRUE(p.is_lyapunov());
  EXPECT_EQ(p.m(), 0);
}

TEST(Problem, TooManyOutputsRejected) {
  SparseXd a(2, 2);
  a.insert(0, 0) = -1;
  a.insert(1, 1) = -1;
  EXPECT_THROW(CareProblem::assemble(a, MatrixXd::Ones(2, 1), MatrixXd::Random(3, 2)), InputError);
  EXPECT_THROW(CareProblem::assemble(a, MatrixXd::Ones(3, 1), MatrixXd::Random(1, 2)), InputError);
  EXPECT_THROW(CareProblem::assemble(a, MatrixXd::Ones(2, 1), MatrixXd(0, 2)), InputError);
}

TEST(Problem, StructurallySingularMass) {
  SparseXd a(2, 2);
  a.insert(0, 0) = -1;
  a.insert(1, 1) = -1;
  SparseXd e(2, 2);
  e.insert(0, 0) = 1;
  EXPECT_THROW(CareProblem::assemble(a, MatrixXd::Ones(2, 1), MatrixXd::Ones(1, 2), e), InputError);
}

TEST(Problem, RankDeficientInputs) {
  SparseXd a(3, 3);
  for (int i = 0; i < 3; ++i) a.insert(i, i) = -1;
  MatrixXd b(3, 2);
  b << 1, 2, 1, 2, 1, 2;
  EXPECT_THROW(CareProblem::assemble(a, b, MatrixXd::Ones(1, 3)), InputError);
}

TEST(Problem, ComplexDetection) {
  const auto p = random_stable_problem(6, 1, 1, 3, true);
  EXPECT_FALSE(p.field_is_real());
  EXPECT_THROW(p.a<double>(), ConfigError);
  const auto q = random_stable_problem(6, 1, 1, 3, false);
  EXPECT_TRUE(q.field_is_real());
}

TEST(Problem, MassAdjoint) {
  const auto base = random_stable_problem(5, 1, 1, 4);
  const auto p = with_random_spd_mass(base, 9);
  const MatrixXd x = MatrixXd::Random(5, 2);
  const MatrixXd ex = MatrixXd(p.e<double>()).transpose() * x;
  EXPECT_LT((p.apply_mass_adjoint<double>(x) - ex).norm(), 1e-14);
  EXPECT_EQ(base.apply_mass_adjoint<double>(x), x);
}

TEST(Manifest, ParseAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "lrcare_manifest_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "A.mtx") << "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 -1\n";
    std::ofstream(dir / "B.mtx") << "%%MatrixMarket matrix array real general\n1 1\n1\n";
    std::ofstream(dir / "C.mtx") << "%%MatrixMarket matrix array real general\n1 1\n1\n";
    std::ofstream(dir / "toy.manifest") << "# toy\nA = A.mtx\nB = \"B.mtx\"\nC = C.mtx\ntol = 1e-10\n";
  }
  const auto m = Manifest::read(dir / "toy.manifest");
  EXPECT_EQ(m.get("tol").value(), "1e-10");
  EXPECT_EQ(m.resolve("B"), dir / "B.mtx");
  const auto p = load_problem(m);
  EXPECT_EQ(p.n(), 1);
  EXPECT_EQ(p.m(), 1);

  auto broken = Manifest::parse("A = missing.mtx\nC = C.mtx\n", dir);
  try {
    load_problem(broken);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.mtx"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
