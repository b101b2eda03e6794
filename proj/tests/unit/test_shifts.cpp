#include <gtest/gtest.h>

#include <sstream>

#include "lrcare/shifts.hpp"
#include "test_util.hpp"

using namespace lrcare;
using namespace lrcare::testing;

TEST(Shifts, FixedList) {
  const auto problem = scalar_problem();
  const auto state = IterateState<double>::initial(problem);
  auto s = ShiftStrategy::fixed({Shift(1.0), Shift(2.0), Shift(3.0)});
  EXPECT_EQ(s.next(state, problem, 2), (std::vector<Shift>{Shift(1.0), Shift(2.0)}));
  EXPECT_EQ(s.next(state, problem, 2), (std::vector<Shift>{Shift(3.0)}));
  EXPECT_TRUE(s.exhausted());
  EXPECT_THROW(s.next(state, problem, 1), ConfigError);

  auto cyc = ShiftStrategy::fixed({Shift(1.0), Shift(2.0)}, true);
  EXPECT_EQ(cyc.next(state, problem, 3), (std::vector<Shift>{Shift(1.0), Shift(2.0), Shift(1.0)}));
  EXPECT_FALSE(cyc.exhausted());
  EXPECT_THROW(ShiftStrategy::fixed({Shift(-1.0)}), ConfigError);
}

TEST(Shifts, FixedListKeepsPairsTogether) {
  const auto problem = scalar_problem();
  const auto state = IterateState<double>::initial(problem);
  auto s = ShiftStrategy::fixed({Shift(1.0, 1.0), Shift(1.0, -1.0), Shift(2.0)});
  EXPECT_EQ(s.next(state, problem, 1).size(), 2u);
  EXPECT_EQ(s.next(state, problem, 1).size(), 1u);
}

TEST(Shifts, ScalarProjection) {
  const auto problem = scalar_problem();
  const auto state = IterateState<double>::initial(problem);
  auto s = ShiftStrategy::residual_projection(1);
  const auto mus = s.next(state, problem, 1);
  ASSERT_EQ(mus.size(), 1u);
  EXPECT_NEAR(mus[0].real(), std::sqrt(2.0), 1e-14);
  EXPECT_EQ(mus[0].imag(), 0.0);
}

TEST(Shifts, ProjectionPairsAndScaleInvariance) {
  for (int seed = 0; seed < 5; ++seed) {
    const auto problem = random_stable_problem(30, 2, 3, 300 + seed);
    const MatrixXc r = MatrixXc::Random(30, 3);
    const auto a = projected_hamiltonian_shifts(problem, r, 4);
    const auto b = projected_hamiltonian_shifts(problem, cplx(-3.5, 2.0) * r, 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_GT(a[i].real(), 0.0);
      EXPECT_LE(std::abs(a[i] - b[i]), 1e-10 * std::abs(a[i]));
      if (a[i].imag() > 0.0) {
        ASSERT_LT(i + 1, a.size());
        EXPECT_EQ(a[i + 1], std::conj(a[i]));
      }
    }
  }
}

TEST(Shifts, ParseFile) {
  std::istringstream in("# shifts\n1.4142135623730951 0\n\n2 -0.5  # trailing\n3\n");
  const auto mus = parse_shifts(in);
  ASSERT_EQ(mus.size(), 3u);
  EXPECT_EQ(mus[0], Shift(1.4142135623730951, 0.0));
  EXPECT_EQ(mus[1], Shift(2.0, -0.5));
  EXPECT_EQ(mus[2], Shift(3.0, 0.0));
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(parse_shifts(bad), InputError);
  std::istringstream bad2("abc\n");
  EXPECT_THROW(parse_shifts(bad2), InputError);
}

TEST(Shifts, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "lrcare_shifts.txt";
  const std::vector<Shift> mus = {Shift(0.1, 0.3), Shift(1.0 / 3.0, 0.0)};
  write_shift_file(path, mus);
  EXPECT_EQ(read_shift_file(path), mus);
  std::filesystem::remove(path);
  EXPECT_THROW(read_shift_file(path), ConfigError);
}
