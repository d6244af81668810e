#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace flagcurv;
using namespace flagcurv::testing;

TEST(Bracket, AbelianIsZero) {
  const auto L = abelian(3);
  EXPECT_TRUE(bracket(L, e(3, 0), e(3, 1)).isZero());
}

TEST(Bracket, Su2ReadsStructureConstants) {
  const auto L = su2();
  EXPECT_TRUE(bracket(L, e(3, 0), e(3, 1)).isApprox(e(3, 2)));
}

TEST(Bracket, Su2BilinearExpansion) {
  const auto L = su2();
  // 2[e1,e3] + [e2,e3] = -2 e2 + e1
  const Vec expected = 2.0 * bracket(L, e(3, 0), e(3, 2)) + bracket(L, e(3, 1), e(3, 2));
  const Vec got = bracket(L, Vec(2.0 * e(3, 0) + e(3, 1)), e(3, 2));
  EXPECT_TRUE(got.isApprox(expected));
  EXPECT_TRUE(got.isApprox(Vec(e(3, 0) - 2.0 * e(3, 1))));
}

TEST(Bracket, DimensionMismatchIsInputError) {
  const auto L = su2();
  EXPECT_THROW(bracket(L, Vec(Vec::Zero(2)), e(3, 0)), InputError);
}

TEST(Bracket, BilinearAndAntisymmetricOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto L = random_algebra(rng);
    const Index n = L.dim();
    const Vec x = random_vector(n, rng), y = random_vector(n, rng), z = random_vector(n, rng);
    const double a = random_vector(1, rng)(0), b = random_vector(1, rng)(0);
    const Vec lhs = bracket(L, Vec(a * x + b * y), z);
    const Vec rhs = a * bracket(L, x, z) + b * bracket(L, y, z);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((bracket(L, x, y) + bracket(L, y, x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Antisymmetrization, NormalizesAndFlags) {
  StructureTensor<double> raw(3);
  raw(0, 1, 2) = 1.0;  // mirror entry missing
  const LieAlgebra<double> L(raw);
  EXPECT_TRUE(L.was_antisymmetrized());
  EXPECT_DOUBLE_EQ(L.structure_constant(0, 1, 2), 0.5);
  EXPECT_DOUBLE_EQ(L.structure_constant(1, 0, 2), -0.5);
  EXPECT_FALSE(su2().was_antisymmetrized());
}

TEST(Jacobi, KnownAlgebrasSatisfyIt) {
  EXPECT_EQ(jacobi_defect(abelian(3)), 0.0);
  EXPECT_EQ(jacobi_defect(su2()), 0.0);
  EXPECT_EQ(jacobi_defect(heisenberg()), 0.0);
  EXPECT_EQ(jacobi_defect(e2()), 0.0);
}

TEST(Jacobi, BrokenAlgebraHasDefectOne) {
  // [e1,e2] = e3, [e1,e3] = e1: the Jacobiator on (1,2,3) is e3.
  StructureTensor<double> c(3);
  c.set_bracket(0, 1, 2, 1.0);
  c.set_bracket(0, 2, 0, 1.0);
  const LieAlgebra<double> L(c);
  EXPECT_DOUBLE_EQ(jacobi_defect(L), 1.0);

  // Brute-force the same triple directly.
  const Vec j = bracket(L, e(3, 0), bracket(L, e(3, 1), e(3, 2))) +
                bracket(L, e(3, 1), bracket(L, e(3, 2), e(3, 0))) +
                bracket(L, e(3, 2), bracket(L, e(3, 0), e(3, 1)));
  EXPECT_TRUE(j.isApprox(e(3, 2)));
}

TEST(Jacobi, DefectInvariantUnderBasisPermutation) {
  StructureTensor<double> c(4);
  c.set_bracket(0, 1, 2, 1.0);
  c.set_bracket(0, 2, 0, 1.0);
  c.set_bracket(1, 3, 3, 0.5);
  const LieAlgebra<double> L(c);
  const double reference = jacobi_defect(L);
  std::vector<int> perm{0, 1, 2, 3};
  do {
    Mat P = Mat::Zero(4, 4);
    for (int i = 0; i < 4; ++i) P(perm[i], i) = 1.0;
    EXPECT_NEAR(jacobi_defect(change_basis(L, P)), reference, 1e-15);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(DerivedSubalgebra, Su2IsPerfect) { EXPECT_EQ(derived_subalgebra(su2()).cols(), 3); }

TEST(DerivedSubalgebra, HeisenbergIsSpannedByE3) {
  const Mat d = derived_subalgebra(heisenberg());
  ASSERT_EQ(d.cols(), 1);
  EXPECT_NEAR(std::abs(d(2, 0)), 1.0, 1e-14);
  EXPECT_NEAR(d(0, 0), 0.0, 1e-14);
  EXPECT_NEAR(d(1, 0), 0.0, 1e-14);
}

TEST(DerivedSubalgebra, AbelianIsEmpty) { EXPECT_EQ(derived_subalgebra(abelian(3)).cols(), 0); }

TEST(Project, Su2OverU1SplitsBracket) {
  // basis (e3, e1, e2); h = span{first}
  const auto L = su2_u1();
  const ReductiveSplit split(3, 1);
  const Vec b = bracket(L, e(3, 1), e(3, 2));  // [e1, e2] = e3
  EXPECT_TRUE(project(split, b, Part::H).isApprox(e(3, 0)));
  EXPECT_TRUE(project(split, b, Part::M).isZero());
}

TEST(Project, ComplementaryAndIdempotent) {
  std::mt19937_64 rng(3);
  for (Index h = 0; h <= 4; ++h) {
    const ReductiveSplit split(4, h);
    const Vec x = random_vector(4, rng);
    const Vec xh = project(split, x, Part::H), xm = project(split, x, Part::M);
    EXPECT_TRUE((xh + xm).isApprox(x));
    EXPECT_EQ(project(split, xh, Part::H), xh);
    EXPECT_EQ(project(split, xm, Part::M), xm);
  }
  EXPECT_TRUE(project(ReductiveSplit(3, 0), Vec(Vec::Ones(3)), Part::H).isZero());
}

TEST(Reductive, Su2OverU1Passes) {
  const auto r = check_reductive(su2_u1(), ReductiveSplit(3, 1), 1e-9);
  EXPECT_TRUE(r.subalgebra_ok);
  EXPECT_TRUE(r.ad_invariant_ok);
}

TEST(Reductive, TrivialHPassesVacuously) {
  const auto r = check_reductive(su2(), ReductiveSplit(3, 0), 1e-9);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.max_defect, 0.0);
}

TEST(Reductive, DiagonalLineInSu2WithOrthogonalComplementPasses) {
  // h = span{e1+e2}, m = span{e1-e2, e3}: [e1+e2, e3] = e1 - e2 and
  // [e1+e2, e1-e2] = -2 e3 both stay in m.
  Mat P(3, 3);
  P << 1, 1, 0, 1, -1, 0, 0, 0, 1;
  const auto r = check_reductive(change_basis(su2(), P), ReductiveSplit(3, 1), 1e-9);
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.max_defect, 1e-14);
}

TEST(Reductive, SkewedComplementFailsWithDefectOne) {
  // h = span{e1}, m = span{e1+e2, e3}: [e1, e3] = -e2 = e1 - (e1+e2).
  Mat P(3, 3);
  P << 1, 1, 0, 0, 1, 0, 0, 0, 1;
  const auto L = change_basis(su2(), P);
  const auto r = check_reductive(L, ReductiveSplit(3, 1), 1e-9);
  EXPECT_TRUE(r.subalgebra_ok);
  EXPECT_FALSE(r.ad_invariant_ok);
  EXPECT_NEAR(r.max_defect, 1.0, 1e-14);
}
