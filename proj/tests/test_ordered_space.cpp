#include <gtest/gtest.h>

#include "corpus.hpp"
#include "posasym/errors.hpp"
#include "posasym/ordered_space.hpp"
#include "posasym/positive_operator.hpp"

namespace posasym {
namespace {

using testing::Rng;

TEST(ConeSpace, RejectsZeroDimensionAndBadTolerance) {
  EXPECT_THROW(ConeSpace(0), DomainError);
  EXPECT_THROW(ConeSpace(3, -1.0), DomainError);
  EXPECT_THROW(ConeSpace(3, std::numeric_limits<double>::infinity()), DomainError);
}

TEST(ConeSpace, MembershipAndInterior) {
  const ConeSpace k(3);
  EXPECT_TRUE(in_cone(k, Vector::Zero(3)));
  EXPECT_FALSE(in_interior(k, Vector::Zero(3)));
  EXPECT_TRUE(in_cone(k, Vector{{1.0, 0.0, 2.0}}));
  EXPECT_FALSE(in_interior(k, Vector{{1.0, 0.0, 2.0}}));
  EXPECT_TRUE(in_interior(k, Vector{{1.0, 1e-300, 2.0}}));
  EXPECT_FALSE(in_cone(k, Vector{{1.0, -1e-300, 2.0}}));
  EXPECT_THROW(in_cone(k, Vector::Ones(2)), DimensionError);
}

TEST(ConeSpace, InteriorToleranceIsRelative) {
  const ConeSpace k(2, 1e-6);
  EXPECT_FALSE(in_interior(k, Vector{{1e-7, 1.0}}));
  EXPECT_TRUE(in_interior(k, Vector{{1e-5, 1.0}}));
  EXPECT_FALSE(in_interior(k, Vector{{1e-5, 1e2}}));
}

TEST(OrderUnit, RejectsBoundaryUnits) {
  const ConeSpace k(3);
  EXPECT_THROW(OrderUnit(k, Vector{{1.0, 0.0, 1.0}}), DomainError);
  EXPECT_THROW(OrderUnit(k, Vector{{1.0, -1.0, 1.0}}), DomainError);
  EXPECT_THROW(OrderUnit(k, Vector::Ones(2)), DimensionError);
}

TEST(OrderUnit, NormConstant) {
  const ConeSpace k(3);
  EXPECT_DOUBLE_EQ(OrderUnit::ones(k).norm_constant(), 1.0);
  EXPECT_DOUBLE_EQ(OrderUnit(k, Vector{{0.25, 1.0, 3.0}}).norm_constant(), 4.0);
  EXPECT_DOUBLE_EQ(OrderUnit(k, Vector{{0.5, 1.0, 3.0}}).norm_constant(), 3.0);
  EXPECT_DOUBLE_EQ(OrderUnit(k, Vector{{0.5, 1.0, 3.0}}).gamma(), 1.0);
}

TEST(UNorm, SmallestMultipleOfUnitDominating) {
  const ConeSpace k(3);
  const OrderUnit unit(k, Vector{{1.0, 2.0, 4.0}});
  const Vector x{{-0.5, 3.0, 2.0}};
  const double r = u_norm(unit, x);
  EXPECT_DOUBLE_EQ(r, 1.5);
  // Order characterization: -r u <= x <= r u, and nothing smaller works.
  EXPECT_TRUE(in_cone(k, r * unit.u() - x));
  EXPECT_TRUE(in_cone(k, r * unit.u() + x));
  EXPECT_FALSE(in_cone(k, 0.999 * r * unit.u() - x));
}

TEST(UNorm, SandwichedByMaxNorm) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = testing::uniform_size(rng, 1, 10);
    const OrderUnit unit(ConeSpace(d), testing::random_unit(rng, d, 0.1, 5.0));
    const Vector x = testing::random_signed(rng, d);
    const double c = unit.norm_constant();
    const double un = u_norm(unit, x);
    EXPECT_LE(max_norm(x), c * un * (1 + 1e-15));
    EXPECT_LE(un, c * max_norm(x) * (1 + 1e-15));
  }
}

TEST(NonflatDecompose, SplitsWithinNorm) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = testing::uniform_size(rng, 1, 10);
    const OrderUnit unit(ConeSpace(d), testing::random_unit(rng, d));
    const Vector x = testing::random_signed(rng, d);
    const auto [pos, neg] = nonflat_decompose(unit, x);
    EXPECT_TRUE(in_cone(unit.space(), pos));
    EXPECT_TRUE(in_cone(unit.space(), neg));
    EXPECT_LE(max_norm(pos - neg - x), 0.0);
    EXPECT_LE(u_norm(unit, pos), unit.gamma() * u_norm(unit, x));
    EXPECT_LE(u_norm(unit, neg), unit.gamma() * u_norm(unit, x));
  }
}

TEST(DualBase, ExtremePointsTakeOneOnUnit) {
  const OrderUnit unit(ConeSpace(3), Vector{{1.0, 2.0, 4.0}});
  const DualBase base(unit);
  for (std::size_t i = 0; i < 3; ++i) {
    const Vector f = base.extreme_point(i);
    EXPECT_DOUBLE_EQ(f.dot(unit.u()), 1.0);
    EXPECT_TRUE(in_cone(unit.space(), f));
  }
  const Vector x{{-0.5, 3.0, 2.0}};
  EXPECT_DOUBLE_EQ(base.sup(x), 1.5);
  EXPECT_DOUBLE_EQ(base.inf(x), -0.5);
  EXPECT_DOUBLE_EQ(base.evaluate(2, x), 0.5);
  EXPECT_THROW(base.evaluate(3, x), DimensionError);
}

TEST(DualBase, SupOfAbsIsUNorm) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = testing::uniform_size(rng, 1, 8);
    const DualBase base(OrderUnit(ConeSpace(d), testing::random_unit(rng, d)));
    const Vector x = testing::random_signed(rng, d);
    EXPECT_DOUBLE_EQ(std::max(base.sup(x), -base.inf(x)), u_norm(base.unit(), x));
  }
}

TEST(PositiveOperator, RejectsNegativeEntryWithIndex) {
  try {
    PositiveOperator(Matrix{{1.0, 0.0}, {-0.5, 1.0}});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("(2,1)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(PositiveOperator(Matrix{{std::nan(""), 0.0}, {0.0, 1.0}}), DomainError);
  EXPECT_THROW(PositiveOperator(Matrix::Ones(2, 3)), DimensionError);
}

TEST(PositiveOperator, FixesUnit) {
  const Vector u{{1.0, 2.0}};
  const Matrix s{{0.5, 0.5}, {0.2, 0.8}};
  const PositiveOperator a(testing::similar_to(s, u));
  EXPECT_TRUE(fixes_unit(a, OrderUnit(a.space(), u), 1e-14));
  EXPECT_FALSE(fixes_unit(a, OrderUnit::ones(a.space()), 1e-6));
  EXPECT_THROW(a.apply(Vector::Ones(3)), DimensionError);
}

}  // namespace
}  // namespace posasym
