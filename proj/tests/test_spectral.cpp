#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qineq/random.hpp"
#include "qineq/spectral.hpp"

using namespace qineq;

namespace {

const Quaternion I = Quaternion::i();
const Quaternion J = Quaternion::j();

void expect_spheres(const SphericalSpectrum& s, std::vector<Sphere> want, double tol = 1e-9) {
  ASSERT_EQ(s.spheres.size(), want.size());
  auto by_re = [](const Sphere& a, const Sphere& b) { return a.re < b.re || (a.re == b.re && a.im < b.im); };
  auto got = s.spheres;
  std::sort(got.begin(), got.end(), by_re);
  std::sort(want.begin(), want.end(), by_re);
  for (std::size_t k = 0; k < want.size(); ++k) {
    EXPECT_NEAR(got[k].re, want[k].re, tol);
    EXPECT_NEAR(got[k].im, want[k].im, tol);
    EXPECT_EQ(got[k].mult, want[k].mult);
  }
}

}  // namespace

TEST(Delta, Examples) {
  EXPECT_EQ(delta(QMatrix{{2.0}}, 3.0), (QMatrix{{1.0}}));
  EXPECT_EQ(delta(QMatrix{{2.0}}, 2.0), (QMatrix{{0.0}}));
  EXPECT_TRUE(approx_equal(delta(QMatrix{{J}}, I)(0, 0), 0.0));
}

TEST(Spectrum, Examples) {
  expect_spheres(spectrum(QMatrix::diagonal({1.0, 4.0})), {{1, 0, 1}, {4, 0, 1}});
  expect_spheres(spectrum(QMatrix{{J}}), {{0, 1, 1}});
  expect_spheres(spectrum(QMatrix{{2.0, J}, {-J, 2.0}}), {{1, 0, 1}, {3, 0, 1}});
  expect_spheres(spectrum(QMatrix::identity(3)), {{1, 0, 3}});
  expect_spheres(spectrum(QMatrix::diagonal({2.0, 2.0, -1.0})), {{-1, 0, 1}, {2, 0, 2}});
}

TEST(Spectrum, SphereIsSimilarityInvariant) {
  // i, j and k all lie on the unit imaginary sphere, so diag(i, j) has one sphere of multiplicity 2.
  QMatrix t(2);
  t(0, 0) = I;
  t(1, 1) = J;
  expect_spheres(spectrum(t), {{0, 1, 2}});
  // 1 + 2k: sphere centred at 1 with radius 2
  expect_spheres(spectrum(QMatrix{{Quaternion(1, 0, 0, 2)}}), {{1, 2, 1}});
}

TEST(Spectrum, RepresentativesAreSingularAndMultiplicitiesSum) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const QMatrix t = random_matrix(n, seed);
    const SphericalSpectrum s = spectrum(t, {.verify = false});
    EXPECT_EQ(s.total_multiplicity(), static_cast<int>(n));
    const double scale = std::max(1.0, op_norm(t) * op_norm(t));
    for (const auto& sp : s.spheres) {
      EXPECT_GE(sp.im, 0.0);
      // any point of the sphere works, not only the complex representative
      const Quaternion on_sphere(sp.re, 0.0, sp.im * 0.6, sp.im * 0.8);
      EXPECT_LE(min_singular_value(delta(t, sp.representative())), 1e-8 * scale);
      EXPECT_LE(min_singular_value(delta(t, on_sphere)), 1e-8 * scale);
    }
    EXPECT_LE(spectral_radius(s), op_norm(t) * (1 + 1e-12));
  }
}

TEST(Spectrum, SelfadjointIsReal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const QMatrix t = random_selfadjoint(6, -2.0, 3.0, seed);
    for (const auto& sp : spectrum(t).spheres) EXPECT_EQ(sp.im, 0.0);
  }
  EXPECT_TRUE(residual_spectrum(QMatrix::identity(2)).empty());
  EXPECT_TRUE(continuous_spectrum(QMatrix::identity(2)).empty());
}

TEST(SpectralRadius, Examples) {
  EXPECT_NEAR(spectral_radius(QMatrix::diagonal({1.0, 4.0})), 4.0, 1e-12);
  EXPECT_NEAR(spectral_radius(QMatrix{{J}}), 1.0, 1e-12);
  // nilpotent: radius 0 but norm 1
  EXPECT_NEAR(spectral_radius(QMatrix{{0.0, 1.0}, {0.0, 0.0}}), 0.0, 1e-7);
}

TEST(SpectralRadius, NormalOperatorsAttainTheNorm) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const QMatrix t = random_normal(1 + seed % 8, seed);
    const double nt = op_norm(t);
    EXPECT_LE(std::abs(spectral_radius(t) - nt), 1e-9 * std::max(1.0, nt)) << "seed " << seed;
  }
}

TEST(Bounds, Examples) {
  const auto b1 = bounds(QMatrix::diagonal({1.0, 4.0}));
  EXPECT_NEAR(b1.lower, 1.0, 1e-14);
  EXPECT_NEAR(b1.upper, 4.0, 1e-14);
  const auto b2 = bounds(QMatrix{{2.0, J}, {-J, 2.0}});
  EXPECT_NEAR(b2.lower, 1.0, 1e-12);
  EXPECT_NEAR(b2.upper, 3.0, 1e-12);
  const auto b3 = bounds(QMatrix::identity(5));
  EXPECT_NEAR(b3.lower, 1.0, 1e-14);
  EXPECT_NEAR(b3.upper, 1.0, 1e-14);
  EXPECT_THROW(bounds(QMatrix{{J}}), UsageError);
}

TEST(Bounds, MatchRayleighQuotientRange) {
  Rng rng(2);
  const QMatrix t = random_selfadjoint(4, -1.0, 2.0, 91);
  for (int k = 0; k < 500; ++k) {
    const QVector x = random_unit_vector(4, rng);
    const double c = inner(apply(t, x), x).x0;
    EXPECT_GE(c, -1.0 - 1e-12);
    EXPECT_LE(c, 2.0 + 1e-12);
  }
}

TEST(Resolvent, ZeroOperator) {
  const ResolventResult r = resolvent_series(QMatrix(2), Quaternion(3, 0, 0, 0), 1e-14);
  EXPECT_EQ(r.terms, 0u);
  EXPECT_LE(op_norm(r.value - QMatrix::identity(2) * (1.0 / 9.0)), 1e-16);
  const ResolventResult r2 = resolvent_series(QMatrix(3), Quaternion(0, 1, 2, 2), 1e-14);
  EXPECT_LE(op_norm(r2.value - QMatrix::identity(3) * (1.0 / 9.0)), 1e-16);
}

TEST(Resolvent, ScalarExample) {
  const ResolventResult r = resolvent_series(QMatrix{{1.0}}, 3.0, 1e-14);
  EXPECT_NEAR(r.value(0, 0).x0, 0.25, 1e-12);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_THROW(resolvent_series(QMatrix{{1.0}}, 0.5, 1e-12), DomainError);
  EXPECT_THROW(resolvent_series(QMatrix{{1.0}}, 1.0, 1e-12), DomainError);
  EXPECT_THROW(resolvent_series(QMatrix{{1.0}}, 3.0, 0.0), UsageError);
}

TEST(Resolvent, MatchesDirectInversion) {
  Rng rng(41);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + k % 6;
    const QMatrix t = random_matrix(n, rng);
    Quaternion dir = random_quaternion(rng);
    dir = dir / abs(dir);
    const Quaternion q = dir * (op_norm(t) * uniform(rng, 1.2, 4.0));
    const ResolventResult r = resolvent_series(t, q, 1e-13);
    const QMatrix direct = inverse(delta(t, q));
    EXPECT_LE(op_norm(r.value - direct), 1e-9 * op_norm(direct)) << "trial " << k;
    EXPECT_LE(r.max_imag_coeff, 1e-14);
  }
}

TEST(Resolvent, CoefficientsAreRealAndMatchClosedForm) {
  Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const Quaternion q = random_quaternion(rng);
    const double len = abs(q);
    const double theta = std::acos(std::clamp(q.x0 / len, -1.0, 1.0));
    for (std::size_t n = 0; n <= 20; ++n) {
      const Quaternion a = resolvent_coefficient(q, n);
      const double scale = (n + 1) * std::pow(len, -double(n) - 2.0);
      EXPECT_LE(std::sqrt(a.imag_norm2()), 1e-13 * scale);
      // sum_h e^{i theta (2h - n)} = sin((n+1) theta) / sin(theta)
      const double st = std::sin(theta);
      if (st > 1e-3) {
        const double want = std::sin((n + 1) * theta) / st * std::pow(len, -double(n) - 2.0);
        EXPECT_NEAR(a.x0, want, 1e-11 * scale);
      }
    }
  }
  EXPECT_THROW(resolvent_coefficient(0.0, 1), DomainError);
}

TEST(Resolvent, TailBoundClosedForm) {
  // direct partial sum of (n+1) rho^n / |q|^2 beyond N
  const double tn = 1.0, qa = 2.0;
  for (std::size_t big_n : {0u, 3u, 10u}) {
    double direct = 0.0;
    for (std::size_t n = big_n + 1; n < 2000; ++n) direct += (n + 1) * std::pow(tn / qa, double(n)) / (qa * qa);
    EXPECT_NEAR(resolvent_tail_bound(tn, qa, big_n), direct, 1e-14);
  }
}

TEST(SpectrumAlgebra, Examples) {
  const CheckReport id = spectrum_algebra_checks(QMatrix::identity(2), QMatrix::identity(2), true);
  EXPECT_TRUE(id.pass());
  const CheckReport diag = spectrum_algebra_checks(QMatrix::diagonal({1.0, 2.0}), QMatrix::diagonal({3.0, 4.0}), true);
  EXPECT_TRUE(diag.pass());
  expect_spheres(spectrum(QMatrix::diagonal({4.0, 6.0})), {{4, 0, 1}, {6, 0, 1}});
}

TEST(SpectrumAlgebra, RandomPairs) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const QMatrix s = random_matrix(n, 2 * seed) * (1.0 / std::sqrt(double(n)));
    const QMatrix t = random_matrix(n, 2 * seed + 1) * (1.0 / std::sqrt(double(n)));
    const CheckReport rep = spectrum_algebra_checks(s, t);
    for (const auto& item : rep.items) EXPECT_TRUE(item.pass()) << item.label << " " << item.value;
  }
}

TEST(SpectrumAlgebra, RejectsNonCommutingSumCheck) {
  const QMatrix s = random_selfadjoint(3, 0.0, 1.0, 1);
  const QMatrix t = random_selfadjoint(3, 0.0, 1.0, 2);
  EXPECT_THROW(spectrum_algebra_checks(s, t, true), UsageError);
  EXPECT_THROW(spectrum_algebra_checks(QMatrix(2), QMatrix(3)), UsageError);
}

TEST(SpectrumHausdorff, Basic) {
  SphericalSpectrum a{{{1, 0, 1}}}, b{{{1, 0, 1}, {4, 0, 1}}};
  EXPECT_DOUBLE_EQ(spectrum_hausdorff(a, b), 3.0);
  EXPECT_DOUBLE_EQ(spectrum_hausdorff(b, b), 0.0);
}
