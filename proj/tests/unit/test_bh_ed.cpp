#include <doctest.h>

#include <cmath>
#include <vector>

#include "fiberpol/bh_ed.hpp"
#include "fiberpol/errors.hpp"

using namespace fiberpol;

namespace {

// Brute-force count over all (n_max + 1)^L occupation vectors.
std::size_t count_by_enumeration(int sites, int bosons, int n_max) {
  std::vector<int> occ(static_cast<std::size_t>(sites), 0);
  std::size_t count = 0;
  for (;;) {
    int sum = 0;
    for (int n : occ) sum += n;
    if (sum == bosons) ++count;
    int i = 0;
    while (i < sites && occ[static_cast<std::size_t>(i)] == n_max) occ[static_cast<std::size_t>(i++)] = 0;
    if (i == sites) return count;
    ++occ[static_cast<std::size_t>(i)];
  }
}

double two_site_ground(double j, double u) { return (u - std::sqrt(u * u + 16 * j * j)) / 2; }

double e0(int sites, int bosons, int n_max, double j, double u, bool periodic,
          EigenMethod method = EigenMethod::Auto) {
  return ground_energy(build_hamiltonian(FockBasis(sites, bosons, n_max), j, u, periodic), method).energy;
}

}  // namespace

TEST_CASE("basis dimension matches brute-force enumeration") {
  for (int sites = 1; sites <= 6; ++sites)
    for (int n_max = 1; n_max <= 4; ++n_max)
      for (int bosons = 0; bosons <= sites * n_max; ++bosons) {
        INFO(sites << " sites, " << bosons << " bosons, n_max " << n_max);
        const std::size_t expected = count_by_enumeration(sites, bosons, n_max);
        CHECK(FockBasis::bounded_compositions(sites, bosons, n_max) == expected);
        CHECK(FockBasis(sites, bosons, n_max).size() == expected);
      }
}

TEST_CASE("basis ordering and lookup") {
  const FockBasis basis(4, 5, 3);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto s = basis.state(i);
    int sum = 0;
    for (auto n : s) {
      sum += n;
      CHECK(n <= 3);
    }
    CHECK(sum == 5);
    CHECK(basis.index_of(s) == i);
    if (i > 0) {
      const auto prev = basis.state(i - 1);
      CHECK(std::lexicographical_compare(prev.begin(), prev.end(), s.begin(), s.end()));
    }
  }
  const std::vector<std::uint8_t> wrong_sum{1, 1, 1, 1};
  CHECK_FALSE(basis.index_of(wrong_sum).has_value());
}

TEST_CASE("basis limits") {
  CHECK_THROWS_AS(FockBasis(8, 8, 4, 100), DimensionOverflow);
  CHECK_THROWS_AS(FockBasis(2, 9, 4), DomainError);
  CHECK_THROWS_AS(FockBasis(0, 1, 4), DomainError);
}

TEST_CASE("two-site chain against the analytic ground energy") {
  const FockBasis basis(2, 2, 2);
  REQUIRE(basis.size() == 3);
  for (double u : {0.0, 0.5, 1.0, 4.0, 17.0})
    for (double j : {0.1, 1.0, 2.5}) {
      const SparseMatrix h = build_hamiltonian(basis, j, u, false);
      CHECK(h.rows() == 3);
      const double e = ground_energy(h).energy;
      CHECK(std::abs(e - two_site_ground(j, u)) <= 1e-12 * std::max(1.0, std::abs(e)));
    }
  CHECK(e0(2, 2, 2, 1.0, 4.0, false) == doctest::Approx(2 - 2 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(e0(2, 2, 2, 1.0, 0.0, false) == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("Hamiltonian structure") {
  const FockBasis basis(5, 5, 4);
  const SparseMatrix h = build_hamiltonian(basis, 0.7, 3.0, true);
  SUBCASE("exactly symmetric") {
    const SparseMatrix diff = h - SparseMatrix(h.transpose());
    for (Eigen::Index r = 0; r < diff.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(diff, r); it; ++it) CHECK(it.value() == 0.0);
  }
  SUBCASE("diagonal is the on-site interaction") {
    for (std::size_t a = 0; a < basis.size(); ++a) {
      double expected = 0;
      for (auto n : basis.state(a)) expected += 1.5 * n * (n - 1);
      CHECK(h.coeff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) == expected);
    }
  }
  SUBCASE("hopping conserves particle number and moves one boson along a bond") {
    for (Eigen::Index r = 0; r < h.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(h, r); it; ++it) {
        if (it.row() == it.col()) continue;
        const auto a = basis.state(static_cast<std::size_t>(it.row()));
        const auto b = basis.state(static_cast<std::size_t>(it.col()));
        int sum_a = 0, sum_b = 0, changed = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          sum_a += a[i];
          sum_b += b[i];
          changed += std::abs(int(a[i]) - int(b[i]));
        }
        CHECK(sum_a == sum_b);
        CHECK(changed == 2);
      }
  }
  CHECK_THROWS_AS(build_hamiltonian(basis, -1.0, 1.0, true), DomainError);
}

TEST_CASE("atomic limit") {
  const SparseMatrix h = build_hamiltonian(FockBasis(4, 4, 4), 0.0, 2.0, true);
  CHECK(h.nonZeros() < static_cast<Eigen::Index>(h.rows()));  // only doubly occupied states carry entries
  CHECK(ground_energy(h).energy == 0.0);
  for (int sites = 2; sites <= 6; ++sites) CHECK(charge_gap(sites, 4, 0.0, 3.7) == 3.7);
}

TEST_CASE("scalar matrix") {
  SparseMatrix h(1, 1);
  h.insert(0, 0) = -2.5;
  CHECK(ground_energy(h).energy == -2.5);
}

TEST_CASE("dense and Lanczos paths agree") {
  for (int sites : {4, 6}) {
    const SparseMatrix h = build_hamiltonian(FockBasis(sites, sites, 4), 1.0, 3.3, true);
    const GroundState dense = ground_energy(h, EigenMethod::Dense);
    const GroundState iterative = ground_energy(h, EigenMethod::Lanczos);
    CHECK(std::abs(dense.energy - iterative.energy) <= 1e-10);
    CHECK(iterative.residual <= 1e-10);
    CHECK(std::abs(std::abs(dense.vector.dot(iterative.vector)) - 1.0) <= 1e-9);
  }
}

TEST_CASE("Lanczos on a basis above the dense limit") {
  const SparseMatrix h = build_hamiltonian(FockBasis(8, 8, 4), 1.0, 2.0, true);
  REQUIRE(static_cast<std::size_t>(h.rows()) > kDenseLimit);
  const GroundState g = ground_energy(h);
  CHECK(g.residual <= 1e-10);
  const Eigen::VectorXd r = h * g.vector - g.energy * g.vector;
  CHECK(r.norm() / std::abs(g.energy) <= 1e-10);
}

TEST_CASE("periodic ring lies below the open chain without interaction") {
  for (int sites : {3, 4, 5, 6}) CHECK(e0(sites, sites, 4, 1.0, 0.0, true) <= e0(sites, sites, 4, 1.0, 0.0, false));
  // Tight-binding check: all bosons in the k = 0 orbital of the ring.
  CHECK(e0(5, 3, 3, 1.0, 0.0, true) == doctest::Approx(-2.0 * 3).epsilon(1e-12));
}

TEST_CASE("charge gap") {
  SUBCASE("strong-coupling Mott plateau") {
    const double g4 = charge_gap(6, 4, 1.0, 20.0) / 20.0;
    const double g5 = charge_gap(6, 5, 1.0, 20.0) / 20.0;
    CHECK(g4 >= 0.6);
    CHECK(g4 <= 1.0);
    CHECK(std::abs(g4 - g5) < 1e-8);
  }
  SUBCASE("superfluid gap closes with system size") {
    const double g4 = charge_gap(4, 4, 1.0, 1.0);
    const double g6 = charge_gap(6, 4, 1.0, 1.0);
    const double g8 = charge_gap(8, 4, 1.0, 1.0);
    CHECK(g6 < g4);
    CHECK(g8 < g6);
  }
}

TEST_CASE("n_max truncation") {
  for (int sites : {6, 8}) {
    double previous = 1e300;
    for (double ratio : {1.0, 5.0, 10.0, 20.0}) {
      const double shift = e0(sites, sites, 4, 1.0, ratio, true) - e0(sites, sites, 5, 1.0, ratio, true);
      INFO(sites << " sites, U/J = " << ratio);
      CHECK(shift >= -1e-12);  // a larger cap can only lower the energy
      CHECK(shift < previous);
      if (ratio >= 10.0) CHECK(shift < 1e-8);
      previous = shift;
    }
  }
}

TEST_CASE("ground-state diagnostics") {
  const EdResult r = ed_point(6, 4, 2.0);
  CHECK(r.gap >= -1e-10);
  CHECK(r.var_n >= 0.0);
  REQUIRE(r.corr.size() == 4);
  CHECK(r.corr[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t d = 1; d < r.corr.size(); ++d) CHECK(r.corr[d] < r.corr[d - 1]);
  const EdResult deep = ed_point(6, 4, 40.0);
  CHECK(deep.var_n < r.var_n);
}

TEST_CASE("critical ratio from scaled-gap crossings") {
  const std::vector<int> sizes{4, 6};
  const std::vector<double> ratios{1, 2, 3, 4, 5, 6, 7, 8};
  const CriticalEstimate est = estimate_critical_ratio(sizes, ratios);
  MESSAGE("(U/J)_c estimate " << est.mean << " +/- " << est.spread);
  CHECK(est.mean >= 2.5);
  CHECK(est.mean <= 5.5);
  CHECK(est.points.size() == 16);

  const CriticalEstimate serial = estimate_critical_ratio(sizes, ratios, 4, true, 1);
  CHECK(serial.mean == est.mean);

  const std::vector<int> one{4};
  CHECK_THROWS_AS(estimate_critical_ratio(one, ratios), NoCrossing);
  const std::vector<double> deep{15, 20, 25, 30, 40};
  CHECK_THROWS_AS(estimate_critical_ratio(sizes, deep), NoCrossing);
}
