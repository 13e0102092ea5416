#pragma once

// Exact diagonalisation of the 1D Bose-Hubbard chain
//   H = -J sum_i (b_i^+ b_{i+1} + h.c.) + (U/2) sum_i n_i (n_i - 1)
// in a fixed particle-number sector with a per-site occupation cap.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fiberpol {

inline constexpr std::size_t kDefaultBasisCap = 2'000'000;
inline constexpr std::size_t kDenseLimit = 2000;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// All occupation vectors of `sites` sites holding `bosons` bosons with at
/// most n_max per site, in lexicographic order (site 0 most significant).
class FockBasis {
 public:
  FockBasis(int sites, int bosons, int n_max, std::size_t cap = kDefaultBasisCap);

  int sites() const noexcept { return sites_; }
  int bosons() const noexcept { return bosons_; }
  int n_max() const noexcept { return n_max_; }
  std::size_t size() const noexcept { return codes_.size(); }

  std::span<const std::uint8_t> state(std::size_t index) const {
    return {occupations_.data() + index * static_cast<std::size_t>(sites_), static_cast<std::size_t>(sites_)};
  }
  std::optional<std::size_t> index_of(std::span<const std::uint8_t> occupation) const;

  /// Number of compositions of `bosons` into `sites` parts bounded by n_max,
  /// by inclusion-exclusion.
  static std::size_t bounded_compositions(int sites, int bosons, int n_max);

 private:
  std::uint64_t encode(std::span<const std::uint8_t> occupation) const;

  int sites_;
  int bosons_;
  int n_max_;
  std::vector<std::uint8_t> occupations_;
  std::vector<std::uint64_t> codes_;  // sorted, mirrors the state order
};

/// Hopping bonds (i, i+1); periodic chains add (L-1, 0) when L > 2.
std::vector<std::pair<int, int>> chain_bonds(int sites, bool periodic);

/// Real symmetric Hamiltonian in the basis order. Throws DomainError for
/// negative couplings.
SparseMatrix build_hamiltonian(const FockBasis& basis, double j, double u, bool periodic);

enum class EigenMethod { Auto, Dense, Lanczos };

struct LanczosOptions {
  int krylov_dim = 80;
  int max_restarts = 200;
  double tolerance = 1e-12;
};

struct GroundState {
  double energy = 0;
  Eigen::VectorXd vector;
  double residual = 0;  // ||H v - e v|| / max(|e|, 1)
};

/// Lowest eigenpair. Auto picks a dense solve up to kDenseLimit and restarted
/// Lanczos with full reorthogonalisation above it. Throws NoConvergence when
/// the residual target 1e-10 is missed.
GroundState ground_energy(const SparseMatrix& h, EigenMethod method = EigenMethod::Auto,
                          const LanczosOptions& options = {});

struct EdResult {
  int sites = 0;
  int bosons = 0;
  int n_max = 0;
  double u_over_j = 0;
  double e0 = 0;     // units of J
  double gap = 0;    // E(N+1) + E(N-1) - 2 E(N), units of J
  double var_n = 0;  // on-site number variance, averaged over sites
  std::vector<double> corr;  // <b_0^+ b_r>, r = 0 .. L/2
};

/// Charge gap at unit filling N = L.
double charge_gap(int sites, int n_max, double j, double u, bool periodic = true);

/// Ground-state diagnostics at unit filling in units of J (J = 1, U = u_over_j).
EdResult ed_point(int sites, int n_max, double u_over_j, bool periodic = true);

struct CriticalEstimate {
  double mean = 0;
  double spread = 0;               // half the range of the pairwise crossings
  std::vector<double> crossings;   // one per size pair that crosses
  std::vector<EdResult> points;    // every (L, U/J) evaluated, L outer
};

/// Crossings of the scaled gap L * gap(L, U/J) between every pair of sizes,
/// located by linear interpolation on the ratio grid. Throws NoCrossing when
/// fewer than two sizes are given or no pair crosses.
CriticalEstimate estimate_critical_ratio(std::span<const int> sizes, std::span<const double> ratios, int n_max = 4,
                                         bool periodic = true, unsigned threads = 0);

}  // namespace fiberpol
