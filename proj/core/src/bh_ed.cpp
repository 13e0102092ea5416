#include "fiberpol/bh_ed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "fiberpol/errors.hpp"

namespace fiberpol {

namespace {

constexpr double kResidualTarget = 1e-10;

std::int64_t binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t out = 1;
  for (std::int64_t i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
  return out;
}

void enumerate(int site, int remaining, int sites, int n_max, std::vector<std::uint8_t>& current,
               std::vector<std::uint8_t>& out) {
  if (site == sites) {
    if (remaining == 0) out.insert(out.end(), current.begin(), current.end());
    return;
  }
  const int left_after = sites - site - 1;
  for (int n = 0; n <= std::min(n_max, remaining); ++n) {
    if (remaining - n > left_after * n_max) continue;
    current[static_cast<std::size_t>(site)] = static_cast<std::uint8_t>(n);
    enumerate(site + 1, remaining - n, sites, n_max, current, out);
  }
}

double residual_norm(const SparseMatrix& h, const Eigen::VectorXd& v, double e) {
  const Eigen::VectorXd r = h * v - e * v;
  return r.norm() / std::max(std::abs(e), 1.0);
}

bool is_diagonal(const SparseMatrix& h) {
  for (Eigen::Index row = 0; row < h.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(h, row); it; ++it)
      if (it.col() != row && it.value() != 0.0) return false;
  return true;
}

GroundState diagonal_ground(const SparseMatrix& h) {
  const Eigen::VectorXd diag = h.diagonal();
  Eigen::Index best = 0;
  diag.minCoeff(&best);
  GroundState g;
  g.energy = diag[best];
  g.vector = Eigen::VectorXd::Unit(h.rows(), best);
  g.residual = 0.0;
  return g;
}

GroundState dense_ground(const SparseMatrix& h) {
  const Eigen::MatrixXd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NoConvergence("dense eigensolver failed");
  GroundState g;
  g.energy = solver.eigenvalues()[0];
  g.vector = solver.eigenvectors().col(0);
  g.residual = residual_norm(h, g.vector, g.energy);
  return g;
}

GroundState lanczos_ground(const SparseMatrix& h, const LanczosOptions& opt) {
  const Eigen::Index n = h.rows();
  const Eigen::Index m = std::clamp<Eigen::Index>(opt.krylov_dim, 2, n);

  // Positive start vector: the ground state of the hopping problem is
  // non-negative in the Fock basis, so the overlap cannot vanish.
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1));
  start.normalize();

  Eigen::MatrixXd basis(n, m);
  GroundState best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = start;
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      Eigen::VectorXd w = h * basis.col(k);
      alpha.push_back(basis.col(k).dot(w));
      // Full reorthogonalisation, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd overlap = basis.leftCols(k + 1).transpose() * w;
        w.noalias() -= basis.leftCols(k + 1) * overlap;
      }
      const double b = w.norm();
      if (k + 1 == m || b <= 1e-13 * std::max(std::abs(alpha.back()), 1.0)) {
        ++k;
        break;
      }
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index i = 0; i + 1 < k; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub);
    if (tri.info() != Eigen::Success) throw NoConvergence("tridiagonal eigensolver failed");

    GroundState g;
    g.energy = tri.eigenvalues()[0];
    g.vector = basis.leftCols(k) * tri.eigenvectors().col(0);
    g.vector.normalize();
    g.residual = residual_norm(h, g.vector, g.energy);
    if (g.residual < best.residual) best = g;
    if (g.residual <= opt.tolerance || k < m) break;
    start = g.vector;
  }
  return best;
}

}  // namespace

FockBasis::FockBasis(int sites, int bosons, int n_max, std::size_t cap)
    : sites_(sites), bosons_(bosons), n_max_(n_max) {
  if (sites < 1 || bosons < 0 || n_max < 1 || n_max > 255) throw DomainError("invalid Fock basis parameters");
  if (static_cast<double>(sites) * std::log2(static_cast<double>(n_max + 1)) >= 63.0)
    throw DimensionOverflow("occupation codes do not fit in 64 bits");
  const std::size_t dim = bounded_compositions(sites, bosons, n_max);
  if (dim > cap) throw DimensionOverflow("basis dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
  if (dim == 0) throw DomainError("no states: bosons exceed sites * n_max");

  occupations_.reserve(dim * static_cast<std::size_t>(sites));
  std::vector<std::uint8_t> current(static_cast<std::size_t>(sites), 0);
  enumerate(0, bosons, sites, n_max, current, occupations_);
  codes_.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) codes_.push_back(encode(state(i)));
}

std::uint64_t FockBasis::encode(std::span<const std::uint8_t> occupation) const {
  std::uint64_t code = 0;
  const auto base = static_cast<std::uint64_t>(n_max_ + 1);
  for (std::uint8_t n : occupation) code = code * base + n;
  return code;
}

std::optional<std::size_t> FockBasis::index_of(std::span<const std::uint8_t> occupation) const {
  if (occupation.size() != static_cast<std::size_t>(sites_)) return std::nullopt;
  const std::uint64_t code = encode(occupation);
  const auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::size_t FockBasis::bounded_compositions(int sites, int bosons, int n_max) {
  std::int64_t total = 0;
  for (std::int64_t k = 0; k <= sites; ++k) {
    const std::int64_t rest = bosons - k * (n_max + 1);
    if (rest < 0) break;
    const std::int64_t term = binomial(sites, k) * binomial(rest + sites - 1, sites - 1);
    total += (k % 2 == 0) ? term : -term;
  }
  return static_cast<std::size_t>(total);
}

std::vector<std::pair<int, int>> chain_bonds(int sites, bool periodic) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < sites; ++i) bonds.emplace_back(i, i + 1);
  if (periodic && sites > 2) bonds.emplace_back(sites - 1, 0);
  return bonds;
}

SparseMatrix build_hamiltonian(const FockBasis& basis, double j, double u, bool periodic) {
  if (!(j >= 0) || !(u >= 0)) throw DomainError("J and U must be non-negative");
  const auto bonds = chain_bonds(basis.sites(), periodic);
  const auto dim = static_cast<Eigen::Index>(basis.size());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(basis.size() * (1 + 2 * bonds.size()));
  std::vector<std::uint8_t> moved(static_cast<std::size_t>(basis.sites()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const auto occ = basis.state(a);
    double onsite = 0;
    for (std::uint8_t n : occ) onsite += 0.5 * u * n * (n - 1);
    if (onsite != 0.0) entries.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), onsite);
    if (j == 0.0) continue;

    for (const auto& [p, q] : bonds) {
      for (const auto& [to, from] : {std::pair{p, q}, std::pair{q, p}}) {
        const int n_from = occ[static_cast<std::size_t>(from)];
        const int n_to = occ[static_cast<std::size_t>(to)];
        if (n_from == 0 || n_to == basis.n_max()) continue;
        std::copy(occ.begin(), occ.end(), moved.begin());
        --moved[static_cast<std::size_t>(from)];
        ++moved[static_cast<std::size_t>(to)];
        const auto b = basis.index_of(moved);
        // b_to^+ b_from |a> = sqrt(n_from (n_to + 1)) |b>; the integer product
        // is symmetric under a <-> b, so H is exactly symmetric.
        const double amp = -j * std::sqrt(static_cast<double>(n_from * (n_to + 1)));
        entries.emplace_back(static_cast<Eigen::Index>(*b), static_cast<Eigen::Index>(a), amp);
      }
    }
  }
  SparseMatrix h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  h.makeCompressed();
  return h;
}

GroundState ground_energy(const SparseMatrix& h, EigenMethod method, const LanczosOptions& options) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DomainError("ground_energy needs a non-empty square matrix");
  if (is_diagonal(h)) return diagonal_ground(h);
  if (method == EigenMethod::Auto)
    method = static_cast<std::size_t>(h.rows()) > kDenseLimit ? EigenMethod::Lanczos : EigenMethod::Dense;
  GroundState g = method == EigenMethod::Dense ? dense_ground(h) : lanczos_ground(h, options);
  if (!(g.residual <= kResidualTarget))
    throw NoConvergence("ground-state residual " + std::to_string(g.residual) + " above 1e-10");
  return g;
}

double charge_gap(int sites, int n_max, double j, double u, bool periodic) {
  auto energy = [&](int bosons) {
    const FockBasis basis(sites, bosons, n_max);
    return ground_energy(build_hamiltonian(basis, j, u, periodic)).energy;
  };
  const double gap = energy(sites + 1) + energy(sites - 1) - 2.0 * energy(sites);
  return gap;
}

EdResult ed_point(int sites, int n_max, double u_over_j, bool periodic) {
  const FockBasis basis(sites, sites, n_max);
  const GroundState g = ground_energy(build_hamiltonian(basis, 1.0, u_over_j, periodic));

  EdResult r;
  r.sites = sites;
  r.bosons = sites;
  r.n_max = n_max;
  r.u_over_j = u_over_j;
  r.e0 = g.energy;
  r.gap = charge_gap(sites, n_max, 1.0, u_over_j, periodic);

  const auto n_sites = static_cast<std::size_t>(sites);
  std::vector<double> mean(n_sites, 0.0);
  std::vector<double> square(n_sites, 0.0);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const double w = g.vector[static_cast<Eigen::Index>(a)] * g.vector[static_cast<Eigen::Index>(a)];
    const auto occ = basis.state(a);
    for (std::size_t i = 0; i < n_sites; ++i) {
      mean[i] += w * occ[i];
      square[i] += w * occ[i] * occ[i];
    }
  }
  for (std::size_t i = 0; i < n_sites; ++i) r.var_n += (square[i] - mean[i] * mean[i]) / static_cast<double>(n_sites);

  r.corr.assign(n_sites / 2 + 1, 0.0);
  r.corr[0] = mean[0];
  std::vector<std::uint8_t> moved(n_sites);
  for (std::size_t dist = 1; dist < r.corr.size(); ++dist) {
    double c = 0;
    for (std::size_t a = 0; a < basis.size(); ++a) {
      const auto occ = basis.state(a);
      if (occ[dist] == 0 || occ[0] == n_max) continue;
      std::copy(occ.begin(), occ.end(), moved.begin());
      --moved[dist];
      ++moved[0];
      const auto b = basis.index_of(moved);
      c += g.vector[static_cast<Eigen::Index>(*b)] * g.vector[static_cast<Eigen::Index>(a)] *
           std::sqrt(static_cast<double>(occ[dist] * (occ[0] + 1)));
    }
    r.corr[dist] = c;
  }
  return r;
}

CriticalEstimate estimate_critical_ratio(std::span<const int> sizes, std::span<const double> ratios, int n_max,
                                         bool periodic, unsigned threads) {
  if (sizes.size() < 2) throw NoCrossing("need at least two system sizes");
  if (ratios.size() < 2) throw NoCrossing("need at least two U/J values");
  if (!std::is_sorted(ratios.begin(), ratios.end())) throw DomainError("ratios must be ascending");

  CriticalEstimate est;
  est.points.resize(sizes.size() * ratios.size());
  const std::size_t total = est.points.size();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  auto work = [&](unsigned worker) {
    for (std::size_t k = worker; k < total; k += threads)
      est.points[k] = ed_point(sizes[k / ratios.size()], n_max, ratios[k % ratios.size()], periodic);
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
  }

  auto scaled = [&](std::size_t size_index, std::size_t ratio_index) {
    const EdResult& p = est.points[size_index * ratios.size() + ratio_index];
    return static_cast<double>(p.sites) * p.gap;
  };
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    for (std::size_t b = a + 1; b < sizes.size(); ++b) {
      // Last sign change on the grid: beyond it the larger chain stays above.
      std::optional<double> crossing;
      for (std::size_t r = 0; r + 1 < ratios.size(); ++r) {
        const double d0 = scaled(a, r) - scaled(b, r);
        const double d1 = scaled(a, r + 1) - scaled(b, r + 1);
        if (d0 == 0.0) crossing = ratios[r];
        else if ((d0 < 0) != (d1 < 0) && d1 != 0.0)
          crossing = ratios[r] + d0 / (d0 - d1) * (ratios[r + 1] - ratios[r]);
      }
      if (crossing) est.crossings.push_back(*crossing);
    }
  }
  if (est.crossings.empty()) throw NoCrossing("scaled gaps do not cross over the given U/J range");
  double lo = est.crossings.front();
  double hi = lo;
  double sum = 0;
  for (double c : est.crossings) {
    sum += c;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  est.mean = sum / static_cast<double>(est.crossings.size());
  est.spread = 0.5 * (hi - lo);
  return est;
}

}  // namespace fiberpol
