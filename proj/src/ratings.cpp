#include "pairank/ratings.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

namespace pairank {

namespace {

constexpr std::array kAlgorithms{
    Algorithm::kCounting, Algorithm::kAverageWinRate, Algorithm::kElo,
    Algorithm::kBradleyTerry, Algorithm::kNewman, Algorithm::kEigen,
    Algorithm::kPageRank,
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::kInvalidParameter, message);
}

// Unordered pair {i, j} (i < j) that has at least one comparison.
struct Edge {
  ItemId i;
  ItemId j;
  double a_ij;     // i's wins over j, draws counted as half
  double a_ji;
  double ties;     // draws between i and j
  double decisive; // wins(i, j) + wins(j, i)
};

std::vector<Edge> edges_of(const WinMatrices& m) {
  const auto n = m.size();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double wij = m.wins(i, j);
      const double wji = m.wins(j, i);
      const double t = m.ties(i, j);
      if (wij + wji + t <= 0.0) continue;
      edges.push_back({static_cast<ItemId>(i), static_cast<ItemId>(j), wij + 0.5 * t,
                       wji + 0.5 * t, t, wij + wji});
    }
  }
  return edges;
}

double max_abs_change(std::span<const double> a, std::span<const double> b) {
  double change = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) change = std::max(change, std::abs(a[i] - b[i]));
  return change;
}

void floor_and_normalize_geometric(std::vector<double>& scores) {
  if (scores.empty()) return;
  // Product kept as mantissa * 2^exponent so it cannot overflow.
  double mantissa = 1.0;
  long exponent = 0;
  for (auto& s : scores) {
    s = std::max(s, kStrengthFloor);
    int e = 0;
    mantissa = std::frexp(mantissa * s, &e);
    exponent += e;
  }
  const double log_sum = std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
  const double scale = std::exp(-log_sum / static_cast<double>(scores.size()));
  for (auto& s : scores) s *= scale;
}


// Compressed adjacency: the opponents of item i sit at positions
// offsets[i] .. offsets[i + 1] of `other`, with i's credited wins `won` and
// losses `lost` against each.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<ItemId> other;
  std::vector<double> won;   // A(i, other)
  std::vector<double> lost;  // A(other, i)
  std::vector<double> wins;  // row sums of A
};

Adjacency neighbors_of(std::span<const Edge> edges, std::size_t n) {
  Adjacency adj;
  adj.offsets.assign(n + 1, 0);
  adj.wins.assign(n, 0.0);
  for (const auto& e : edges) {
    ++adj.offsets[e.i + 1];
    ++adj.offsets[e.j + 1];
  }
  for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] += adj.offsets[i];
  const auto size = adj.offsets[n];
  adj.other.resize(size);
  adj.won.resize(size);
  adj.lost.resize(size);
  auto fill = adj.offsets;
  auto put = [&](ItemId from, ItemId to, double won, double lost) {
    const auto k = fill[from]++;
    adj.other[k] = to;
    adj.won[k] = won;
    adj.lost[k] = lost;
    adj.wins[from] += won;
  };
  for (const auto& e : edges) {
    put(e.i, e.j, e.a_ij, e.a_ji);
    put(e.j, e.i, e.a_ji, e.a_ij);
  }
  return adj;
}

void strong_connect(std::size_t v, const Adjacency& adj,
                    std::vector<int>& order, std::vector<int>& low, std::vector<char>& on_stack,
                    std::vector<ItemId>& stack, int& counter, std::size_t& components) {
  // Iterative Tarjan to stay safe on long chains.
  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  std::vector<Frame> frames{{v, adj.offsets[v]}};
  order[v] = low[v] = counter++;
  stack.push_back(static_cast<ItemId>(v));
  on_stack[v] = 1;
  while (!frames.empty()) {
    auto& frame = frames.back();
    if (frame.next < adj.offsets[frame.v + 1]) {
      const auto k = frame.next++;
      if (adj.won[k] <= 0.0) continue;
      const auto w = adj.other[k];
      if (order[w] < 0) {
        order[w] = low[w] = counter++;
        stack.push_back(w);
        on_stack[w] = 1;
        frames.push_back({w, adj.offsets[w]});
      } else if (on_stack[w]) {
        low[frame.v] = std::min(low[frame.v], order[w]);
      }
      continue;
    }
    const auto u = frame.v;
    if (low[u] == order[u]) {
      ++components;
      ItemId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
      } while (w != u);
    }
    frames.pop_back();
    if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[u]);
  }
}

// True when every weakly connected group of the comparison graph is also
// strongly connected along "beat" edges, i.e. the likelihood has a finite
// maximizer.
bool identifiable(const Adjacency& adj) {
  const auto n = adj.wins.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (auto k = adj.offsets[i]; k < adj.offsets[i + 1]; ++k) {
      parent[root(i)] = root(adj.other[k]);
    }
  }
  std::size_t groups = 0;
  for (std::size_t i = 0; i < n; ++i) groups += root(i) == i ? 1 : 0;

  std::vector<int> order(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<ItemId> stack;
  int counter = 0;
  std::size_t components = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (order[v] < 0) strong_connect(v, adj, order, low, on_stack, stack, counter, components);
  }
  return components == groups;
}

// Sum of games(i, j) / (pi_i + pi_j + nu * sqrt(pi_i * pi_j)) * (1 + half tie
// term / pi_i): the classic MM denominator, needed only by undefeated items.
double classic_denominator(const Adjacency& adj, std::size_t i, double nu,
                           std::span<const double> pi, std::span<const double> root) {
  double classic = 0.0;
  const double pi_i = pi[i];
  for (auto k = adj.offsets[i]; k < adj.offsets[i + 1]; ++k) {
    const auto j = adj.other[k];
    const double half_tie = 0.5 * nu * root[i] * root[j];
    const double inv = 1.0 / (pi_i + pi[j] + 2.0 * half_tie);
    classic += (adj.won[k] + adj.lost[k]) * (1.0 + half_tie / pi_i) * inv;
  }
  return classic;
}

double next_strength(const Adjacency& adj, std::size_t i, double num, double den, double nu,
                     std::span<const double> pi, std::span<const double> root) {
  if (den > 0.0) return num / den;
  if (adj.wins[i] > 0.0) {
    const double classic = classic_denominator(adj, i, nu, pi, root);
    if (classic > 0.0) return adj.wins[i] / classic;
  }
  return pi[i];
}

void bradley_terry_sweep(const Adjacency& adj, std::vector<double>& pi,
                         std::vector<double>& root) {
  const ItemId* other = adj.other.data();
  const double* won = adj.won.data();
  const double* lost = adj.lost.data();
  for (std::size_t i = 0; i < pi.size(); ++i) {
    double num = 0.0, den = 0.0;
    const double pi_i = pi[i];
    for (auto k = adj.offsets[i]; k < adj.offsets[i + 1]; ++k) {
      const double pi_j = pi[other[k]];
      const double inv = 1.0 / (pi_i + pi_j);
      num += won[k] * pi_j * inv;
      den += lost[k] * inv;
    }
    pi[i] = std::max(next_strength(adj, i, num, den, 0.0, pi, root), kStrengthFloor);
  }
}

// Expects root[i] == sqrt(pi[i]) on entry and keeps it so.
void newman_sweep(const Adjacency& adj, double nu, std::vector<double>& pi,
                  std::vector<double>& root) {
  const ItemId* other = adj.other.data();
  const double* won = adj.won.data();
  const double* lost = adj.lost.data();
  for (std::size_t i = 0; i < pi.size(); ++i) {
    double num = 0.0, den = 0.0;
    const double pi_i = pi[i];
    const double inv_pi_i = 1.0 / pi_i;
    const double half_nu_root_i = 0.5 * nu * root[i];
    for (auto k = adj.offsets[i]; k < adj.offsets[i + 1]; ++k) {
      const auto j = other[k];
      const double pi_j = pi[j];
      const double half_tie = half_nu_root_i * root[j];
      const double inv = 1.0 / (pi_i + pi_j + 2.0 * half_tie);
      num += won[k] * (pi_j + half_tie) * inv;
      den += lost[k] * (1.0 + half_tie * inv_pi_i) * inv;
    }
    pi[i] = std::max(next_strength(adj, i, num, den, nu, pi, root), kStrengthFloor);
    root[i] = std::sqrt(pi[i]);
  }
}

// Bradley-Terry (with_ties = false, nu pinned at 0) and the Newman tie model.
// Strengths are updated in place item by item, then renormalized; nu is
// refit after every sweep.
Fit newman_fit_impl(const WinMatrices& m, const IterParams& params, bool with_ties) {
  params.validate();
  const auto n = m.size();
  const auto edges = edges_of(m);
  const auto adj = neighbors_of(edges, n);

  Fit out;
  out.scores.assign(n, 1.0);
  auto& pi = out.scores;
  std::vector<double> previous(n);
  std::vector<double> root(n, 1.0);
  double nu = with_ties ? 1.0 : 0.0;
  double change = 0.0;
  while (n > 0 && out.iterations < params.max_iterations) {
    previous = pi;
    if (with_ties) {
      newman_sweep(adj, nu, pi, root);
    } else {
      bradley_terry_sweep(adj, pi, root);
    }
    floor_and_normalize_geometric(pi);

    double next_nu = nu;
    if (with_ties) {
      double tie_mass = 0.0;
      double decisive_mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(pi[i]);
      for (const auto& e : edges) {
        const double root_ij = root[e.i] * root[e.j];
        const double inv = 1.0 / (pi[e.i] + pi[e.j] + nu * root_ij);
        tie_mass += e.ties * (pi[e.i] + pi[e.j]) * inv;
        decisive_mass += e.decisive * root_ij * inv;
      }
      if (decisive_mass > 0.0) next_nu = tie_mass / decisive_mass;
    }

    change = std::max(max_abs_change(pi, previous), std::abs(next_nu - nu));
    nu = next_nu;
    ++out.iterations;
    if (change < params.tolerance) break;
  }
  if (with_ties) out.tie_strength = nu;
  out.converged = change < params.tolerance && identifiable(adj);
  return out;
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kCounting: return "counting";
    case Algorithm::kAverageWinRate: return "average-win-rate";
    case Algorithm::kElo: return "elo";
    case Algorithm::kBradleyTerry: return "bradley-terry";
    case Algorithm::kNewman: return "newman";
    case Algorithm::kEigen: return "eigen";
    case Algorithm::kPageRank: return "pagerank";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto algorithm : kAlgorithms) {
    if (algorithm_name(algorithm) == name) return algorithm;
  }
  return std::nullopt;
}

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }

bool is_iterative(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBradleyTerry:
    case Algorithm::kNewman:
    case Algorithm::kEigen:
    case Algorithm::kPageRank:
      return true;
    default:
      return false;
  }
}

void EloParams::validate() const {
  require(std::isfinite(initial), "elo initial rating must be finite");
  require(std::isfinite(k) && k > 0.0, "elo k must be > 0");
  require(std::isfinite(scale) && scale > 0.0, "elo scale must be > 0");
  require(std::isfinite(base) && base > 1.0, "elo base must be > 1");
}

void IterParams::validate() const {
  require(std::isfinite(tolerance) && tolerance > 0.0, "tolerance must be > 0");
  require(max_iterations >= 1, "max_iterations must be >= 1");
  require(damping > 0.0 && damping < 1.0, "damping must lie in (0, 1)");
}

Options default_options(Algorithm algorithm) {
  Options options;
  if (algorithm == Algorithm::kPageRank) options.iter.tolerance = kPageRankTolerance;
  return options;
}

Fit counting_fit(const WinMatrices& m) {
  const auto n = m.size();
  Fit out;
  out.scores = std::vector<double>(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += m.wins(i, j) + 0.5 * m.ties(i, j);
    out.scores[i] = total;
  }
  return out;
}

Fit average_win_rate_fit(const WinMatrices& m) {
  const auto n = m.size();
  Fit out;
  out.scores = std::vector<double>(n, 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    double rate_sum = 0.0;
    std::size_t opponents = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double games = m.wins(i, j) + m.wins(j, i) + m.ties(i, j);
      if (games <= 0.0) continue;
      rate_sum += (m.wins(i, j) + 0.5 * m.ties(i, j)) / games;
      ++opponents;
    }
    if (opponents > 0) out.scores[i] = rate_sum / static_cast<double>(opponents);
  }
  return out;
}

Fit elo_fit(std::span<const IndexedRecord> records, std::size_t n, const EloParams& params) {
  params.validate();
  Fit out;
  out.scores = std::vector<double>(n, params.initial);
  auto& rating = out.scores;
  const double log_base = std::log(params.base);
  for (const auto& r : records) {
    if (r.left >= n || r.right >= n) {
      throw Error(ErrorKind::kUnknownItem, "item id out of range");
    }
    if (r.left == r.right) continue;
    const double expected =
        1.0 / (1.0 + std::exp(log_base * (rating[r.right] - rating[r.left]) / params.scale));
    const double actual = r.winner == Winner::kLeft ? 1.0 : r.winner == Winner::kRight ? 0.0 : 0.5;
    const double delta = r.weight * params.k * (actual - expected);
    rating[r.left] += delta;
    rating[r.right] -= delta;
  }
  return out;
}

bool strengths_identifiable(const WinMatrices& m) {
  return identifiable(neighbors_of(edges_of(m), m.size()));
}

Fit bradley_terry_fit(const WinMatrices& m, const IterParams& params) {
  return newman_fit_impl(m, params, false);
}

Fit newman_fit(const WinMatrices& m, const IterParams& params) {
  return newman_fit_impl(m, params, true);
}

Fit eigen_fit(const WinMatrices& m, const IterParams& params) {
  params.validate();
  const auto n = m.size();
  const auto edges = edges_of(m);
  Fit out;
  out.scores = std::vector<double>(n, n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
  double total = 0.0;
  for (const auto& e : edges) total += e.a_ij + e.a_ji;
  if (total <= 0.0) return out;

  // Power iteration on A + shift * I: same eigenvectors as A, but the
  // dominant eigenvalue is strictly separated even for periodic A.
  const double shift = total / static_cast<double>(n);
  auto& x = out.scores;
  std::vector<double> y(n);
  double change = 0.0;
  while (out.iterations < params.max_iterations) {
    for (std::size_t i = 0; i < n; ++i) y[i] = shift * x[i];
    for (const auto& e : edges) {
      y[e.i] += e.a_ij * x[e.j];
      y[e.j] += e.a_ji * x[e.i];
    }
    const double norm = std::accumulate(y.begin(), y.end(), 0.0);
    for (auto& v : y) v /= norm;
    change = max_abs_change(y, x);
    x.swap(y);
    ++out.iterations;
    if (change < params.tolerance) break;
  }
  out.converged = change < params.tolerance;
  return out;
}

Fit pagerank_fit(const WinMatrices& m, const IterParams& params) {
  params.validate();
  const auto n = m.size();
  const auto edges = edges_of(m);
  Fit out;
  out.scores = std::vector<double>(n, n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
  if (n == 0) return out;

  // A loss by j to i is a link j -> i of weight A(i, j).
  std::vector<double> out_weight(n, 0.0);
  for (const auto& e : edges) {
    out_weight[e.j] += e.a_ij;
    out_weight[e.i] += e.a_ji;
  }
  const double d = params.damping;
  const double teleport = (1.0 - d) / static_cast<double>(n);
  auto& p = out.scores;
  std::vector<double> next(n);
  double change = 0.0;
  while (out.iterations < params.max_iterations) {
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (out_weight[j] <= 0.0) dangling += p[j];
    }
    std::ranges::fill(next, teleport + d * dangling / static_cast<double>(n));
    for (const auto& e : edges) {
      if (e.a_ij > 0.0) next[e.i] += d * e.a_ij * p[e.j] / out_weight[e.j];
      if (e.a_ji > 0.0) next[e.j] += d * e.a_ji * p[e.i] / out_weight[e.i];
    }
    change = max_abs_change(next, p);
    p.swap(next);
    ++out.iterations;
    if (change < params.tolerance) break;
  }
  out.converged = change < params.tolerance;
  return out;
}

Fit fit(Algorithm algorithm, std::span<const IndexedRecord> records, std::size_t n,
        const Options& options) {
  if (algorithm == Algorithm::kElo) return elo_fit(records, n, options.elo);
  const auto matrices = win_matrices(records, n);
  switch (algorithm) {
    case Algorithm::kCounting: return counting_fit(matrices);
    case Algorithm::kAverageWinRate: return average_win_rate_fit(matrices);
    case Algorithm::kBradleyTerry: return bradley_terry_fit(matrices, options.iter);
    case Algorithm::kNewman: return newman_fit(matrices, options.iter);
    case Algorithm::kEigen: return eigen_fit(matrices, options.iter);
    case Algorithm::kPageRank: return pagerank_fit(matrices, options.iter);
    case Algorithm::kElo: break;
  }
  return {};
}

RatingResult rate(Algorithm algorithm, std::span<const ComparisonRecord> records,
                  const Options& options, IndexPtr index) {
  std::vector<IndexedRecord> indexed;
  if (index) {
    indexed = index_records(records, *index);
  } else {
    index = std::make_shared<const Index>(Index::build(records, indexed));
  }
  auto result = fit(algorithm, indexed, index->size(), options);
  return {std::move(index), std::move(result.scores), algorithm, result.iterations,
          result.converged, result.tie_strength};
}

RatingResult counting(std::span<const ComparisonRecord> records, IndexPtr index) {
  return rate(Algorithm::kCounting, records, {}, std::move(index));
}

RatingResult average_win_rate(std::span<const ComparisonRecord> records, IndexPtr index) {
  return rate(Algorithm::kAverageWinRate, records, {}, std::move(index));
}

RatingResult elo(std::span<const ComparisonRecord> records, IndexPtr index,
                 const EloParams& params) {
  Options options;
  options.elo = params;
  return rate(Algorithm::kElo, records, options, std::move(index));
}

RatingResult bradley_terry(std::span<const ComparisonRecord> records, IndexPtr index,
                           const IterParams& params) {
  Options options;
  options.iter = params;
  return rate(Algorithm::kBradleyTerry, records, options, std::move(index));
}

RatingResult newman(std::span<const ComparisonRecord> records, IndexPtr index,
                    const IterParams& params) {
  Options options;
  options.iter = params;
  return rate(Algorithm::kNewman, records, options, std::move(index));
}

RatingResult eigen(std::span<const ComparisonRecord> records, IndexPtr index,
                   const IterParams& params) {
  Options options;
  options.iter = params;
  return rate(Algorithm::kEigen, records, options, std::move(index));
}

RatingResult pagerank(std::span<const ComparisonRecord> records, IndexPtr index,
                      const IterParams& params) {
  Options options;
  options.iter = params;
  return rate(Algorithm::kPageRank, records, options, std::move(index));
}

std::vector<AlgorithmInfo> list_algorithms() {
  const EloParams elo;
  std::vector<AlgorithmInfo> out;
  for (auto algorithm : kAlgorithms) {
    const auto defaults = default_options(algorithm);
    AlgorithmInfo info{algorithm, std::string(algorithm_name(algorithm)), is_iterative(algorithm),
                       {}};
    if (algorithm == Algorithm::kElo) {
      info.parameters = {
          {"initial", elo.initial, "starting rating of every item"},
          {"k", elo.k, "update step size"},
          {"scale", elo.scale, "logistic scale of rating differences"},
          {"base", elo.base, "logistic base"},
      };
    } else if (info.iterative) {
      info.parameters = {
          {"tolerance", defaults.iter.tolerance, "max absolute score change per sweep"},
          {"max_iterations", static_cast<double>(defaults.iter.max_iterations),
           "sweep limit"},
      };
      if (algorithm == Algorithm::kPageRank) {
        info.parameters.push_back({"damping", defaults.iter.damping, "damping factor"});
      }
    }
    out.push_back(std::move(info));
  }
  return out;
}

}  // namespace pairank
