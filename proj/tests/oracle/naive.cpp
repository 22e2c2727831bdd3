#include "naive.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace pairank::naive {

namespace {

constexpr double kFloor = 1e-9;

// Item names in id order: the supplied index, or first appearance.
std::vector<std::string> item_names(std::span<const ComparisonRecord> records,
                                    const IndexPtr& index) {
  std::vector<std::string> names;
  if (index) {
    for (const auto& name : index->names()) names.push_back(name);
    for (const auto& r : records) {
      bool left = false, right = false;
      for (const auto& name : names) {
        left = left || name == r.left;
        right = right || name == r.right;
      }
      if (!left) throw Error(ErrorKind::kUnknownItem, "unknown item '" + r.left + "'");
      if (!right) throw Error(ErrorKind::kUnknownItem, "unknown item '" + r.right + "'");
    }
    return names;
  }
  std::map<std::string, bool> seen;
  for (const auto& r : records) {
    for (const auto* name : {&r.left, &r.right}) {
      if (!seen[*name]) {
        seen[*name] = true;
        names.push_back(*name);
      }
    }
  }
  return names;
}

void check_weights(std::span<const ComparisonRecord> records) {
  for (const auto& r : records) {
    if (!(r.weight >= 0.0) || std::isinf(r.weight)) {
      throw Error(ErrorKind::kIllegalWeight, "illegal weight");
    }
  }
}

RatingResult finish(Algorithm algorithm, const std::vector<std::string>& names,
                    const std::map<std::string, double>& scores, std::size_t iterations,
                    bool converged) {
  RatingResult out;
  out.index = std::make_shared<const Index>(Index::from_names(names));
  for (const auto& name : names) out.scores.push_back(scores.at(name));
  out.algorithm = algorithm;
  out.iterations = iterations;
  out.converged = converged;
  return out;
}

// Dense matrix of half-win-credited outcomes: a[i][j] = wins of i over j + ties / 2.
std::vector<std::vector<double>> credit_matrix(std::span<const ComparisonRecord> records,
                                               const std::vector<std::string>& names) {
  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < names.size(); ++i) id[names[i]] = i;
  std::vector<std::vector<double>> a(names.size(), std::vector<double>(names.size(), 0.0));
  for (const auto& r : records) {
    if (r.left == r.right) continue;
    const auto l = id.at(r.left);
    const auto w = id.at(r.right);
    if (r.winner == Winner::kLeft) {
      a[l][w] += r.weight;
    } else if (r.winner == Winner::kRight) {
      a[w][l] += r.weight;
    } else {
      a[l][w] += r.weight / 2;
      a[w][l] += r.weight / 2;
    }
  }
  return a;
}

// Finite MLE exists iff every item reaches, through "beat or drew" links,
// every item it is connected to at all. Floyd-Warshall closure.
bool identifiable(const std::vector<std::vector<double>>& a) {
  const auto n = a.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = linked[i][i] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j] > 0) reach[i][j] = true;
      if (a[i][j] > 0 || a[j][i] > 0) linked[i][j] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
        if (linked[i][k] && linked[k][j]) linked[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (linked[i][j] && !reach[i][j]) return false;
    }
  }
  return true;
}

void normalize_geometric(std::map<std::string, double>& pi) {
  if (pi.empty()) return;
  double product_log = 0;
  for (auto& [name, value] : pi) {
    if (value < kFloor) value = kFloor;
    product_log += std::log(value);
  }
  const double gm = std::exp(product_log / pi.size());
  for (auto& [name, value] : pi) value /= gm;
}

double credit(const ComparisonRecord& r, bool for_left) {
  if (r.winner == Winner::kDraw) return 0.5;
  return (r.winner == Winner::kLeft) == for_left ? 1.0 : 0.0;
}

// Shared skeleton of the Bradley-Terry and Newman sweeps over raw records.
RatingResult strength_fit(Algorithm algorithm, std::span<const ComparisonRecord> records,
                          IndexPtr index, const IterParams& params, bool with_ties) {
  params.validate();
  check_weights(records);
  const auto names = item_names(records, index);
  std::map<std::string, double> pi;
  for (const auto& name : names) pi[name] = 1.0;
  std::map<std::string, double> won;
  for (const auto& r : records) {
    if (r.left == r.right) continue;
    won[r.left] += r.weight * credit(r, true);
    won[r.right] += r.weight * credit(r, false);
  }

  double nu = with_ties ? 1.0 : 0.0;
  double change = 0.0;
  std::size_t iterations = 0;
  while (!names.empty() && iterations < params.max_iterations) {
    // Items are refreshed one at a time; later items see earlier updates.
    std::map<std::string, double> next = pi;
    for (const auto& me : names) {
      double num = 0, den = 0, all = 0;
      for (const auto& r : records) {
        if (r.left == r.right || (r.left != me && r.right != me)) continue;
        const bool left = r.left == me;
        const double mine = next[me];
        const double theirs = next[left ? r.right : r.left];
        const double tie_term = nu * std::sqrt(mine * theirs);
        const double d = mine + theirs + tie_term;
        const double my_credit = r.weight * credit(r, left);
        const double their_credit = r.weight * credit(r, !left);
        num += my_credit * (theirs + tie_term / 2) / d;
        den += their_credit * (1 + tie_term / 2 / mine) / d;
        all += r.weight * (1 + tie_term / 2 / mine) / d;
      }
      double updated = next[me];
      if (den > 0) {
        updated = num / den;
      } else if (won[me] > 0 && all > 0) {
        updated = won[me] / all;
      }
      next[me] = std::max(updated, kFloor);
    }
    normalize_geometric(next);

    double next_nu = nu;
    if (with_ties) {
      double ties = 0, decisive = 0;
      for (const auto& r : records) {
        if (r.left == r.right) continue;
        const double root = std::sqrt(next[r.left] * next[r.right]);
        const double d = next[r.left] + next[r.right] + nu * root;
        if (r.winner == Winner::kDraw) {
          ties += r.weight * (next[r.left] + next[r.right]) / d;
        } else {
          decisive += r.weight * root / d;
        }
      }
      if (decisive > 0) next_nu = ties / decisive;
    }

    change = std::abs(next_nu - nu);
    for (const auto& name : names) change = std::max(change, std::abs(next[name] - pi[name]));
    pi = next;
    nu = next_nu;
    ++iterations;
    if (change < params.tolerance) break;
  }
  const bool converged =
      change < params.tolerance && identifiable(credit_matrix(records, names));
  auto out = finish(algorithm, names, pi, iterations, converged);
  if (with_ties) out.tie_strength = nu;
  return out;
}

}  // namespace

RatingResult counting(std::span<const ComparisonRecord> records, IndexPtr index) {
  check_weights(records);
  const auto names = item_names(records, index);
  std::map<std::string, double> score;
  for (const auto& name : names) score[name] = 0;
  for (const auto& r : records) {
    if (r.left == r.right) continue;
    score[r.left] += r.weight * credit(r, true);
    score[r.right] += r.weight * credit(r, false);
  }
  return finish(Algorithm::kCounting, names, score, 0, true);
}

RatingResult average_win_rate(std::span<const ComparisonRecord> records, IndexPtr index) {
  check_weights(records);
  const auto names = item_names(records, index);
  // (me, opponent) -> credited wins, games
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> tally;
  for (const auto& r : records) {
    if (r.left == r.right) continue;
    auto& lt = tally[{r.left, r.right}];
    auto& rt = tally[{r.right, r.left}];
    lt.first += r.weight * credit(r, true);
    rt.first += r.weight * credit(r, false);
    lt.second += r.weight;
    rt.second += r.weight;
  }
  std::map<std::string, double> score;
  for (const auto& me : names) {
    double total = 0;
    int opponents = 0;
    for (const auto& [key, value] : tally) {
      if (key.first != me || value.second <= 0) continue;
      total += value.first / value.second;
      ++opponents;
    }
    score[me] = opponents > 0 ? total / opponents : 0.5;
  }
  return finish(Algorithm::kAverageWinRate, names, score, 0, true);
}

RatingResult elo(std::span<const ComparisonRecord> records, IndexPtr index,
                 const EloParams& params) {
  params.validate();
  check_weights(records);
  const auto names = item_names(records, index);
  std::map<std::string, double> rating;
  for (const auto& name : names) rating[name] = params.initial;
  for (const auto& r : records) {
    if (r.left == r.right) continue;
    const double expected_left =
        1 / (1 + std::pow(params.base, (rating[r.right] - rating[r.left]) / params.scale));
    const double expected_right = 1 - expected_left;
    const double new_left =
        rating[r.left] + r.weight * params.k * (credit(r, true) - expected_left);
    const double new_right =
        rating[r.right] + r.weight * params.k * (credit(r, false) - expected_right);
    rating[r.left] = new_left;
    rating[r.right] = new_right;
  }
  return finish(Algorithm::kElo, names, rating, 0, true);
}

RatingResult bradley_terry(std::span<const ComparisonRecord> records, IndexPtr index,
                           const IterParams& params) {
  return strength_fit(Algorithm::kBradleyTerry, records, std::move(index), params, false);
}

RatingResult newman(std::span<const ComparisonRecord> records, IndexPtr index,
                    const IterParams& params) {
  return strength_fit(Algorithm::kNewman, records, std::move(index), params, true);
}

RatingResult eigen(std::span<const ComparisonRecord> records, IndexPtr index,
                   const IterParams& params) {
  params.validate();
  check_weights(records);
  const auto names = item_names(records, index);
  const auto n = names.size();
  const auto a = credit_matrix(records, names);
  double total = 0;
  for (const auto& row : a) {
    for (double v : row) total += v;
  }
  std::vector<double> x(n, n ? 1.0 / n : 0.0);
  std::size_t iterations = 0;
  bool converged = true;
  if (total > 0) {
    const double shift = total / n;
    double change = 0;
    while (iterations < params.max_iterations) {
      std::vector<double> y(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = shift * x[i];
        for (std::size_t j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
      }
      double sum = 0;
      for (double v : y) sum += v;
      change = 0;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] /= sum;
        change = std::max(change, std::abs(y[i] - x[i]));
      }
      x = y;
      ++iterations;
      if (change < params.tolerance) break;
    }
    converged = change < params.tolerance;
  }
  std::map<std::string, double> score;
  for (std::size_t i = 0; i < n; ++i) score[names[i]] = x[i];
  return finish(Algorithm::kEigen, names, score, iterations, converged);
}

RatingResult pagerank(std::span<const ComparisonRecord> records, IndexPtr index,
                      const IterParams& params) {
  params.validate();
  check_weights(records);
  const auto names = item_names(records, index);
  const auto n = names.size();
  const auto a = credit_matrix(records, names);
  // Column-stochastic transition: from loser j to winner i.
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out_weight[j] += a[i][j];
  }
  std::vector<double> p(n, n ? 1.0 / n : 0.0);
  std::size_t iterations = 0;
  double change = 0;
  const double d = params.damping;
  while (n > 0 && iterations < params.max_iterations) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = (1 - d) / n;
      for (std::size_t j = 0; j < n; ++j) {
        const double step = out_weight[j] > 0 ? a[i][j] / out_weight[j] : 1.0 / n;
        next[i] += d * step * p[j];
      }
    }
    change = 0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - p[i]));
    p = next;
    ++iterations;
    if (change < params.tolerance) break;
  }
  std::map<std::string, double> score;
  for (std::size_t i = 0; i < n; ++i) score[names[i]] = p[i];
  return finish(Algorithm::kPageRank, names, score, iterations, change < params.tolerance);
}

RatingResult rate(Algorithm algorithm, std::span<const ComparisonRecord> records,
                  const Options& options, IndexPtr index) {
  switch (algorithm) {
    case Algorithm::kCounting: return naive::counting(records, std::move(index));
    case Algorithm::kAverageWinRate: return naive::average_win_rate(records, std::move(index));
    case Algorithm::kElo: return naive::elo(records, std::move(index), options.elo);
    case Algorithm::kBradleyTerry: return naive::bradley_terry(records, std::move(index), options.iter);
    case Algorithm::kNewman: return naive::newman(records, std::move(index), options.iter);
    case Algorithm::kEigen: return naive::eigen(records, std::move(index), options.iter);
    case Algorithm::kPageRank: return naive::pagerank(records, std::move(index), options.iter);
  }
  throw Error(ErrorKind::kInvalidParameter, "unknown algorithm");
}

}  // namespace pairank::naive
