#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pairank/core.hpp"
#include "pairank/ratings.hpp"

namespace pairank::testing {

inline ComparisonRecord rec(std::string left, std::string right, Winner winner,
                            double weight = 1.0) {
  return {std::move(left), std::move(right), winner, weight};
}

inline constexpr Winner L = Winner::kLeft;
inline constexpr Winner R = Winner::kRight;
inline constexpr Winner D = Winner::kDraw;

// xs=[pizza, burger, pizza], ys=[burger, sushi, sushi], winners=[X, Y, Draw]
inline std::vector<ComparisonRecord> listing_records() {
  return {rec("pizza", "burger", L), rec("burger", "sushi", R), rec("pizza", "sushi", D)};
}

// The five visible rows of the food.csv example.
inline std::vector<ComparisonRecord> food_records() {
  return {rec("Pizza", "Sushi", L), rec("Burger", "Pasta", R), rec("Tacos", "Pizza", L),
          rec("Sushi", "Tacos", R), rec("Burger", "Pizza", L)};
}

inline const char* kFoodCsv =
    "left,right,winner\n"
    "Pizza,Sushi,left\n"
    "Burger,Pasta,right\n"
    "Tacos,Pizza,left\n"
    "Sushi,Tacos,right\n"
    "Burger,Pizza,left\n";

struct CaseShape {
  std::size_t max_items = 20;
  std::size_t max_records = 2000;
  double tie_rate = 0.15;
  double self_rate = 0.02;
  bool random_weights = true;
};

// Seeded random comparison set; item names are "i<k>".
inline std::vector<ComparisonRecord> random_records(std::uint64_t seed, const CaseShape& shape = {}) {
  std::mt19937_64 rng(seed);
  const auto items = 1 + rng() % shape.max_items;
  const auto count = rng() % (shape.max_records + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ComparisonRecord> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const auto a = rng() % items;
    auto b = rng() % items;
    if (items > 1 && a == b && unit(rng) > shape.self_rate) b = (a + 1 + rng() % (items - 1)) % items;
    Winner w = unit(rng) < shape.tie_rate ? D : (unit(rng) < 0.5 ? L : R);
    double weight = 1.0;
    if (shape.random_weights && unit(rng) < 0.3) weight = std::round(unit(rng) * 300) / 100;
    out.push_back({"i" + std::to_string(a), "i" + std::to_string(b), w, weight});
  }
  return out;
}

inline double geometric_mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::log(x);
  return std::exp(s / static_cast<double>(v.size()));
}

}  // namespace pairank::testing
