#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pairank {

enum class ErrorKind {
  kMismatchedLengths,
  kIllegalWeight,
  kUnknownItem,
  kUnknownWinner,
  kInvalidParameter,
  kNonPositiveScore,
  kEmptyInput,
  kMissingColumn,
  kMalformedRow,
};

std::string_view error_kind_name(ErrorKind kind);

// All contract violations on input data surface as this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class Winner : std::uint8_t { kLeft, kRight, kDraw };

// Case-insensitive: left / right / tie / draw. Throws kUnknownWinner.
Winner parse_winner(std::string_view label);
std::string_view winner_label(Winner winner);

struct ComparisonRecord {
  std::string left;
  std::string right;
  Winner winner = Winner::kDraw;
  double weight = 1.0;

  friend bool operator==(const ComparisonRecord&, const ComparisonRecord&) = default;
};

using ItemId = std::uint32_t;

struct IndexedRecord {
  ItemId left = 0;
  ItemId right = 0;
  Winner winner = Winner::kDraw;
  double weight = 1.0;
};

// Bidirectional name <-> dense id mapping. Immutable once built.
class Index {
 public:
  Index() = default;

  // Ids in first-appearance order over left0, right0, left1, right1, ...
  static Index build(std::span<const ComparisonRecord> records);
  // Same ids as build(); also fills `indexed` in the same pass.
  static Index build(std::span<const ComparisonRecord> records,
                     std::vector<IndexedRecord>& indexed);
  // Ids follow the order of `names`; duplicates are rejected.
  static Index from_names(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }

  std::optional<ItemId> find(std::string_view name) const;
  ItemId id(std::string_view name) const;
  const std::string& name(ItemId id) const { return names_.at(id); }
  std::span<const std::string> names() const noexcept { return names_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  ItemId insert(std::string_view name);

  std::vector<std::string> names_;
  std::unordered_map<std::string, ItemId, Hash, std::equal_to<>> ids_;
};

// Zips columnar inputs into records. Weights default to 1.0.
std::vector<ComparisonRecord> validate_batch(
    std::span<const std::string> lefts, std::span<const std::string> rights,
    std::span<const Winner> winners,
    std::optional<std::span<const double>> weights = std::nullopt);

void validate_weight(double weight);

// Throws kUnknownItem when a name is absent from `index`.
std::vector<IndexedRecord> index_records(std::span<const ComparisonRecord> records,
                                         const Index& index);

}  // namespace pairank
