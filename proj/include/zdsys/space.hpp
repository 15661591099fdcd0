#pragma once

// Exact finite descriptions of the supported zero-dimensional systems (X, h):
// the system families, their clopen set algebra, points, partitions and the
// canonical generating sequences of partitions.
//
// Nothing here enumerates an infinite space pointwise. Every clopen set has a
// unique canonical form, so equality is structural.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zdsys/error.hpp"

namespace zdsys {

using Index = std::int64_t;

enum class Family {
  FiniteCycle,
  Odometer,
  CompactifiedShift,
  TwoPointShift,
  QuotientProduct,
};

std::string_view family_name(Family family);

/// Which system (X, h) we are working in. QuotientProduct is
/// (Y x Z) / (Y x {inf}) with Z the one-point compactification of the
/// integers and h acting as h_Y x id; the fiber is the system Y.
class SystemSpec {
 public:
  static SystemSpec finite_cycle(Index period);
  static SystemSpec odometer(int base = 2);
  static SystemSpec compactified_shift();
  static SystemSpec two_point_shift();
  static SystemSpec quotient_product(const SystemSpec& fiber);

  Family family() const noexcept { return family_; }
  Index period() const;
  int base() const;
  const SystemSpec& fiber() const;

  /// Closed-form classification: true when every fiber is essentially
  /// minimal (the whole space counts as one fiber for unfibered families).
  bool fiberwise_essentially_minimal() const;

  bool operator==(const SystemSpec& other) const;

 private:
  SystemSpec(Family family, Index param, std::shared_ptr<const SystemSpec> fiber)
      : family_(family), param_(param), fiber_(std::move(fiber)) {}

  Family family_;
  Index param_ = 0;
  std::shared_ptr<const SystemSpec> fiber_;
};

/// A finitely describable point. Odometer points are eventually periodic
/// digit strings (digit 0 is the least significant one).
class Point {
 public:
  enum class Kind { Integer, Infinity, MinusInfinity, Digits, Fibered, Collapsed };

  static Point integer(Index value);
  static Point infinity();
  static Point minus_infinity();
  static Point digits(std::vector<int> prefix, std::vector<int> period);
  static Point fibered(const Point& fiber_point, Index index);
  static Point collapsed();

  Kind kind() const noexcept { return kind_; }
  Index value() const { return value_; }  // integer value or fiber index
  const std::vector<int>& prefix() const { return prefix_; }
  const std::vector<int>& period() const { return period_; }
  const Point& fiber_point() const;

  /// Digit at position i (0-based) of a Digits point.
  int digit(std::size_t i) const;

  std::string to_string() const;
  bool operator==(const Point& other) const;
  std::strong_ordering operator<=>(const Point& other) const;

 private:
  Kind kind_ = Kind::Integer;
  Index value_ = 0;
  std::vector<int> prefix_;
  std::vector<int> period_;
  std::shared_ptr<const Point> fiber_point_;
};

namespace detail {

/// Immutable b-ary trie over cylinder words. Split nodes never have all
/// children Empty or all children Full, which makes the form canonical.
class OdometerTrie {
 public:
  enum class Kind : std::uint8_t { Empty, Full, Split };

  static OdometerTrie empty();
  static OdometerTrie full();
  static OdometerTrie split(std::vector<OdometerTrie> children);

  Kind kind() const noexcept { return kind_; }
  const std::vector<OdometerTrie>& children() const { return *children_; }
  std::size_t depth() const;

  bool operator==(const OdometerTrie& other) const;

 private:
  Kind kind_ = Kind::Empty;
  std::shared_ptr<const std::vector<OdometerTrie>> children_;
};

}  // namespace detail

/// A compact open subset of X in canonical form.
class ClopenSet {
 public:
  struct Cycle {
    std::vector<Index> members;  // sorted subset of {0, ..., M-1}
  };
  struct Odometer {
    detail::OdometerTrie trie;
  };
  /// Integers whose membership differs from the default given by `cofinite`.
  /// A cofinite set always contains inf.
  struct Shift {
    std::vector<Index> exceptions;
    bool cofinite = false;
  };
  /// Default membership of an integer x is `left` for x < 0 and `right` for
  /// x >= 0; `exceptions` lists the integers that differ. -inf belongs to the
  /// set iff `left`, +inf iff `right`.
  struct TwoPoint {
    std::vector<Index> exceptions;
    bool left = false;
    bool right = false;
  };
  /// Fiber slices over the window [lo, lo + slices.size() - 1]; outside the
  /// window every fiber is full when `tail` is set and empty otherwise. The
  /// collapsed point belongs to the set iff `tail`.
  struct Product {
    Index lo = 0;
    std::vector<ClopenSet> slices;
    bool tail = false;
  };
  using Form = std::variant<Cycle, Odometer, Shift, TwoPoint, Product>;

  static ClopenSet empty(const SystemSpec& spec);
  static ClopenSet whole(const SystemSpec& spec);

  static ClopenSet cycle(const SystemSpec& spec, std::vector<Index> members);
  static ClopenSet cylinder(const SystemSpec& spec, const std::vector<int>& word);
  static ClopenSet cylinders(const SystemSpec& spec, const std::vector<std::vector<int>>& words);
  static ClopenSet shift(const SystemSpec& spec, std::vector<Index> exceptions, bool cofinite);
  static ClopenSet two_point(const SystemSpec& spec, std::vector<Index> exceptions, bool left,
                             bool right);
  static ClopenSet product(const SystemSpec& spec, Index lo, std::vector<ClopenSet> slices,
                           bool tail);
  /// slice x {index} inside a QuotientProduct.
  static ClopenSet fiber_slice(const SystemSpec& spec, Index index, const ClopenSet& slice);

  const SystemSpec& spec() const noexcept { return spec_; }
  const Form& form() const noexcept { return form_; }

  /// Odometer digit words, lexicographic, for serialization and display.
  std::vector<std::vector<int>> words() const;
  /// Fiber slice over `index` of a QuotientProduct set.
  ClopenSet slice_at(Index index) const;
  /// Smallest window [lo, hi] outside of which a QuotientProduct set is
  /// constant; empty optional when the window is empty.
  std::optional<std::pair<Index, Index>> window() const;

  bool operator==(const ClopenSet& other) const;
  /// Canonical total order (by serialized form).
  std::strong_ordering operator<=>(const ClopenSet& other) const;

  std::string to_string() const;

 private:
  ClopenSet(SystemSpec spec, Form form) : spec_(std::move(spec)), form_(std::move(form)) {}
  friend ClopenSet make_canonical(SystemSpec spec, ClopenSet::Form form);

  SystemSpec spec_;
  Form form_;
};

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b);
ClopenSet intersect(const ClopenSet& a, const ClopenSet& b);
ClopenSet difference(const ClopenSet& a, const ClopenSet& b);
ClopenSet complement(const ClopenSet& a);
bool is_empty(const ClopenSet& a);
bool is_subset(const ClopenSet& a, const ClopenSet& b);
bool equals(const ClopenSet& a, const ClopenSet& b);
bool disjoint(const ClopenSet& a, const ClopenSet& b);

/// Exact image h^n(a).
ClopenSet apply_h(const ClopenSet& a, Index n);

bool contains_point(const ClopenSet& a, const Point& p);
/// h^n(p).
Point apply_h(const SystemSpec& spec, const Point& p, Index n);
/// The n with h^n(from) == to, searched over |n| <= bound; for points on a
/// finite or free orbit this is unique up to the period.
std::optional<Index> orbit_offset(const SystemSpec& spec, const Point& from, const Point& to,
                                  Index bound);
/// Every point of a, when a is finite.
std::optional<std::vector<Point>> finite_points(const ClopenSet& a);
/// Throws InvalidPoint when p does not describe a point of the system.
void validate_point(const SystemSpec& spec, const Point& p);

/// An ordered list of nonempty, pairwise disjoint clopen sets covering X.
class Partition {
 public:
  /// Throws PartitionFailure when the sets do not partition X.
  explicit Partition(std::vector<ClopenSet> elements);

  const std::vector<ClopenSet>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const ClopenSet& operator[](std::size_t i) const { return elements_[i]; }
  const SystemSpec& spec() const { return elements_.front().spec(); }

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  /// Index of the element containing a, if there is one.
  std::optional<std::size_t> block_containing(const ClopenSet& a) const;
  std::optional<std::size_t> block_containing(const Point& p) const;

  bool operator==(const Partition& other) const { return elements_ == other.elements_; }

 private:
  std::vector<ClopenSet> elements_;
};

bool is_partition(std::span<const ClopenSet> sets);
/// Nonempty pairwise intersections, ordered by (index in p, index in q).
Partition common_refinement(const Partition& p, const Partition& q);
/// Every element of fine lies inside an element of coarse.
bool is_finer(const Partition& fine, const Partition& coarse);
/// h^n applied elementwise.
Partition apply_h(const Partition& p, Index n);

/// The canonical generating sequence: level n.
Partition generating_partition(const SystemSpec& spec, Index n);

/// A point in the minimal set of the fiber meeting `where`, or nullopt.
/// Used to pick bases and to label the first tower of an adapted system.
std::optional<Point> minimal_point_in(const ClopenSet& where);

// JSON schema: {"family": ..., "params": {...}} and field-for-field set forms.
nlohmann::json to_json(const SystemSpec& spec);
SystemSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClopenSet& set);
ClopenSet clopen_from_json(const SystemSpec& spec, const nlohmann::json& j);
nlohmann::json to_json(const Point& p);
Point point_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Partition& p);
Partition partition_from_json(const SystemSpec& spec, const nlohmann::json& j);

}  // namespace zdsys
