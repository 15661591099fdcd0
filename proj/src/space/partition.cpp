#include "zdsys/space.hpp"

namespace zdsys {

bool is_partition(std::span<const ClopenSet> sets) {
  if (sets.empty()) return false;
  const SystemSpec& spec = sets.front().spec();
  ClopenSet covered = ClopenSet::empty(spec);
  for (const auto& s : sets) {
    if (!(s.spec() == spec)) return false;
    if (is_empty(s)) return false;
    if (!disjoint(covered, s)) return false;
    covered = set_union(covered, s);
  }
  return covered == ClopenSet::whole(spec);
}

Partition::Partition(std::vector<ClopenSet> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorCode::PartitionFailure, "a partition needs at least one set");
  const SystemSpec& spec = elements_.front().spec();
  ClopenSet covered = ClopenSet::empty(spec);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const auto& s = elements_[i];
    if (!(s.spec() == spec)) throw Error(ErrorCode::MixedSystems, "partition mixes systems");
    if (is_empty(s)) {
      throw Error(ErrorCode::PartitionFailure, "partition element " + std::to_string(i) + " is empty");
    }
    if (!disjoint(covered, s)) {
      throw Error(ErrorCode::PartitionFailure,
                  "partition element " + std::to_string(i) + " overlaps an earlier one");
    }
    covered = set_union(covered, s);
  }
  if (!(covered == ClopenSet::whole(spec))) {
    throw Error(ErrorCode::PartitionFailure,
                "partition does not cover X; missing " + complement(covered).to_string());
  }
}

std::optional<std::size_t> Partition::block_containing(const ClopenSet& a) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (is_subset(a, elements_[i])) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Partition::block_containing(const Point& p) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (contains_point(elements_[i], p)) return i;
  }
  return std::nullopt;
}

Partition common_refinement(const Partition& p, const Partition& q) {
  if (!(p.spec() == q.spec())) throw Error(ErrorCode::MixedSystems, "partitions of different systems");
  std::vector<ClopenSet> out;
  for (const auto& a : p) {
    for (const auto& b : q) {
      ClopenSet c = intersect(a, b);
      if (!is_empty(c)) out.push_back(std::move(c));
    }
  }
  return Partition(std::move(out));
}

bool is_finer(const Partition& fine, const Partition& coarse) {
  if (!(fine.spec() == coarse.spec())) {
    throw Error(ErrorCode::MixedSystems, "partitions of different systems");
  }
  for (const auto& a : fine) {
    if (!coarse.block_containing(a)) return false;
  }
  return true;
}

Partition apply_h(const Partition& p, Index n) {
  std::vector<ClopenSet> out;
  out.reserve(p.size());
  for (const auto& a : p) out.push_back(apply_h(a, n));
  return Partition(std::move(out));
}

namespace {

void all_words(int base, Index length, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (static_cast<Index>(prefix.size()) == length) {
    out.push_back(prefix);
    return;
  }
  for (int d = 0; d < base; ++d) {
    prefix.push_back(d);
    all_words(base, length, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Partition generating_partition(const SystemSpec& spec, Index n) {
  if (n < 0) throw Error(ErrorCode::InvalidSpec, "generating partition level must be >= 0");
  std::vector<ClopenSet> out;
  switch (spec.family()) {
    case Family::FiniteCycle:
      for (Index i = 0; i < spec.period(); ++i) out.push_back(ClopenSet::cycle(spec, {i}));
      break;
    case Family::Odometer: {
      std::vector<std::vector<int>> words;
      std::vector<int> prefix;
      all_words(spec.base(), n, prefix, words);
      for (const auto& w : words) out.push_back(ClopenSet::cylinder(spec, w));
      break;
    }
    case Family::CompactifiedShift: {
      std::vector<Index> window;
      for (Index k = -n; k < n; ++k) {
        out.push_back(ClopenSet::shift(spec, {k}, false));
        window.push_back(k);
      }
      out.push_back(ClopenSet::shift(spec, std::move(window), true));
      break;
    }
    case Family::TwoPointShift: {
      std::vector<Index> band;
      for (Index k = -n; k < n; ++k) {
        out.push_back(ClopenSet::two_point(spec, {k}, false, false));
      }
      // Left tail: x < -n together with -inf; the defaults cover x < 0.
      for (Index k = -n; k < 0; ++k) band.push_back(k);
      out.push_back(ClopenSet::two_point(spec, band, true, false));
      band.clear();
      for (Index k = 0; k < n; ++k) band.push_back(k);
      out.push_back(ClopenSet::two_point(spec, band, false, true));
      break;
    }
    case Family::QuotientProduct: {
      const Partition fiber = generating_partition(spec.fiber(), n);
      for (Index k = -n; k < n; ++k) {
        for (const auto& e : fiber) out.push_back(ClopenSet::fiber_slice(spec, k, e));
      }
      std::vector<ClopenSet> empties(static_cast<std::size_t>(2 * n), ClopenSet::empty(spec.fiber()));
      out.push_back(ClopenSet::product(spec, -n, std::move(empties), true));
      break;
    }
  }
  return Partition(std::move(out));
}

std::optional<Point> minimal_point_in(const ClopenSet& where) {
  const SystemSpec& spec = where.spec();
  switch (spec.family()) {
    case Family::FiniteCycle: {
      const auto& m = std::get<ClopenSet::Cycle>(where.form()).members;
      if (m.empty()) return std::nullopt;
      return Point::integer(m.front());
    }
    case Family::Odometer: {
      auto words = where.words();
      if (words.empty()) return std::nullopt;
      return Point::digits(words.front(), {0});
    }
    case Family::CompactifiedShift:
      if (contains_point(where, Point::infinity())) return Point::infinity();
      return std::nullopt;
    case Family::TwoPointShift:
      if (contains_point(where, Point::infinity())) return Point::infinity();
      if (contains_point(where, Point::minus_infinity())) return Point::minus_infinity();
      return std::nullopt;
    case Family::QuotientProduct: {
      const auto& p = std::get<ClopenSet::Product>(where.form());
      if (p.tail) return Point::collapsed();
      for (std::size_t i = 0; i < p.slices.size(); ++i) {
        if (auto q = minimal_point_in(p.slices[i])) {
          return Point::fibered(*q, p.lo + static_cast<Index>(i));
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace zdsys
