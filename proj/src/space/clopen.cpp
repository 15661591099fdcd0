#include <algorithm>
#include <set>

#include "zdsys/space.hpp"

namespace zdsys {

namespace detail {

OdometerTrie OdometerTrie::empty() { return OdometerTrie(); }

OdometerTrie OdometerTrie::full() {
  OdometerTrie t;
  t.kind_ = Kind::Full;
  return t;
}

OdometerTrie OdometerTrie::split(std::vector<OdometerTrie> children) {
  bool all_empty = true;
  bool all_full = true;
  for (const auto& c : children) {
    all_empty = all_empty && c.kind() == Kind::Empty;
    all_full = all_full && c.kind() == Kind::Full;
  }
  if (all_empty) return empty();
  if (all_full) return full();
  OdometerTrie t;
  t.kind_ = Kind::Split;
  t.children_ = std::make_shared<const std::vector<OdometerTrie>>(std::move(children));
  return t;
}

std::size_t OdometerTrie::depth() const {
  if (kind_ != Kind::Split) return 0;
  std::size_t d = 0;
  for (const auto& c : *children_) d = std::max(d, c.depth());
  return d + 1;
}

bool OdometerTrie::operator==(const OdometerTrie& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ != Kind::Split || children_ == other.children_) return true;
  return *children_ == *other.children_;
}

}  // namespace detail

namespace {

using Trie = detail::OdometerTrie;

enum class Op { Union, Intersect, Difference };

bool apply_op(Op op, bool a, bool b) {
  switch (op) {
    case Op::Union: return a || b;
    case Op::Intersect: return a && b;
    case Op::Difference: return a && !b;
  }
  return false;
}

Index floor_div(Index a, Index b) {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Index floor_mod(Index a, Index b) { return a - floor_div(a, b) * b; }

Trie trie_combine(const Trie& a, const Trie& b, Op op, int base) {
  const bool a_leaf = a.kind() != Trie::Kind::Split;
  const bool b_leaf = b.kind() != Trie::Kind::Split;
  if (a_leaf && b_leaf) {
    return apply_op(op, a.kind() == Trie::Kind::Full, b.kind() == Trie::Kind::Full) ? Trie::full()
                                                                                    : Trie::empty();
  }
  std::vector<Trie> children;
  children.reserve(static_cast<std::size_t>(base));
  for (int d = 0; d < base; ++d) {
    const Trie& ca = a_leaf ? a : a.children()[static_cast<std::size_t>(d)];
    const Trie& cb = b_leaf ? b : b.children()[static_cast<std::size_t>(d)];
    children.push_back(trie_combine(ca, cb, op, base));
  }
  return Trie::split(std::move(children));
}

Trie trie_complement(const Trie& t) {
  switch (t.kind()) {
    case Trie::Kind::Empty: return Trie::full();
    case Trie::Kind::Full: return Trie::empty();
    case Trie::Kind::Split: break;
  }
  std::vector<Trie> children;
  for (const auto& c : t.children()) children.push_back(trie_complement(c));
  return Trie::split(std::move(children));
}

Trie trie_from_word(const std::vector<int>& word, std::size_t at, int base) {
  if (at == word.size()) return Trie::full();
  std::vector<Trie> children(static_cast<std::size_t>(base), Trie::empty());
  children[static_cast<std::size_t>(word[at])] = trie_from_word(word, at + 1, base);
  return Trie::split(std::move(children));
}

// Adding n maps digit d to (d + n) mod b and carries floor((d + n) / b).
Trie trie_translate(const Trie& t, Index n, int base) {
  if (n == 0 || t.kind() != Trie::Kind::Split) return t;
  std::vector<Trie> children(static_cast<std::size_t>(base), Trie::empty());
  for (int d = 0; d < base; ++d) {
    const Index v = d + n;
    children[static_cast<std::size_t>(floor_mod(v, base))] =
        trie_translate(t.children()[static_cast<std::size_t>(d)], floor_div(v, base), base);
  }
  return Trie::split(std::move(children));
}

void trie_words(const Trie& t, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  switch (t.kind()) {
    case Trie::Kind::Empty: return;
    case Trie::Kind::Full: out.push_back(prefix); return;
    case Trie::Kind::Split: break;
  }
  for (std::size_t d = 0; d < t.children().size(); ++d) {
    prefix.push_back(static_cast<int>(d));
    trie_words(t.children()[d], prefix, out);
    prefix.pop_back();
  }
}

bool trie_contains(const Trie& t, const Point& p) {
  const Trie* node = &t;
  for (std::size_t i = 0;; ++i) {
    if (node->kind() != Trie::Kind::Split) return node->kind() == Trie::Kind::Full;
    node = &node->children()[static_cast<std::size_t>(p.digit(i))];
  }
}

std::vector<Index> sorted_unique(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_family(const SystemSpec& spec, Family family, const char* what) {
  if (spec.family() != family) {
    throw Error(ErrorCode::InvalidSpec,
                std::string(what) + " is not available for " + std::string(family_name(spec.family())));
  }
}

void require_same(const ClopenSet& a, const ClopenSet& b) {
  if (!(a.spec() == b.spec())) {
    throw Error(ErrorCode::MixedSystems, "clopen sets belong to different systems");
  }
}

}  // namespace

ClopenSet make_canonical(SystemSpec spec, ClopenSet::Form form) {
  const auto mismatch = [&] {
    throw Error(ErrorCode::InvalidSpec, "set form does not match the system family");
  };
  switch (spec.family()) {
    case Family::FiniteCycle: {
      auto* c = std::get_if<ClopenSet::Cycle>(&form);
      if (c == nullptr) mismatch();
      c->members = sorted_unique(std::move(c->members));
      for (Index m : c->members) {
        if (m < 0 || m >= spec.period()) {
          throw Error(ErrorCode::InvalidSpec, "cycle member outside {0, ..., M-1}");
        }
      }
      break;
    }
    case Family::Odometer:
      if (!std::holds_alternative<ClopenSet::Odometer>(form)) mismatch();
      break;
    case Family::CompactifiedShift: {
      auto* s = std::get_if<ClopenSet::Shift>(&form);
      if (s == nullptr) mismatch();
      s->exceptions = sorted_unique(std::move(s->exceptions));
      break;
    }
    case Family::TwoPointShift: {
      auto* s = std::get_if<ClopenSet::TwoPoint>(&form);
      if (s == nullptr) mismatch();
      s->exceptions = sorted_unique(std::move(s->exceptions));
      break;
    }
    case Family::QuotientProduct: {
      auto* p = std::get_if<ClopenSet::Product>(&form);
      if (p == nullptr) mismatch();
      for (const auto& s : p->slices) {
        if (!(s.spec() == spec.fiber())) {
          throw Error(ErrorCode::MixedSystems, "product slice from a different fiber system");
        }
      }
      const ClopenSet fill = p->tail ? ClopenSet::whole(spec.fiber()) : ClopenSet::empty(spec.fiber());
      std::size_t first = 0;
      std::size_t last = p->slices.size();
      while (first < last && p->slices[first] == fill) ++first;
      while (last > first && p->slices[last - 1] == fill) --last;
      std::vector<ClopenSet> kept(p->slices.begin() + static_cast<std::ptrdiff_t>(first),
                                  p->slices.begin() + static_cast<std::ptrdiff_t>(last));
      p->lo = kept.empty() ? 0 : p->lo + static_cast<Index>(first);
      p->slices = std::move(kept);
      break;
    }
  }
  return ClopenSet(std::move(spec), std::move(form));
}

ClopenSet ClopenSet::empty(const SystemSpec& spec) {
  switch (spec.family()) {
    case Family::FiniteCycle: return make_canonical(spec, Cycle{});
    case Family::Odometer: return make_canonical(spec, Odometer{Trie::empty()});
    case Family::CompactifiedShift: return make_canonical(spec, Shift{});
    case Family::TwoPointShift: return make_canonical(spec, TwoPoint{});
    case Family::QuotientProduct: return make_canonical(spec, Product{});
  }
  throw Error(ErrorCode::InvalidSpec, "unknown family");
}

ClopenSet ClopenSet::whole(const SystemSpec& spec) {
  switch (spec.family()) {
    case Family::FiniteCycle: {
      std::vector<Index> all(static_cast<std::size_t>(spec.period()));
      for (Index i = 0; i < spec.period(); ++i) all[static_cast<std::size_t>(i)] = i;
      return make_canonical(spec, Cycle{std::move(all)});
    }
    case Family::Odometer: return make_canonical(spec, Odometer{Trie::full()});
    case Family::CompactifiedShift: return make_canonical(spec, Shift{{}, true});
    case Family::TwoPointShift: return make_canonical(spec, TwoPoint{{}, true, true});
    case Family::QuotientProduct: return make_canonical(spec, Product{0, {}, true});
  }
  throw Error(ErrorCode::InvalidSpec, "unknown family");
}

ClopenSet ClopenSet::cycle(const SystemSpec& spec, std::vector<Index> members) {
  require_family(spec, Family::FiniteCycle, "cycle set");
  return make_canonical(spec, Cycle{std::move(members)});
}

ClopenSet ClopenSet::cylinder(const SystemSpec& spec, const std::vector<int>& word) {
  require_family(spec, Family::Odometer, "cylinder set");
  for (int d : word) {
    if (d < 0 || d >= spec.base()) throw Error(ErrorCode::InvalidSpec, "cylinder digit out of range");
  }
  return make_canonical(spec, Odometer{trie_from_word(word, 0, spec.base())});
}

ClopenSet ClopenSet::cylinders(const SystemSpec& spec,
                               const std::vector<std::vector<int>>& words) {
  ClopenSet out = empty(spec);
  for (const auto& w : words) out = set_union(out, cylinder(spec, w));
  return out;
}

ClopenSet ClopenSet::shift(const SystemSpec& spec, std::vector<Index> exceptions, bool cofinite) {
  require_family(spec, Family::CompactifiedShift, "shift set");
  return make_canonical(spec, Shift{std::move(exceptions), cofinite});
}

ClopenSet ClopenSet::two_point(const SystemSpec& spec, std::vector<Index> exceptions, bool left,
                               bool right) {
  require_family(spec, Family::TwoPointShift, "two-point set");
  return make_canonical(spec, TwoPoint{std::move(exceptions), left, right});
}

ClopenSet ClopenSet::product(const SystemSpec& spec, Index lo, std::vector<ClopenSet> slices,
                             bool tail) {
  require_family(spec, Family::QuotientProduct, "product set");
  return make_canonical(spec, Product{lo, std::move(slices), tail});
}

ClopenSet ClopenSet::fiber_slice(const SystemSpec& spec, Index index, const ClopenSet& slice) {
  return product(spec, index, {slice}, false);
}

std::vector<std::vector<int>> ClopenSet::words() const {
  const auto* o = std::get_if<Odometer>(&form_);
  if (o == nullptr) throw Error(ErrorCode::InvalidSpec, "words() on a non-odometer set");
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  trie_words(o->trie, prefix, out);
  return out;
}

ClopenSet ClopenSet::slice_at(Index index) const {
  const auto* p = std::get_if<Product>(&form_);
  if (p == nullptr) throw Error(ErrorCode::InvalidSpec, "slice_at() on a non-product set");
  const Index off = index - p->lo;
  if (off >= 0 && off < static_cast<Index>(p->slices.size())) {
    return p->slices[static_cast<std::size_t>(off)];
  }
  return p->tail ? whole(spec_.fiber()) : empty(spec_.fiber());
}

std::optional<std::pair<Index, Index>> ClopenSet::window() const {
  const auto* p = std::get_if<Product>(&form_);
  if (p == nullptr) throw Error(ErrorCode::InvalidSpec, "window() on a non-product set");
  if (p->slices.empty()) return std::nullopt;
  return std::make_pair(p->lo, p->lo + static_cast<Index>(p->slices.size()) - 1);
}

bool ClopenSet::operator==(const ClopenSet& other) const {
  if (!(spec_ == other.spec_)) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(other.form_);
        if constexpr (std::is_same_v<T, Cycle>) {
          return a.members == b.members;
        } else if constexpr (std::is_same_v<T, Odometer>) {
          return a.trie == b.trie;
        } else if constexpr (std::is_same_v<T, Shift>) {
          return a.cofinite == b.cofinite && a.exceptions == b.exceptions;
        } else if constexpr (std::is_same_v<T, TwoPoint>) {
          return a.left == b.left && a.right == b.right && a.exceptions == b.exceptions;
        } else {
          return a.tail == b.tail && a.lo == b.lo && a.slices == b.slices;
        }
      },
      form_);
}

std::strong_ordering ClopenSet::operator<=>(const ClopenSet& other) const {
  const std::string a = to_string();
  const std::string b = other.to_string();
  return a.compare(b) <=> 0;
}

std::string ClopenSet::to_string() const { return to_json(*this).dump(); }

namespace {

ClopenSet combine(const ClopenSet& a, const ClopenSet& b, Op op) {
  require_same(a, b);
  const SystemSpec& spec = a.spec();
  switch (spec.family()) {
    case Family::FiniteCycle: {
      const auto& x = std::get<ClopenSet::Cycle>(a.form()).members;
      const auto& y = std::get<ClopenSet::Cycle>(b.form()).members;
      std::vector<Index> out;
      switch (op) {
        case Op::Union:
          std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
          break;
        case Op::Intersect:
          std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
          break;
        case Op::Difference:
          std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
          break;
      }
      return ClopenSet::cycle(spec, std::move(out));
    }
    case Family::Odometer: {
      const auto& x = std::get<ClopenSet::Odometer>(a.form()).trie;
      const auto& y = std::get<ClopenSet::Odometer>(b.form()).trie;
      return make_canonical(spec, ClopenSet::Odometer{trie_combine(x, y, op, spec.base())});
    }
    case Family::CompactifiedShift: {
      const auto& x = std::get<ClopenSet::Shift>(a.form());
      const auto& y = std::get<ClopenSet::Shift>(b.form());
      const bool dflt = apply_op(op, x.cofinite, y.cofinite);
      std::vector<Index> cand;
      std::set_union(x.exceptions.begin(), x.exceptions.end(), y.exceptions.begin(),
                     y.exceptions.end(), std::back_inserter(cand));
      std::vector<Index> out;
      for (Index v : cand) {
        const bool in_x = std::binary_search(x.exceptions.begin(), x.exceptions.end(), v) != x.cofinite;
        const bool in_y = std::binary_search(y.exceptions.begin(), y.exceptions.end(), v) != y.cofinite;
        if (apply_op(op, in_x, in_y) != dflt) out.push_back(v);
      }
      return ClopenSet::shift(spec, std::move(out), dflt);
    }
    case Family::TwoPointShift: {
      const auto& x = std::get<ClopenSet::TwoPoint>(a.form());
      const auto& y = std::get<ClopenSet::TwoPoint>(b.form());
      const bool left = apply_op(op, x.left, y.left);
      const bool right = apply_op(op, x.right, y.right);
      std::vector<Index> cand;
      std::set_union(x.exceptions.begin(), x.exceptions.end(), y.exceptions.begin(),
                     y.exceptions.end(), std::back_inserter(cand));
      auto member = [](const ClopenSet::TwoPoint& s, Index v) {
        const bool dflt = v < 0 ? s.left : s.right;
        return std::binary_search(s.exceptions.begin(), s.exceptions.end(), v) != dflt;
      };
      std::vector<Index> out;
      for (Index v : cand) {
        const bool dflt = v < 0 ? left : right;
        if (apply_op(op, member(x, v), member(y, v)) != dflt) out.push_back(v);
      }
      return ClopenSet::two_point(spec, std::move(out), left, right);
    }
    case Family::QuotientProduct: {
      const auto wa = a.window();
      const auto wb = b.window();
      const bool tail = apply_op(op, std::get<ClopenSet::Product>(a.form()).tail,
                                 std::get<ClopenSet::Product>(b.form()).tail);
      if (!wa && !wb) return ClopenSet::product(spec, 0, {}, tail);
      Index lo = wa ? wa->first : wb->first;
      Index hi = wa ? wa->second : wb->second;
      if (wb) {
        lo = std::min(lo, wb->first);
        hi = std::max(hi, wb->second);
      }
      std::vector<ClopenSet> slices;
      slices.reserve(static_cast<std::size_t>(hi - lo + 1));
      for (Index k = lo; k <= hi; ++k) slices.push_back(combine(a.slice_at(k), b.slice_at(k), op));
      return ClopenSet::product(spec, lo, std::move(slices), tail);
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown family");
}

}  // namespace

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, Op::Union); }
ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, Op::Intersect); }
ClopenSet difference(const ClopenSet& a, const ClopenSet& b) {
  return combine(a, b, Op::Difference);
}

ClopenSet complement(const ClopenSet& a) {
  if (a.spec().family() == Family::Odometer) {
    return make_canonical(a.spec(),
                          ClopenSet::Odometer{trie_complement(std::get<ClopenSet::Odometer>(a.form()).trie)});
  }
  return difference(ClopenSet::whole(a.spec()), a);
}

bool is_empty(const ClopenSet& a) { return a == ClopenSet::empty(a.spec()); }

bool is_subset(const ClopenSet& a, const ClopenSet& b) { return is_empty(difference(a, b)); }

bool equals(const ClopenSet& a, const ClopenSet& b) {
  require_same(a, b);
  return a == b;
}

bool disjoint(const ClopenSet& a, const ClopenSet& b) { return is_empty(intersect(a, b)); }

ClopenSet apply_h(const ClopenSet& a, Index n) {
  const SystemSpec& spec = a.spec();
  switch (spec.family()) {
    case Family::FiniteCycle: {
      std::vector<Index> out;
      for (Index m : std::get<ClopenSet::Cycle>(a.form()).members) {
        out.push_back(floor_mod(m + n, spec.period()));
      }
      return ClopenSet::cycle(spec, std::move(out));
    }
    case Family::Odometer:
      return make_canonical(
          spec, ClopenSet::Odometer{trie_translate(std::get<ClopenSet::Odometer>(a.form()).trie, n,
                                                   spec.base())});
    case Family::CompactifiedShift: {
      const auto& s = std::get<ClopenSet::Shift>(a.form());
      std::vector<Index> out = s.exceptions;
      for (Index& v : out) v += n;
      return ClopenSet::shift(spec, std::move(out), s.cofinite);
    }
    case Family::TwoPointShift: {
      const auto& s = std::get<ClopenSet::TwoPoint>(a.form());
      std::set<Index> flips;
      auto toggle = [&](Index v) {
        if (!flips.insert(v).second) flips.erase(v);
      };
      // x is in h^n(A) iff x - n is in A; defaults disagree on the band between 0 and n.
      for (Index v : s.exceptions) toggle(v + n);
      if (s.left != s.right) {
        const Index lo = std::min<Index>(0, n);
        const Index hi = std::max<Index>(0, n);
        for (Index v = lo; v < hi; ++v) toggle(v);
      }
      return ClopenSet::two_point(spec, {flips.begin(), flips.end()}, s.left, s.right);
    }
    case Family::QuotientProduct: {
      const auto& p = std::get<ClopenSet::Product>(a.form());
      std::vector<ClopenSet> slices;
      slices.reserve(p.slices.size());
      for (const auto& s : p.slices) slices.push_back(apply_h(s, n));
      return ClopenSet::product(spec, p.lo, std::move(slices), p.tail);
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown family");
}

bool contains_point(const ClopenSet& a, const Point& p) {
  const SystemSpec& spec = a.spec();
  validate_point(spec, p);
  switch (spec.family()) {
    case Family::FiniteCycle: {
      const auto& m = std::get<ClopenSet::Cycle>(a.form()).members;
      return std::binary_search(m.begin(), m.end(), p.value());
    }
    case Family::Odometer:
      return trie_contains(std::get<ClopenSet::Odometer>(a.form()).trie, p);
    case Family::CompactifiedShift: {
      const auto& s = std::get<ClopenSet::Shift>(a.form());
      if (p.kind() == Point::Kind::Infinity) return s.cofinite;
      return std::binary_search(s.exceptions.begin(), s.exceptions.end(), p.value()) != s.cofinite;
    }
    case Family::TwoPointShift: {
      const auto& s = std::get<ClopenSet::TwoPoint>(a.form());
      if (p.kind() == Point::Kind::Infinity) return s.right;
      if (p.kind() == Point::Kind::MinusInfinity) return s.left;
      const bool dflt = p.value() < 0 ? s.left : s.right;
      return std::binary_search(s.exceptions.begin(), s.exceptions.end(), p.value()) != dflt;
    }
    case Family::QuotientProduct:
      if (p.kind() == Point::Kind::Collapsed) return std::get<ClopenSet::Product>(a.form()).tail;
      return contains_point(a.slice_at(p.value()), p.fiber_point());
  }
  return false;
}

std::optional<std::vector<Point>> finite_points(const ClopenSet& a) {
  const SystemSpec& spec = a.spec();
  std::vector<Point> out;
  switch (spec.family()) {
    case Family::FiniteCycle:
      for (Index m : std::get<ClopenSet::Cycle>(a.form()).members) out.push_back(Point::integer(m));
      return out;
    case Family::Odometer:
      if (is_empty(a)) return out;
      return std::nullopt;
    case Family::CompactifiedShift: {
      const auto& s = std::get<ClopenSet::Shift>(a.form());
      if (s.cofinite) return std::nullopt;
      for (Index v : s.exceptions) out.push_back(Point::integer(v));
      return out;
    }
    case Family::TwoPointShift: {
      const auto& s = std::get<ClopenSet::TwoPoint>(a.form());
      if (s.left || s.right) return std::nullopt;
      for (Index v : s.exceptions) out.push_back(Point::integer(v));
      return out;
    }
    case Family::QuotientProduct: {
      const auto& p = std::get<ClopenSet::Product>(a.form());
      if (p.tail) return std::nullopt;
      for (std::size_t i = 0; i < p.slices.size(); ++i) {
        auto pts = finite_points(p.slices[i]);
        if (!pts) return std::nullopt;
        for (const auto& q : *pts) out.push_back(Point::fibered(q, p.lo + static_cast<Index>(i)));
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace zdsys
