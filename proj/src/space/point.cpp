#include <algorithm>
#include <sstream>

#include "zdsys/space.hpp"

namespace zdsys {

namespace {

// Shortest word whose repetition gives `period`.
std::vector<int> primitive_root(const std::vector<int>& period) {
  const std::size_t n = period.size();
  for (std::size_t len = 1; len < n; ++len) {
    if (n % len != 0) continue;
    bool ok = true;
    for (std::size_t i = len; i < n && ok; ++i) ok = period[i] == period[i - len];
    if (ok) return {period.begin(), period.begin() + static_cast<std::ptrdiff_t>(len)};
  }
  return period;
}

}  // namespace

Point Point::integer(Index value) {
  Point p;
  p.kind_ = Kind::Integer;
  p.value_ = value;
  return p;
}

Point Point::infinity() {
  Point p;
  p.kind_ = Kind::Infinity;
  return p;
}

Point Point::minus_infinity() {
  Point p;
  p.kind_ = Kind::MinusInfinity;
  return p;
}

Point Point::digits(std::vector<int> prefix, std::vector<int> period) {
  if (period.empty()) {
    throw Error(ErrorCode::InvalidPoint, "digit point needs a nonempty period");
  }
  for (int d : prefix) {
    if (d < 0) throw Error(ErrorCode::InvalidPoint, "negative digit");
  }
  for (int d : period) {
    if (d < 0) throw Error(ErrorCode::InvalidPoint, "negative digit");
  }
  period = primitive_root(period);
  // Absorb trailing prefix digits into the period so equal points compare equal.
  while (!prefix.empty() && prefix.back() == period.back()) {
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
    prefix.pop_back();
  }
  Point p;
  p.kind_ = Kind::Digits;
  p.prefix_ = std::move(prefix);
  p.period_ = std::move(period);
  return p;
}

Point Point::fibered(const Point& fiber_point, Index index) {
  if (fiber_point.kind() == Kind::Fibered || fiber_point.kind() == Kind::Collapsed) {
    throw Error(ErrorCode::InvalidPoint, "nested fibered point");
  }
  Point p;
  p.kind_ = Kind::Fibered;
  p.value_ = index;
  p.fiber_point_ = std::make_shared<const Point>(fiber_point);
  return p;
}

Point Point::collapsed() {
  Point p;
  p.kind_ = Kind::Collapsed;
  return p;
}

const Point& Point::fiber_point() const {
  if (kind_ != Kind::Fibered) throw Error(ErrorCode::InvalidPoint, "not a fibered point");
  return *fiber_point_;
}

int Point::digit(std::size_t i) const {
  if (kind_ != Kind::Digits) throw Error(ErrorCode::InvalidPoint, "not a digit point");
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

std::string Point::to_string() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Integer:
      out << value_;
      break;
    case Kind::Infinity:
      out << "+inf";
      break;
    case Kind::MinusInfinity:
      out << "-inf";
      break;
    case Kind::Digits:
      for (int d : prefix_) out << d;
      out << '(';
      for (int d : period_) out << d;
      out << ")^";
      break;
    case Kind::Fibered:
      out << '(' << fiber_point_->to_string() << ", " << value_ << ')';
      break;
    case Kind::Collapsed:
      out << "*";
      break;
  }
  return out.str();
}

bool Point::operator==(const Point& other) const {
  return (*this <=> other) == std::strong_ordering::equal;
}

std::strong_ordering Point::operator<=>(const Point& other) const {
  if (kind_ != other.kind_) return kind_ <=> other.kind_;
  switch (kind_) {
    case Kind::Integer:
      return value_ <=> other.value_;
    case Kind::Digits:
      if (auto c = prefix_ <=> other.prefix_; c != 0) return c;
      return period_ <=> other.period_;
    case Kind::Fibered:
      if (auto c = value_ <=> other.value_; c != 0) return c;
      return *fiber_point_ <=> *other.fiber_point_;
    default:
      return std::strong_ordering::equal;
  }
}

void validate_point(const SystemSpec& spec, const Point& p) {
  using K = Point::Kind;
  auto bad = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidPoint, "point " + p.to_string() + ": " + why);
  };
  switch (spec.family()) {
    case Family::FiniteCycle:
      if (p.kind() != K::Integer) bad("expected an integer");
      if (p.value() < 0 || p.value() >= spec.period()) bad("outside the cycle");
      break;
    case Family::Odometer:
      if (p.kind() != K::Digits) bad("expected a digit string");
      for (int d : p.prefix()) {
        if (d >= spec.base()) bad("digit exceeds base");
      }
      for (int d : p.period()) {
        if (d >= spec.base()) bad("digit exceeds base");
      }
      break;
    case Family::CompactifiedShift:
      if (p.kind() != K::Integer && p.kind() != K::Infinity) bad("expected an integer or +inf");
      break;
    case Family::TwoPointShift:
      if (p.kind() != K::Integer && p.kind() != K::Infinity && p.kind() != K::MinusInfinity) {
        bad("expected an integer or +-inf");
      }
      break;
    case Family::QuotientProduct:
      if (p.kind() == K::Collapsed) break;
      if (p.kind() != K::Fibered) bad("expected a fibered point or the collapsed point");
      validate_point(spec.fiber(), p.fiber_point());
      break;
  }
}

namespace {

Index floor_div(Index a, Index b) {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Index floor_mod(Index a, Index b) { return a - floor_div(a, b) * b; }

// x + n on an eventually periodic b-adic integer.
Point add_digits(const Point& p, Index n, int base) {
  const std::size_t s = p.prefix().size();
  const std::size_t ell = p.period().size();
  // Unroll until b^m exceeds |n|, landing on a period boundary.
  std::size_t m = s;
  {
    Index mag = n < 0 ? -n : n;
    std::size_t need = 0;
    while (mag > 0) {
      mag /= base;
      ++need;
    }
    while (m < need || m == s) m += ell;
  }
  std::vector<int> digits(m);
  for (std::size_t i = 0; i < m; ++i) digits[i] = p.digit(i);
  Index carry = n;
  for (std::size_t i = 0; i < m; ++i) {
    Index v = digits[i] + carry;
    digits[i] = static_cast<int>(floor_mod(v, base));
    carry = floor_div(v, base);
  }
  std::vector<int> period = p.period();
  if (carry == 0) return Point::digits(std::move(digits), std::move(period));
  const int stop = carry > 0 ? base - 1 : 0;  // digit value that propagates the carry
  const int wrap = carry > 0 ? 0 : base - 1;
  bool all_stop = std::all_of(period.begin(), period.end(), [&](int d) { return d == stop; });
  if (all_stop) return Point::digits(std::move(digits), {wrap});
  std::vector<int> unrolled = period;
  for (int& d : unrolled) {
    if (d == stop) {
      d = wrap;
    } else {
      d += carry > 0 ? 1 : -1;
      break;
    }
  }
  digits.insert(digits.end(), unrolled.begin(), unrolled.end());
  return Point::digits(std::move(digits), std::move(period));
}

}  // namespace

Point apply_h(const SystemSpec& spec, const Point& p, Index n) {
  validate_point(spec, p);
  switch (spec.family()) {
    case Family::FiniteCycle:
      return Point::integer(floor_mod(p.value() + n, spec.period()));
    case Family::Odometer:
      return add_digits(p, n, spec.base());
    case Family::CompactifiedShift:
    case Family::TwoPointShift:
      if (p.kind() == Point::Kind::Integer) return Point::integer(p.value() + n);
      return p;
    case Family::QuotientProduct:
      if (p.kind() == Point::Kind::Collapsed) return p;
      return Point::fibered(apply_h(spec.fiber(), p.fiber_point(), n), p.value());
  }
  return p;
}

std::optional<Index> orbit_offset(const SystemSpec& spec, const Point& from, const Point& to,
                                  Index bound) {
  validate_point(spec, from);
  validate_point(spec, to);
  switch (spec.family()) {
    case Family::FiniteCycle: {
      Index d = floor_mod(to.value() - from.value(), spec.period());
      if (d <= bound) return d;
      return std::nullopt;
    }
    case Family::CompactifiedShift:
    case Family::TwoPointShift:
      if (from.kind() == Point::Kind::Integer && to.kind() == Point::Kind::Integer) {
        Index d = to.value() - from.value();
        if (d <= bound && -d <= bound) return d;
        return std::nullopt;
      }
      if (from == to) return 0;
      return std::nullopt;
    case Family::QuotientProduct:
      if (from.kind() == Point::Kind::Collapsed || to.kind() == Point::Kind::Collapsed) {
        if (from == to) return 0;
        return std::nullopt;
      }
      if (from.value() != to.value()) return std::nullopt;
      return orbit_offset(spec.fiber(), from.fiber_point(), to.fiber_point(), bound);
    case Family::Odometer: {
      // Search outward; the orbit of an odometer point is free.
      Point fwd = from;
      Point back = from;
      if (from == to) return 0;
      for (Index k = 1; k <= bound; ++k) {
        fwd = add_digits(fwd, 1, spec.base());
        if (fwd == to) return k;
        back = add_digits(back, -1, spec.base());
        if (back == to) return -k;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace zdsys
