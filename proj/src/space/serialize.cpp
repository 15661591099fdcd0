#include "zdsys/space.hpp"

namespace zdsys {

using nlohmann::json;

namespace {

[[noreturn]] void bad_json(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_json(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad_json(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const SystemSpec& spec) {
  json params = json::object();
  switch (spec.family()) {
    case Family::FiniteCycle: params["period"] = spec.period(); break;
    case Family::Odometer: params["base"] = spec.base(); break;
    case Family::QuotientProduct: params["fiber"] = to_json(spec.fiber()); break;
    default: break;
  }
  return json{{"family", std::string(family_name(spec.family()))}, {"params", params}};
}

SystemSpec spec_from_json(const json& j) {
  const auto family = field<std::string>(j, "family");
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (family == "finite_cycle") return SystemSpec::finite_cycle(field<Index>(params, "period"));
  if (family == "odometer") {
    return SystemSpec::odometer(params.contains("base") ? field<int>(params, "base") : 2);
  }
  if (family == "compactified_shift") return SystemSpec::compactified_shift();
  if (family == "two_point_shift") return SystemSpec::two_point_shift();
  if (family == "quotient_product") {
    if (!params.contains("fiber")) bad_json("quotient_product needs params.fiber");
    return SystemSpec::quotient_product(spec_from_json(params.at("fiber")));
  }
  bad_json("unknown family '" + family + "'");
}

json to_json(const ClopenSet& set) {
  return std::visit(
      [&](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ClopenSet::Cycle>) {
          return json{{"members", f.members}};
        } else if constexpr (std::is_same_v<T, ClopenSet::Odometer>) {
          return json{{"words", set.words()}};
        } else if constexpr (std::is_same_v<T, ClopenSet::Shift>) {
          return json{{"F", f.exceptions}, {"cofinite", f.cofinite}};
        } else if constexpr (std::is_same_v<T, ClopenSet::TwoPoint>) {
          return json{{"F", f.exceptions}, {"left", f.left}, {"right", f.right}};
        } else {
          json slices = json::array();
          for (const auto& s : f.slices) slices.push_back(to_json(s));
          const Index hi = f.lo + static_cast<Index>(f.slices.size()) - 1;
          return json{{"lo", f.lo}, {"hi", hi}, {"slices", slices}, {"tail", f.tail}};
        }
      },
      set.form());
}

ClopenSet clopen_from_json(const SystemSpec& spec, const json& j) {
  switch (spec.family()) {
    case Family::FiniteCycle:
      return ClopenSet::cycle(spec, field<std::vector<Index>>(j, "members"));
    case Family::Odometer:
      return ClopenSet::cylinders(spec, field<std::vector<std::vector<int>>>(j, "words"));
    case Family::CompactifiedShift:
      return ClopenSet::shift(spec, field<std::vector<Index>>(j, "F"),
                              j.contains("cofinite") && field<bool>(j, "cofinite"));
    case Family::TwoPointShift:
      return ClopenSet::two_point(spec, field<std::vector<Index>>(j, "F"),
                                  j.contains("left") && field<bool>(j, "left"),
                                  j.contains("right") && field<bool>(j, "right"));
    case Family::QuotientProduct: {
      std::vector<ClopenSet> slices;
      const json arr = j.contains("slices") ? j.at("slices") : json::array();
      for (const auto& s : arr) slices.push_back(clopen_from_json(spec.fiber(), s));
      const Index lo = j.contains("lo") ? field<Index>(j, "lo") : 0;
      if (j.contains("hi") && field<Index>(j, "hi") != lo + static_cast<Index>(slices.size()) - 1) {
        bad_json("product window [lo, hi] does not match the number of slices");
      }
      return ClopenSet::product(spec, lo, std::move(slices), j.contains("tail") && field<bool>(j, "tail"));
    }
  }
  bad_json("unknown family");
}

json to_json(const Point& p) {
  switch (p.kind()) {
    case Point::Kind::Integer: return p.value();
    case Point::Kind::Infinity: return "+inf";
    case Point::Kind::MinusInfinity: return "-inf";
    case Point::Kind::Collapsed: return "collapsed";
    case Point::Kind::Digits: return json{{"prefix", p.prefix()}, {"period", p.period()}};
    case Point::Kind::Fibered: return json{{"fiber", to_json(p.fiber_point())}, {"index", p.value()}};
  }
  return nullptr;
}

Point point_from_json(const json& j) {
  if (j.is_number_integer()) return Point::integer(j.get<Index>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return Point::infinity();
    if (s == "-inf") return Point::minus_infinity();
    if (s == "collapsed") return Point::collapsed();
    throw Error(ErrorCode::InvalidPoint, "unknown point name '" + s + "'");
  }
  if (j.is_object() && j.contains("period")) {
    return Point::digits(j.contains("prefix") ? field<std::vector<int>>(j, "prefix") : std::vector<int>{},
                         field<std::vector<int>>(j, "period"));
  }
  if (j.is_object() && j.contains("fiber")) {
    return Point::fibered(point_from_json(j.at("fiber")), field<Index>(j, "index"));
  }
  throw Error(ErrorCode::InvalidPoint, "unrecognized point " + j.dump());
}

json to_json(const Partition& p) {
  json out = json::array();
  for (const auto& e : p) out.push_back(to_json(e));
  return out;
}

Partition partition_from_json(const SystemSpec& spec, const json& j) {
  if (!j.is_array()) bad_json("partition must be an array of sets");
  std::vector<ClopenSet> out;
  for (const auto& e : j) out.push_back(clopen_from_json(spec, e));
  return Partition(std::move(out));
}

}  // namespace zdsys
