#include <sstream>

#include "zdsys/commands.hpp"

namespace zdsys::cli {

using nlohmann::json;

namespace {

void tower_text(std::ostream& out, const json& r) {
  out << "T = " << r["T"] << ", K = " << r["K"].dump() << ", return times " << r["return_times"].dump() << "\n";
  for (const auto& c : r["validation"]["conditions"]) {
    out << "  (" << c["condition"].get<std::string>() << ") " << (c["pass"].get<bool>() ? "ok" : "FAILS");
    if (!c["witness"].is_null()) out << "  witness " << c["witness"].dump();
    out << "\n";
  }
  if (r.contains("P1_size")) out << "|P1(S)| = " << r["P1_size"] << "\n";
}

void fiberwise_text(std::ostream& out, const json& r) {
  out << "fiberwise essentially minimal: " << (r["verdict"].get<bool>() ? "yes" : "no") << " (depth "
      << r["depth"] << ")\n";
  if (!r["failure_witness"].is_null()) {
    out << "  level " << r["failure_witness"]["level"] << ": " << r["failure_witness"]["reason"].get<std::string>()
        << "\n";
  }
}

void approximant_text(std::ostream& out, const json& r) {
  for (const auto& l : r["levels"]) out << "level " << l["level"] << ": " << l["algebra"].get<std::string>() << "\n";
  for (const auto& i : r["inclusions"]) {
    out << "  " << i["from"] << " -> " << i["to"] << ": "
        << (i["nested"].get<bool>() ? i["multiplicities"].dump() : std::string("not nested")) << "\n";
  }
}

void ktheory_text(std::ostream& out, const json& r) {
  for (const auto& l : r["levels"]) {
    out << "level " << l["level"] << ": K1 = Z^" << l["k1"]["rank"] << ", K0 = Z^" << l["k0"]["rank"];
    for (const auto& t : l["k0"]["torsion"]) out << " + Z/" << t.get<std::string>();
    out << "\n";
  }
}

void berg_text(std::ostream& out, const json& r) {
  out << "N = " << r["N"] << ", epsilon = " << r["epsilon"] << "\n"
      << "  ||u' - u|| = " << r["norm_u_prime_minus_u"] << "  (pi/N = " << r["bound"] << ")\n"
      << "  ||w - 1|| = " << r["norm_w_minus_1"] << "\n"
      << "  z unitary: " << r["z_unitary"] << ", commutes with C(P): " << r["z_commutes"] << "\n"
      << "  cut-down estimate holds: " << r["cutdown"]["holds"] << "\n"
      << (r["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
}

void identities_text(std::ostream& out, const json& r) {
  for (const auto& i : r["identities"]) {
    out << (i["pass"].get<bool>() ? "  ok    " : "  FAIL  ") << i["name"].get<std::string>();
    if (!i["pass"].get<bool>()) out << "  " << i["detail"].get<std::string>();
    out << "\n";
  }
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream out;
  const std::string command = report.value("command", "");
  if (report.contains("error")) {
    out << "error " << report["error"]["code"].get<std::string>() << ": "
        << report["error"]["message"].get<std::string>() << "\n";
    return out.str();
  }
  out << "zdsys " << command << " (schema " << report["schema_version"].get<std::string>() << ")\n";
  const json& r = report["result"];
  if (command == "tower") tower_text(out, r);
  else if (command == "fiberwise") fiberwise_text(out, r);
  else if (command == "approximant") approximant_text(out, r);
  else if (command == "ktheory") ktheory_text(out, r);
  else if (command == "berg") berg_text(out, r);
  else if (command == "identities") identities_text(out, r);
  return out.str();
}

}  // namespace zdsys::cli
