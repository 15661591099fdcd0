// zdsys: batch front-end over the tower, crossed product, K-theory and
// numeric modules. Exit codes: 0 success, 1 a check failed, 2 an error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "zdsys/commands.hpp"

using namespace zdsys;
using namespace zdsys::cli;
using nlohmann::json;

namespace {

int emit(const RunConfig& c, const json& body) {
  const std::string text = c.format == Format::Json ? body.dump(2) + "\n" : render_text(body);
  if (c.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "zdsys: cannot write " << c.out_path << "\n";
      return 2;
    }
    f << text;
  }
  return body.value("exit_code", 2);
}

json load_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidSpec, "cannot open spec file " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("spec file is not JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tower systems, crossed products and their approximants for zero-dimensional systems"};
  app.require_subcommand(1, 1);

  RunConfig c;
  std::string format = "json";
  for (const char* name : {"tower", "fiberwise", "approximant", "ktheory", "berg", "identities"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--spec", c.spec_path, "system spec file (JSON)")->required();
    sub->add_option("--depth", c.depth, "generating level / number of approximant levels")->capture_default_str();
    sub->add_option("--N", c.N, "tower height lower bound and root order")->capture_default_str();
    sub->add_option("--epsilon", c.epsilon, "Berg target, must exceed pi/N (default pi/N + 0.01)");
    sub->add_option("--max-steps", c.max_steps, "orbit step cap (default derived from the partition)");
    sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    sub->add_option("--out", c.out_path, "write the report here instead of stdout");
    sub->add_option("--tol-identity", c.tolerances.identity, "unitarity / commutation tolerance")->capture_default_str();
    sub->add_option("--tol-bound", c.tolerances.bound, "slack on analytic bounds")->capture_default_str();
    sub->add_option("--tol-norm", c.tolerances.norm, "operator norm accuracy")->capture_default_str();
    if (std::string(name) == "tower") sub->add_option("--base", c.base, "base clopen set as JSON");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_report("", "InvalidArguments", e.what()).dump(2) << "\n";
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  c.format = format == "text" ? Format::Text : Format::Json;
  if (const char* s = std::getenv("ZDSYS_SEED")) c.seed = std::strtoul(s, nullptr, 10);

  try {
    const json file = load_spec(c.spec_path);
    const Outcome outcome = run_command(c, file);
    return emit(c, report(c, file, outcome));
  } catch (const Error& e) {
    std::cerr << "zdsys: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return emit(c, error_report(c.command, std::string(error_code_name(e.code())), e.what()));
  } catch (const std::exception& e) {
    std::cerr << "zdsys: " << e.what() << "\n";
    return emit(c, error_report(c.command, "InvalidSpec", e.what()));
  }
}
