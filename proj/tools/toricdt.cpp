#include <iostream>

#include <CLI11.hpp>

#include "toricdt/cli.hpp"

int main(int argc, char** argv) {
  toricdt::RunConfig config;
  std::string format = "table";
  CLI::App app{"Decomposition-theorem summand tables for proper toric maps"};
  app.add_option("command", config.command, "validate | gpoly | ih | check | stein | decompose | verify")
      ->required()
      ->check(CLI::IsMember({"validate", "gpoly", "ih", "check", "stein", "decompose", "verify"}));
  app.add_option("inputs", config.inputs, "fan, map or summand-table JSON file")->required();
  app.add_option("--p", config.p, "characteristic of the finite field");
  app.add_option("--qs", config.qs, "comma-separated field sizes");
  app.add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--out", config.out, "output file (directory for stein)");
  app.add_option("--cone", config.cone, "comma-separated ray indices of a cone");
  app.add_flag("--projective", config.projective, "treat the map as projective for hard Lefschetz");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  config.format = format == "json" ? toricdt::OutputFormat::json : toricdt::OutputFormat::table;
  return toricdt::run(config, std::cout, std::cerr);
}
