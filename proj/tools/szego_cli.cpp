// Command-line front end; talks to the core library through the C interface
// only.

#include <climits>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "szego/szego_c.h"

using Json = nlohmann::ordered_json;

namespace {

// "re,im;re,im;..." (or bare reals) -> [[re, im], ...]
Json parse_complex_list(const std::string& text) {
  Json arr = Json::array();
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    double re = 0, im = 0;
    size_t comma = part.find(',');
    try {
      if (comma == std::string::npos) {
        re = std::stod(part);
      } else {
        re = std::stod(part.substr(0, comma));
        im = std::stod(part.substr(comma + 1));
      }
    } catch (const std::exception&) {
      throw CLI::ValidationError("expected 're,im' pairs separated by ';', got: " + part);
    }
    arr.push_back(Json::array({re, im}));
  }
  return arr;
}

Json parse_real_list(const std::string& text) {
  Json arr = Json::array();
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    try {
      arr.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw CLI::ValidationError("expected real numbers separated by ';', got: " + part);
    }
  }
  return arr;
}

int write_output(const std::string& path, const char* data) {
  if (!data) return 0;
  if (path.empty() || path == "-") {
    std::cout << data;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file " << path << "\n";
    return 2;
  }
  out << data;
  return 0;
}

struct Managed {
  char* s = nullptr;
  ~Managed() { szg_string_free(s); }
  char** slot() { return &s; }
};

int finish(szg_status st, const Managed& report, const std::string& report_path,
           const Managed& csv, const std::string& csv_path, const Managed& svg,
           const std::string& svg_path) {
  if (st != SZG_OK) {
    std::cerr << "error: " << szg_last_error() << "\n";
    return st == SZG_ERR_PARSE ? 2 : static_cast<int>(st);
  }
  if (int rc = write_output(report_path, report.s)) return rc;
  if (int rc = write_output(csv_path, csv.s)) return rc;
  if (int rc = write_output(svg_path, svg.s)) return rc;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the Szego metric on model domains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(szg_version()));

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: env or hardware)");

  // shared state collected by the subcommands
  std::string config_path, domain_spec, report_path = "-", csv_path, svg_path;
  std::string z_text, v_text, w_text, points_text, levels_text, deltas_text, values_text;
  double tol = -1, duration = -1, horizon = -1, integrator_tol = -1, section_radius = -1;
  int grid = -1, winding = INT_MIN, vertices = -1, max_iter = -1, points_per_level = -1,
      dirs = -1;
  long long seed = -1;

  auto add_common = [&](CLI::App* cmd, bool with_domain = true) {
    cmd->add_option("--config", config_path, "JSON config file (flags override keys)");
    cmd->add_option("--report", report_path, "report output path ('-' = stdout)");
    if (with_domain)
      cmd->add_option("--domain", domain_spec,
                      "domain spec, e.g. ball:n=2 | annulus:r=0.5 | fefferman:...");
  };

  CLI::App* kernel = app.add_subcommand("kernel", "evaluate the Szego kernel");
  add_common(kernel);
  kernel->add_option("--z", z_text, "point, 're,im' pairs joined by ';'");
  kernel->add_option("--w", w_text, "second point (diagonal when omitted)");
  kernel->add_option("--tol", tol, "series truncation tolerance");

  CLI::App* metric = app.add_subcommand("metric", "evaluate the Szego metric tensor");
  add_common(metric);
  metric->add_option("--z", z_text, "point, 're,im' pairs joined by ';'");
  metric->add_option("--grid", grid, "emit a radial CSV grid with this many rows");
  metric->add_option("--csv", csv_path, "CSV output path ('-' = stdout)");

  CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a geodesic");
  add_common(geodesic);
  geodesic->add_option("--z", z_text, "initial position");
  geodesic->add_option("--v", v_text, "initial velocity");
  geodesic->add_option("--duration", duration, "integration time");
  geodesic->add_option("--tol", tol, "integration tolerance");
  geodesic->add_option("--csv", csv_path, "trace CSV output path");
  geodesic->add_option("--svg", svg_path, "SVG plot output path");

  CLI::App* shorten = app.add_subcommand("loop-shorten", "Birkhoff curve shortening");
  add_common(shorten);
  shorten->add_option("--points", points_text, "explicit loop vertices");
  shorten->add_option("--winding", winding, "winding class for the random loop");
  shorten->add_option("--vertices", vertices, "vertex count for the random loop");
  shorten->add_option("--seed", seed, "random seed");
  shorten->add_option("--max-iter", max_iter, "iteration cap");
  shorten->add_option("--tol", tol, "vertex-motion stopping tolerance");
  shorten->add_option("--svg", svg_path, "SVG plot of the final loop");

  CLI::App* repulsion = app.add_subcommand("repulsion-scan", "boundary repulsion certification");
  add_common(repulsion);
  repulsion->add_option("--levels", levels_text, "rho levels joined by ';'");
  repulsion->add_option("--points", points_per_level, "sample points per level");
  repulsion->add_option("--dirs", dirs, "tangential directions per point");
  repulsion->add_option("--seed", seed, "random seed");

  CLI::App* ratefit = app.add_subcommand("rate-fit", "log-log asymptotic rate fit");
  add_common(ratefit, false);
  ratefit->add_option("--deltas", deltas_text, "boundary distances joined by ';'");
  ratefit->add_option("--values", values_text, "quantity samples joined by ';'");

  CLI::App* classify = app.add_subcommand("classify", "classify an annulus geodesic");
  add_common(classify);
  classify->add_option("--z", z_text, "initial position");
  classify->add_option("--v", v_text, "initial velocity");
  classify->add_option("--horizon", horizon, "arc-length horizon");
  classify->add_option("--tol", tol, "recurrence tolerance");
  classify->add_option("--integrator-tol", integrator_tol, "integration tolerance");
  classify->add_option("--section", section_radius, "section circle radius");
  classify->add_option("--svg", svg_path, "SVG plot with section overlay");

  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in smoke suite");
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  if (threads > 0) szg_set_threads(threads);

  Json cfg = Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return 2;
    }
    cfg = Json::parse(in, nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object()) {
      std::cerr << "error: config file must hold a JSON object\n";
      return 2;
    }
  }

  try {
    if (!domain_spec.empty()) cfg["domain"] = domain_spec;
    if (!z_text.empty()) cfg["z"] = parse_complex_list(z_text);
    if (!v_text.empty()) cfg["v"] = parse_complex_list(v_text);
    if (!w_text.empty()) cfg["w"] = parse_complex_list(w_text);
    if (!points_text.empty()) cfg["points"] = parse_complex_list(points_text);
    if (!levels_text.empty()) cfg["levels"] = parse_real_list(levels_text);
    if (!deltas_text.empty()) cfg["deltas"] = parse_real_list(deltas_text);
    if (!values_text.empty()) cfg["values"] = parse_real_list(values_text);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  }
  if (tol >= 0) cfg["tol"] = tol;
  if (duration >= 0) cfg["duration"] = duration;
  if (horizon >= 0) cfg["horizon"] = horizon;
  if (integrator_tol >= 0) cfg["integrator_tol"] = integrator_tol;
  if (section_radius >= 0) cfg["section_radius"] = section_radius;
  if (grid >= 0) cfg["grid"] = grid;
  if (winding != INT_MIN) cfg["winding"] = winding;
  if (vertices >= 0) cfg["vertices"] = vertices;
  if (max_iter >= 0) cfg["max_iter"] = max_iter;
  if (points_per_level >= 0) cfg["points_per_level"] = points_per_level;
  if (dirs >= 0) cfg["directions_per_point"] = dirs;
  if (seed >= 0) cfg["seed"] = seed;

  std::string cfg_text = cfg.dump();
  Managed report, csv, svg;
  szg_status st = SZG_OK;

  if (kernel->parsed()) {
    st = szg_cmd_kernel(cfg_text.c_str(), report.slot());
  } else if (metric->parsed()) {
    st = szg_cmd_metric(cfg_text.c_str(), report.slot(),
                        cfg.contains("grid") ? csv.slot() : nullptr);
    if (cfg.contains("grid") && csv_path.empty()) csv_path = "-";
  } else if (geodesic->parsed()) {
    st = szg_cmd_geodesic(cfg_text.c_str(), report.slot(),
                          csv_path.empty() ? nullptr : csv.slot(),
                          svg_path.empty() ? nullptr : svg.slot());
  } else if (shorten->parsed()) {
    st = szg_cmd_loop_shorten(cfg_text.c_str(), report.slot(),
                              svg_path.empty() ? nullptr : svg.slot());
  } else if (repulsion->parsed()) {
    st = szg_cmd_repulsion_scan(cfg_text.c_str(), report.slot());
  } else if (ratefit->parsed()) {
    st = szg_cmd_rate_fit(cfg_text.c_str(), report.slot());
  } else if (classify->parsed()) {
    st = szg_cmd_classify(cfg_text.c_str(), report.slot(),
                          svg_path.empty() ? nullptr : svg.slot());
  } else if (selftest->parsed()) {
    st = szg_cmd_selftest(report.slot());
  }

  return finish(st, report, report_path, csv, csv_path, svg, svg_path);
}
