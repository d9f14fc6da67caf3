#include "szego/szego_c.h"

#include <cstring>

#include "szego/report.hpp"
#include "szego/selftest.hpp"

using namespace szego;

struct szg_domain {
  Domain domain;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** slot, const std::string& s) {
  if (slot) *slot = dup_string(s);
}

template <typename F>
szg_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SZG_OK;
  } catch (const ParseError& e) {
    g_last_error = e.what();
    return SZG_ERR_PARSE;
  } catch (const PreconditionError& e) {
    g_last_error = e.what();
    return SZG_ERR_ARGUMENT;
  } catch (const NumericalError& e) {
    g_last_error = e.what();
    return SZG_ERR_NUMERICAL;
  } catch (const Error& e) {
    g_last_error = e.what();
    return SZG_ERR_NUMERICAL;
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return SZG_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SZG_ERR_NUMERICAL;
  }
}

Json parse_config(const char* text) {
  if (!text) throw ParseError("null config");
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("config must be a JSON object");
  return j;
}

Domain domain_from_config(const Json& cfg) {
  if (!cfg.contains("domain")) throw ParseError("config key 'domain' is required");
  const Json& d = cfg.at("domain");
  return Domain::from_spec(d.is_string() ? d.get<std::string>() : d.dump());
}

CVector cvector_from_json(const Json& arr, int n, const char* what) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != n)
    throw ParseError(std::string(what) + " must be an array of length n");
  CVector out(n);
  for (int j = 0; j < n; ++j) {
    const Json& e = arr.at(j);
    if (e.is_number()) {
      out[j] = e.get<double>();
    } else if (e.is_array() && e.size() == 2) {
      out[j] = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    } else {
      throw ParseError(std::string(what) + " entries must be numbers or [re, im] pairs");
    }
  }
  return out;
}

double get_or(const Json& cfg, const char* key, double fallback) {
  return cfg.contains(key) ? cfg.at(key).get<double>() : fallback;
}

CVector unpack_z(const double* z, int n) {
  CVector out(n);
  for (int j = 0; j < n; ++j) out[j] = Complex(z[2 * j], z[2 * j + 1]);
  return out;
}

}  // namespace

extern "C" {

const char* szg_version(void) { return kVersion; }

const char* szg_last_error(void) { return g_last_error.c_str(); }

void szg_string_free(char* s) { std::free(s); }

void szg_set_threads(int n) { set_worker_threads(n); }

szg_status szg_domain_create(const char* spec, szg_domain** out) {
  return guarded([&] {
    if (!spec || !out) throw PreconditionError("null argument");
    *out = new szg_domain{Domain::from_spec(spec)};
  });
}

void szg_domain_destroy(szg_domain* d) { delete d; }

int szg_domain_dim(const szg_domain* d) { return d ? d->domain.dim() : 0; }

szg_status szg_kernel_diagonal(const szg_domain* d, const double* z, double tol,
                               double* value_re, double* value_im, double* tail_bound,
                               int* terms_used) {
  return guarded([&] {
    if (!d || !z) throw PreconditionError("null argument");
    KernelValue kv = kernel_diagonal(d->domain, unpack_z(z, d->domain.dim()), tol);
    if (value_re) *value_re = kv.value.real();
    if (value_im) *value_im = kv.value.imag();
    if (tail_bound) *tail_bound = kv.truncation_error_bound;
    if (terms_used) *terms_used = kv.terms_used;
  });
}

szg_status szg_metric(const szg_domain* d, const double* z, double* g_out) {
  return guarded([&] {
    if (!d || !z || !g_out) throw PreconditionError("null argument");
    int n = d->domain.dim();
    HermitianForm f = szego_metric(d->domain, unpack_z(z, n));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        g_out[2 * (j * n + k)] = f.g(j, k).real();
        g_out[2 * (j * n + k) + 1] = f.g(j, k).imag();
      }
  });
}

szg_status szg_geodesic_endpoint(const szg_domain* d, const double* z, const double* v,
                                 double T, double tol, double* z_out, double* v_out) {
  return guarded([&] {
    if (!d || !z || !v || !z_out || !v_out) throw PreconditionError("null argument");
    int n = d->domain.dim();
    GeodesicState s0{unpack_z(z, n), unpack_z(v, n)};
    GeodesicState s1 = geodesic_state_at(d->domain, s0, T, tol);
    for (int j = 0; j < n; ++j) {
      z_out[2 * j] = s1.z[j].real();
      z_out[2 * j + 1] = s1.z[j].imag();
      v_out[2 * j] = s1.v[j].real();
      v_out[2 * j + 1] = s1.v[j].imag();
    }
  });
}

szg_status szg_cmd_kernel(const char* config_json, char** report_json) {
  return guarded([&] {
    Json cfg = parse_config(config_json);
    Domain domain = domain_from_config(cfg);
    int n = domain.dim();
    double tol = get_or(cfg, "tol", 1e-12);
    CVector z = cvector_from_json(cfg.at("z"), n, "z");
    KernelValue kv;
    if (cfg.contains("w")) {
      CVector w = cvector_from_json(cfg.at("w"), n, "w");
      if (domain.kind() == Domain::Kind::Ball)
        kv = szego_ball(z, w, n);
      else if (domain.kind() == Domain::Kind::Annulus)
        kv = szego_annulus(z[0], w[0], domain.inner_radius(), tol);
      else
        throw PreconditionError("off-diagonal evaluation is limited to ball and annulus");
      cfg["w"] = json_cvector(w);
    } else {
      kv = kernel_diagonal(domain, z, tol);
    }
    cfg["z"] = json_cvector(z);
    cfg["tol"] = tol;
    emit(report_json, make_report(cfg, to_json(kv)).dump(2) + "\n");
  });
}

szg_status szg_cmd_metric(const char* config_json, char** report_json, char** table_csv) {
  return guarded([&] {
    Json cfg = parse_config(config_json);
    Domain domain = domain_from_config(cfg);
    int n = domain.dim();
    if (cfg.contains("grid")) {
      int grid = cfg.at("grid").get<int>();
      emit(table_csv, metric_grid_csv(domain, grid));
      emit(report_json, make_report(cfg, Json{{"grid_rows", grid}}).dump(2) + "\n");
      return;
    }
    CVector z = cvector_from_json(cfg.at("z"), n, "z");
    cfg["z"] = json_cvector(z);
    HermitianForm f = szego_metric(domain, z);
    Json payload = to_json(f);
    if (domain.kind() == Domain::Kind::Fefferman)
      payload["levi_quantities"] = to_json(levi_quantities(domain, z));
    emit(report_json, make_report(cfg, payload).dump(2) + "\n");
  });
}

szg_status szg_cmd_geodesic(const char* config_json, char** report_json, char** trace_csv_out,
                            char** plot_svg) {
  return guarded([&] {
    Json cfg = parse_config(config_json);
    Domain domain = domain_from_config(cfg);
    int n = domain.dim();
    CVector z = cvector_from_json(cfg.at("z"), n, "z");
    CVector v = cvector_from_json(cfg.at("v"), n, "v");
    double T = get_or(cfg, "duration", 10.0);
    double tol = get_or(cfg, "tol", 1e-9);
    cfg["z"] = json_cvector(z);
    cfg["v"] = json_cvector(v);
    cfg["duration"] = T;
    cfg["tol"] = tol;
    GeodesicTrace trace = integrate_geodesic(domain, {z, v}, T, tol);
    emit(report_json, make_report(cfg, trace_summary(trace)).dump(2) + "\n");
    emit(trace_csv_out, trace_csv(trace, n));
    if (plot_svg) emit(plot_svg, render_svg_trace(domain, trace));
  });
}

szg_status szg_cmd_loop_shorten(const char* config_json, char** report_json, char** plot_svg) {
  return guarded([&] {
    Json cfg = parse_config(config_json);
    Domain domain = domain_from_config(cfg);
    LoopPath loop;
    if (cfg.contains("points")) {
      loop.points =
          cvector_from_json(cfg.at("points"), static_cast<int>(cfg.at("points").size()), "points");
      loop.winding = cfg.contains("winding") ? cfg.at("winding").get<int>() : loop_winding(loop);
    } else {
      int winding = cfg.contains("winding") ? cfg.at("winding").get<int>() : 1;
      int vertices = cfg.contains("vertices") ? cfg.at("vertices").get<int>() : 64;
      uint64_t seed = cfg.contains("seed") ? cfg.at("seed").get<uint64_t>() : 2024;
      loop = random_loop(domain, winding, vertices, seed);
      cfg["winding"] = winding;
      cfg["vertices"] = vertices;
      cfg["seed"] = seed;
    }
    int max_iter = cfg.contains("max_iter") ? cfg.at("max_iter").get<int>() : 5000;
    double tol = get_or(cfg, "tol", 1e-10);
    cfg["points"] = json_cvector(loop.points);
    cfg["max_iter"] = max_iter;
    cfg["tol"] = tol;
    ShortenResult result = birkhoff_shorten(domain, loop, max_iter, tol);
    emit(report_json, make_report(cfg, to_json(result)).dump(2) + "\n");
    if (plot_svg) emit(plot_svg, render_svg(domain, result.loop.points, true));
  });
}

szg_status szg_cmd_repulsion_scan(const char* config_json, char** report_json) {
  return guarded([&] {
    Json cfg = parse_config(config_json);
    Domain domain = domain_from_config(cfg);
    if (!cfg.contains("levels")) throw ParseError("config key 'levels' is required");
    std::vector<double> levels = cfg.at("levels").get<std::vector<double>>();
    RepulsionScanOptions opts;
    if (cfg.contains("points_per_level")) opts.points_per_level = cfg.at("points_per_level");
    if (cfg.contains("directions_per_point"))
      opts.directions_per_point = cfg.at("directions_per_point");
    if (cfg.contains("seed")) opts.seed = cfg.at("seed").get<uint64_t>();
    cfg["points_per_level"] = opts.points_per_level;
    cfg["directions_per_point"] = opts.directions_per_point;
    cfg["seed"] = opts.seed;
    RepulsionReport report = boundary_repulsion_scan(domain, levels, opts);
    emit(report_json, make_report(cfg, to_json(report)).dump(2) + "\n");
  });
}

szg_status szg_cmd_rate_fit(const char* config_json, char** report_json) {
  return guarded([&] {
    Json cfg = parse_config(config_json);
    if (!cfg.contains("deltas") || !cfg.contains("values"))
      throw ParseError("config keys 'deltas' and 'values' are required");
    std::vector<double> deltas = cfg.at("deltas").get<std::vector<double>>();
    std::vector<double> values = cfg.at("values").get<std::vector<double>>();
    RateFit fit = rate_fit(deltas, values);
    emit(report_json, make_report(cfg, to_json(fit)).dump(2) + "\n");
  });
}

szg_status szg_cmd_classify(const char* config_json, char** report_json, char** plot_svg) {
  return guarded([&] {
    Json cfg = parse_config(config_json);
    Domain domain = domain_from_config(cfg);
    int n = domain.dim();
    CVector z = cvector_from_json(cfg.at("z"), n, "z");
    CVector v = cvector_from_json(cfg.at("v"), n, "v");
    ClassifyOptions opts;
    opts.section_radius = get_or(cfg, "section_radius", 0.0);
    opts.horizon = get_or(cfg, "horizon", 100.0);
    opts.tol = get_or(cfg, "tol", 1e-4);
    opts.integrator_tol = get_or(cfg, "integrator_tol", 1e-10);
    cfg["z"] = json_cvector(z);
    cfg["v"] = json_cvector(v);
    cfg["horizon"] = opts.horizon;
    cfg["tol"] = opts.tol;
    cfg["integrator_tol"] = opts.integrator_tol;

    double speed = szego_metric(domain, z).length(v);
    if (!(speed > 0)) throw PreconditionError("zero initial velocity");
    double T = 1.2 * opts.horizon / speed;
    GeodesicTrace trace = integrate_geodesic(domain, {z, v}, T, opts.integrator_tol);
    ClassifyReport report = classify_geodesic(domain, trace, opts);
    emit(report_json, make_report(cfg, to_json(report)).dump(2) + "\n");
    if (plot_svg) {
      double section =
          opts.section_radius > 0 ? opts.section_radius : std::sqrt(domain.inner_radius());
      emit(plot_svg, render_svg_trace(domain, trace, section));
    }
  });
}

szg_status szg_cmd_selftest(char** report_json) {
  return guarded([&] {
    Json result = run_selftest();
    emit(report_json, make_report(Json::object(), result).dump(2) + "\n");
    if (result.at("failed").get<int>() != 0) throw NumericalError("selftest failures");
  });
}

}  // extern "C"
