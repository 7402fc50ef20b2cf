// Command-line front end: loads a JSON experiment config, drives the
// library through its C interface, and emits CSV/JSON result files.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qls/qls.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void fatal(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(1);
}

void check(qls_status st, const std::string& context) {
  if (st != QLS_OK) {
    std::string detail = qls_last_error_message();
    if (detail.empty()) detail = qls_strerror(st);
    fatal(context + ": " + detail);
  }
}

json soft_error(qls_status st) {
  return json{{"status", static_cast<int>(st)},
              {"code", qls_strerror(st)},
              {"message", qls_last_error_message()}};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------- config access ----------------

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fatal("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fatal("config file '" + path + "': " + e.what());
  }
}

const json& field(const json& root, const std::string& dotted) {
  const json* cur = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (!cur->is_object() || !cur->contains(key)) {
      fatal("config field '" + dotted + "' is missing");
    }
    cur = &(*cur)[key];
    if (dot == std::string::npos) return *cur;
    start = dot + 1;
  }
}

double number_field(const json& root, const std::string& dotted) {
  const json& j = field(root, dotted);
  if (!j.is_number()) fatal("config field '" + dotted + "' must be a number");
  return j.get<double>();
}

long long integer_field(const json& root, const std::string& dotted) {
  const json& j = field(root, dotted);
  if (!j.is_number_integer()) {
    fatal("config field '" + dotted + "' must be an integer");
  }
  return j.get<long long>();
}

bool bool_field(const json& root, const std::string& dotted,
                bool fallback) {
  if (!root.contains(dotted) &&
      dotted.find('.') == std::string::npos) {
    return fallback;
  }
  const json* cur = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (!cur->is_object() || !cur->contains(key)) return fallback;
    cur = &(*cur)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!cur->is_boolean()) {
    fatal("config field '" + dotted + "' must be a boolean");
  }
  return cur->get<bool>();
}

std::vector<double> number_list(const json& root, const std::string& dotted) {
  const json& j = field(root, dotted);
  if (!j.is_array()) fatal("config field '" + dotted + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) {
      fatal("config field '" + dotted + "' must hold numbers only");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

qls_rational rational_field(const json& root, const std::string& dotted) {
  const json& j = field(root, dotted);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    fatal("config field '" + dotted +
          "' must be a [numerator, denominator] integer pair");
  }
  return qls_rational{j[0].get<long long>(), j[1].get<long long>()};
}

// ---------------- output plumbing ----------------

struct Output {
  fs::path dir;
  std::string format;  // "csv" or "json"
};

Output resolve_output(const json& config, const std::string& flag_dir,
                      const std::string& flag_format) {
  Output out;
  if (!flag_dir.empty()) {
    out.dir = flag_dir;
  } else if (config.contains("output") && config["output"].contains("dir")) {
    out.dir = config["output"]["dir"].get<std::string>();
  } else if (const char* env = std::getenv("QLS_OUT"); env != nullptr) {
    out.dir = env;
  } else {
    out.dir = ".";
  }
  if (!flag_format.empty()) {
    out.format = flag_format;
  } else if (config.contains("output") &&
             config["output"].contains("format")) {
    out.format = config["output"]["format"].get<std::string>();
  } else {
    out.format = "csv";
  }
  if (out.format != "csv" && out.format != "json") {
    fatal("output format must be csv or json, got '" + out.format + "'");
  }
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) fatal("cannot create output directory '" + out.dir.string() + "'");
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fatal("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f.good()) fatal("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fatal("cannot move '" + tmp.string() + "' into place");
}

// Tabular data rendered to either format; every double printed with 17
// significant digits so repeated runs are byte-identical and lossless.
struct Table {
  std::vector<std::string> columns;
  std::vector<json> rows;  // each row is a json array matching columns
};

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt17(v.get<double>());
  return v.dump();
}

std::string render_table_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    out += t.columns[c];
    out += c + 1 < t.columns.size() ? ',' : '\n';
  }
  for (const json& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += cell_text(row[c]);
      out += c + 1 < row.size() ? ',' : '\n';
    }
  }
  return out;
}

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

// Writes a table with the configured format; returns the file name used.
std::string write_table(const Output& out, const std::string& stem,
                        const Table& t) {
  if (out.format == "csv") {
    const std::string name = stem + ".csv";
    write_file(out.dir / name, render_table_csv(t));
    return name;
  }
  json doc{{"schema_version", kSchemaVersion},
           {"columns", t.columns},
           {"rows", t.rows}};
  const std::string name = stem + ".json";
  write_file(out.dir / name, render_json(doc));
  return name;
}

// ---------------- shared pieces ----------------

struct ConicHandle {
  qls_conic* ptr = nullptr;
  ~ConicHandle() { qls_conic_destroy(ptr); }
};

struct FieldHandle {
  qls_field* ptr = nullptr;
  ~FieldHandle() { qls_field_destroy(ptr); }
};

struct PolylinesHandle {
  qls_polylines* ptr = nullptr;
  ~PolylinesHandle() { qls_polylines_destroy(ptr); }
};

std::vector<double> spectrum_from_config(const json& config) {
  std::vector<double> spectrum = number_list(config, "spectrum");
  if (spectrum.size() != 3) {
    fatal("config field 'spectrum' must hold exactly three eigenvalues");
  }
  return spectrum;
}

json matrix3_json(const double m[9]) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    rows.push_back(json::array({m[3 * r], m[3 * r + 1], m[3 * r + 2]}));
  }
  return rows;
}

double apply3_deviation(const double m[9], const double in[3],
                        const double expect[3]) {
  double worst = 0.0;
  for (int r = 0; r < 3; ++r) {
    const double v =
        m[3 * r] * in[0] + m[3 * r + 1] * in[1] + m[3 * r + 2] * in[2];
    worst = std::max(worst, std::abs(v - expect[r]));
  }
  return worst;
}

// ---------------- contours ----------------

int run_contours(const json& config, const Output& out) {
  const std::vector<double> spectrum = spectrum_from_config(config);
  const json& targets_json = field(config, "contour_targets");
  if (!targets_json.is_array()) {
    fatal("config field 'contour_targets' must be an array");
  }
  const long long count_req = integer_field(config, "sample_count");
  if (count_req < 3) fatal("config field 'sample_count' must be at least 3");
  const auto count = static_cast<std::size_t>(count_req);

  json entries = json::array();
  for (std::size_t k = 0; k < targets_json.size(); ++k) {
    if (!targets_json[k].is_number()) {
      fatal("config field 'contour_targets' must hold numbers only");
    }
    const double target = targets_json[k].get<double>();
    json entry{{"index", k}, {"target", target}};

    ConicHandle conic;
    qls_status st = qls_energy_contour(spectrum.data(), target, &conic.ptr);
    if (st != QLS_OK) {
      entry["error"] = soft_error(st);
      entries.push_back(entry);
      continue;
    }

    double q11, q12, q22, semi_a, semi_b, angle;
    check(qls_conic_coeffs(conic.ptr, &q11, &q12, &q22), "contour coeffs");
    check(qls_conic_axes(conic.ptr, &semi_a, &semi_b, &angle),
          "contour axes");

    std::vector<double> thetas(count), points(3 * count);
    std::size_t kept = 0, dropped = 0;
    check(qls_sample_contour(conic.ptr, count, thetas.data(), points.data(),
                             &kept, &dropped),
          "contour sampling");

    Table table{{"theta", "a1", "a2", "a3"}, {}};
    for (std::size_t s = 0; s < kept; ++s) {
      const double* a = &points[3 * s];
      // Re-validate before writing: membership and expectation value.
      double residual = 0.0, energy = 0.0;
      check(qls_conic_residual(conic.ptr, a[0], a[1], &residual),
            "membership check");
      check(qls_expectation_energy(a, spectrum.data(), 3, &energy),
            "expectation check");
      if (std::abs(residual) > 1e-10 || std::abs(energy - target) > 1e-10) {
        fatal("sampled contour point failed re-validation");
      }
      table.rows.push_back(json::array({thetas[s], a[0], a[1], a[2]}));
    }
    const std::string file =
        write_table(out, "contour_" + std::to_string(k), table);

    entry["file"] = file;
    entry["quad"] = json{{"q11", q11}, {"q22", q22}};
    entry["semi_axes"] = json{{"a", semi_a}, {"b", semi_b}};
    entry["kept"] = kept;
    entry["dropped"] = dropped;
    entries.push_back(entry);
  }

  json summary{{"schema_version", kSchemaVersion},
               {"command", "contours"},
               {"spectrum", spectrum},
               {"sample_count", count},
               {"entries", entries}};
  write_file(out.dir / "summary.json", render_json(summary));
  return 0;
}

// ---------------- protocol ----------------

int run_protocol(const json& config, const Output& out,
                 const std::string& mode) {
  const std::vector<double> spectrum = spectrum_from_config(config);
  const std::vector<double> targets = number_list(config, "contour_targets");
  if (targets.size() < 2) {
    fatal("protocol needs two contour_targets entries: source, destination");
  }
  const double source_target = targets[0];
  const double dest_target = targets[1];
  const long long count_req = integer_field(config, "sample_count");
  if (count_req < 3) fatal("config field 'sample_count' must be at least 3");
  const auto count = static_cast<std::size_t>(count_req);
  const double anchor_angle = number_field(config, "anchor_angle");

  ConicHandle source, dest;
  check(qls_energy_contour(spectrum.data(), source_target, &source.ptr),
        "source contour");
  check(qls_energy_contour(spectrum.data(), dest_target, &dest.ptr),
        "destination contour");

  std::vector<double> thetas(count), points(3 * count);
  std::size_t kept = 0, dropped = 0;
  check(qls_sample_contour(source.ptr, count, thetas.data(), points.data(),
                           &kept, &dropped),
        "source sampling");
  const std::size_t used = kept;

  double p_o[3], q_o[3];
  check(qls_conic_point_at(source.ptr, anchor_angle, p_o), "source anchor");
  check(qls_conic_point_at(dest.ptr, anchor_angle, q_o),
        "destination anchor");

  json files = json::array();
  double max_final_error = 0.0;
  json summary{{"schema_version", kSchemaVersion},
               {"command", "protocol"},
               {"mode", mode},
               {"spectrum", spectrum},
               {"source_target", source_target},
               {"destination_target", dest_target},
               {"anchor_angle", anchor_angle},
               {"source_samples", used},
               {"dropped_source_samples", dropped}};

  if (mode == "three_step") {
    // Assign each source sample the destination point of equal parameter;
    // samples whose parameter leaves the chart collapse to the anchor.
    std::vector<double> assigned(3 * used);
    json reassigned = json::array();
    for (std::size_t k = 0; k < used; ++k) {
      double q[3];
      const qls_status st = qls_conic_point_at(dest.ptr, thetas[k], q);
      if (st == QLS_OK) {
        std::copy(q, q + 3, &assigned[3 * k]);
      } else if (st == QLS_ERR_CHART_EXIT) {
        std::copy(q_o, q_o + 3, &assigned[3 * k]);
        reassigned.push_back(json{{"index", k}, {"theta", thetas[k]}});
      } else {
        check(st, "destination assignment");
      }
    }

    std::vector<double> waypoints(12 * used), maps(27 * used);
    check(qls_three_step(source.ptr, points.data(), used, p_o, dest.ptr, q_o,
                         assigned.data(), waypoints.data(), maps.data()),
          "three-step protocol");

    for (std::size_t k = 0; k < used; ++k) {
      const double* wp = &waypoints[12 * k];
      const double* mp = &maps[27 * k];
      json wp_json = json::array();
      for (int w = 0; w < 4; ++w) {
        wp_json.push_back(
            json::array({wp[3 * w], wp[3 * w + 1], wp[3 * w + 2]}));
      }
      json maps_json = json::array();
      json residuals = json::array();
      for (int hop = 0; hop < 3; ++hop) {
        maps_json.push_back(matrix3_json(mp + 9 * hop));
        residuals.push_back(
            apply3_deviation(mp + 9 * hop, wp + 3 * hop, wp + 3 * (hop + 1)));
      }
      double final_energy = 0.0;
      check(qls_expectation_energy(wp + 9, spectrum.data(), 3, &final_energy),
            "final expectation");
      max_final_error =
          std::max(max_final_error, std::abs(final_energy - dest_target));

      json doc{{"schema_version", kSchemaVersion},
               {"mode", mode},
               {"index", k},
               {"theta", thetas[k]},
               {"waypoints", wp_json},
               {"maps", maps_json},
               {"hop_residuals", residuals},
               {"final_expectation", final_energy}};
      const std::string name = "trajectory_" + std::to_string(k) + ".json";
      write_file(out.dir / name, render_json(doc));
      files.push_back(name);
    }
    summary["reassigned_to_anchor"] = reassigned;
  } else {  // direct
    json chart_exits = json::array();
    for (std::size_t k = 0; k < used; ++k) {
      double q[3], mat[9], bad_theta = 0.0;
      const qls_status st = qls_direct_map(source.ptr, &points[3 * k],
                                           dest.ptr, q, mat, &bad_theta);
      if (st == QLS_ERR_CHART_EXIT) {
        chart_exits.push_back(json{{"index", k}, {"theta", bad_theta}});
        continue;
      }
      check(st, "direct map");

      double final_energy = 0.0;
      check(qls_expectation_energy(q, spectrum.data(), 3, &final_energy),
            "final expectation");
      max_final_error =
          std::max(max_final_error, std::abs(final_energy - dest_target));

      json doc{{"schema_version", kSchemaVersion},
               {"mode", mode},
               {"index", k},
               {"theta", thetas[k]},
               {"waypoints",
                json::array({json::array({points[3 * k], points[3 * k + 1],
                                          points[3 * k + 2]}),
                             json::array({q[0], q[1], q[2]})})},
               {"maps", json::array({matrix3_json(mat)})},
               {"hop_residuals",
                json::array({apply3_deviation(mat, &points[3 * k], q)})},
               {"final_expectation", final_energy}};
      const std::string name = "trajectory_" + std::to_string(k) + ".json";
      write_file(out.dir / name, render_json(doc));
      files.push_back(name);
    }
    summary["chart_exits"] = chart_exits;
  }

  summary["trajectory_files"] = files;
  summary["max_final_expectation_error"] = max_final_error;
  write_file(out.dir / "summary.json", render_json(summary));
  return 0;
}

// ---------------- oscillator ----------------

int run_oscillator(const json& config, const Output& out) {
  const qls_rational wx = rational_field(config, "oscillator.omega_x");
  const qls_rational wy = rational_field(config, "oscillator.omega_y");
  const long long n_max = integer_field(config, "oscillator.n_max");
  const bool zero_point =
      bool_field(config, "oscillator.include_zero_point", false);

  const json& energies = field(config, "oscillator.energies");
  if (!energies.is_array()) {
    fatal("config field 'oscillator.energies' must be an array");
  }

  Table table{{"n_x", "n_y", "E_num", "E_den", "set_id"}, {}};
  json set_sizes = json::array();
  for (std::size_t set = 0; set < energies.size(); ++set) {
    if (!energies[set].is_array() || energies[set].size() != 2) {
      fatal("config field 'oscillator.energies' entries must be "
            "[numerator, denominator] pairs");
    }
    const qls_rational e{energies[set][0].get<long long>(),
                         energies[set][1].get<long long>()};
    std::size_t n = 0;
    qls_status st = qls_oscillator_level_set(e, wx, wy, n_max,
                                             zero_point ? 1 : 0, nullptr, 0,
                                             &n);
    check(st, "level set size");
    std::vector<long long> pts(2 * n);
    if (n > 0) {
      check(qls_oscillator_level_set(e, wx, wy, n_max, zero_point ? 1 : 0,
                                     pts.data(), n, &n),
            "level set points");
    }
    for (std::size_t k = 0; k < n; ++k) {
      // Re-validate the row's energy before writing it out.
      qls_rational row_e;
      check(qls_oscillator_energy(pts[2 * k], pts[2 * k + 1], wx, wy,
                                  zero_point ? 1 : 0, &row_e),
            "row energy");
      table.rows.push_back(json::array(
          {pts[2 * k], pts[2 * k + 1], row_e.num, row_e.den, set}));
    }
    set_sizes.push_back(json{{"set_id", set},
                             {"energy", json::array({e.num, e.den})},
                             {"count", n}});
  }
  const std::string table_file = write_table(out, "level_sets", table);

  // Pulse planning for the configured transition.
  json plans_doc{{"schema_version", kSchemaVersion},
                 {"omega_x", json::array({wx.num, wx.den})},
                 {"omega_y", json::array({wy.num, wy.den})},
                 {"include_zero_point", zero_point}};
  const json& transition = field(config, "oscillator.transition");
  const json& from = field(transition, "from");
  if (!from.is_array() || from.size() != 2) {
    fatal("config field 'oscillator.transition.from' must be [n_x, n_y]");
  }
  const long long from_x = from[0].get<long long>();
  const long long from_y = from[1].get<long long>();
  const qls_rational target_e = rational_field(transition, "target_energy");
  plans_doc["from"] = json::array({from_x, from_y});
  plans_doc["target_energy"] = json::array({target_e.num, target_e.den});

  qls_pulse_step steps[4];
  std::size_t lens[2] = {0, 0};
  std::size_t plan_count = 0;
  const qls_status plan_st =
      qls_oscillator_plan(from_x, from_y, target_e, wx, wy,
                          zero_point ? 1 : 0, n_max, steps, lens, &plan_count);
  if (plan_st != QLS_OK) {
    plans_doc["error"] = soft_error(plan_st);
  } else {
    json plans = json::array();
    std::size_t cursor = 0;
    for (std::size_t p = 0; p < plan_count; ++p) {
      json steps_json = json::array();
      long long cx = from_x, cy = from_y;
      for (std::size_t s = 0; s < lens[p]; ++s) {
        const qls_pulse_step& step = steps[cursor + s];
        steps_json.push_back(
            json{{"axis", step.axis == 0 ? "x" : "y"},
                 {"delta_quanta", step.delta_quanta},
                 {"frequency",
                  json::array({step.frequency.num, step.frequency.den})}});
        check(qls_oscillator_apply(cx, cy, &step, &cx, &cy), "plan replay");
      }
      cursor += lens[p];
      // Fail closed: the replayed end point must carry the target energy.
      qls_rational end_e;
      check(qls_oscillator_energy(cx, cy, wx, wy, zero_point ? 1 : 0, &end_e),
            "plan endpoint energy");
      if (end_e.num * target_e.den != target_e.num * end_e.den) {
        fatal("pulse plan replay missed the target energy");
      }
      plans.push_back(json{{"steps", steps_json},
                           {"end", json::array({cx, cy})}});
    }
    plans_doc["plans"] = plans;
  }
  write_file(out.dir / "plans.json", render_json(plans_doc));

  json summary{{"schema_version", kSchemaVersion},
               {"command", "oscillator"},
               {"omega_x", json::array({wx.num, wx.den})},
               {"omega_y", json::array({wy.num, wy.den})},
               {"n_max", n_max},
               {"include_zero_point", zero_point},
               {"level_sets_file", table_file},
               {"plans_file", "plans.json"},
               {"sets", set_sizes}};
  write_file(out.dir / "summary.json", render_json(summary));
  return 0;
}

// ---------------- lsm demo ----------------

json interface_stats(qls_polylines* lines) {
  std::size_t n_lines = 0;
  check(qls_polylines_count(lines, &n_lines), "interface count");
  json lines_json = json::array();
  double r_min = 0.0, r_max = 0.0, r_sum = 0.0;
  std::size_t total = 0;
  for (std::size_t k = 0; k < n_lines; ++k) {
    std::size_t pts = 0;
    int closed = 0;
    check(qls_polylines_info(lines, k, &pts, &closed), "interface info");
    std::vector<double> xy(2 * pts);
    check(qls_polylines_points(lines, k, xy.data()), "interface points");
    for (std::size_t v = 0; v < pts; ++v) {
      const double r = std::hypot(xy[2 * v], xy[2 * v + 1]);
      if (total == 0) {
        r_min = r_max = r;
      } else {
        r_min = std::min(r_min, r);
        r_max = std::max(r_max, r);
      }
      r_sum += r;
      ++total;
    }
    lines_json.push_back(json{{"vertices", pts}, {"closed", closed != 0}});
  }
  json stats{{"lines", lines_json}, {"vertex_count", total}};
  if (total > 0) {
    stats["radius_mean"] = r_sum / static_cast<double>(total);
    stats["radius_min"] = r_min;
    stats["radius_max"] = r_max;
  }
  return stats;
}

std::string write_interface(const Output& out, const std::string& stem,
                            qls_polylines* lines) {
  std::size_t n_lines = 0;
  check(qls_polylines_count(lines, &n_lines), "interface count");
  Table table{{"line", "vertex", "x", "y"}, {}};
  for (std::size_t k = 0; k < n_lines; ++k) {
    std::size_t pts = 0;
    int closed = 0;
    check(qls_polylines_info(lines, k, &pts, &closed), "interface info");
    std::vector<double> xy(2 * pts);
    check(qls_polylines_points(lines, k, xy.data()), "interface points");
    for (std::size_t v = 0; v < pts; ++v) {
      table.rows.push_back(json::array({k, v, xy[2 * v], xy[2 * v + 1]}));
    }
  }
  return write_table(out, stem, table);
}

void write_field_csv(const Output& out, const std::string& name,
                     qls_field* f) {
  std::size_t needed = 0;
  check(qls_field_csv(f, nullptr, 0, &needed), "field csv size");
  std::string buf(needed, '\0');
  check(qls_field_csv(f, buf.data(), buf.size(), &needed), "field csv");
  buf.resize(needed - 1);  // drop the NUL
  write_file(out.dir / name, buf);
}

int run_lsm_demo(const json& config, const Output& out) {
  const std::vector<double> spectrum = spectrum_from_config(config);
  const double target = number_field(config, "lsm.target");
  const double speed = number_field(config, "lsm.speed");
  const std::vector<double> checkpoints = number_list(config, "lsm.checkpoints");
  const auto nx = static_cast<std::size_t>(integer_field(config, "grid.nx"));
  const auto ny = static_cast<std::size_t>(integer_field(config, "grid.ny"));
  const double h = number_field(config, "grid.h");
  const std::vector<double> origin = number_list(config, "grid.origin");
  if (origin.size() != 2) {
    fatal("config field 'grid.origin' must be [x, y]");
  }

  ConicHandle conic;
  check(qls_energy_contour(spectrum.data(), target, &conic.ptr),
        "initial contour");

  FieldHandle initial;
  check(qls_field_from_conic(conic.ptr, nx, ny, h, origin[0], origin[1],
                             &initial.ptr),
        "grid initialization");
  write_field_csv(out, "field_initial.csv", initial.ptr);

  PolylinesHandle init_lines;
  check(qls_field_extract(initial.ptr, &init_lines.ptr),
        "initial interface");
  const std::string init_file =
      write_interface(out, "interface_initial", init_lines.ptr);

  // Round trip: largest distance from extracted vertices back to the
  // analytic contour.
  double round_trip = 0.0;
  {
    std::size_t n_lines = 0;
    check(qls_polylines_count(init_lines.ptr, &n_lines), "interface count");
    for (std::size_t k = 0; k < n_lines; ++k) {
      std::size_t pts = 0;
      int closed = 0;
      check(qls_polylines_info(init_lines.ptr, k, &pts, &closed), "info");
      std::vector<double> xy(2 * pts);
      check(qls_polylines_points(init_lines.ptr, k, xy.data()), "points");
      for (std::size_t v = 0; v < pts; ++v) {
        double sd = 0.0;
        check(qls_signed_distance(conic.ptr, xy[2 * v], xy[2 * v + 1], &sd),
              "round trip distance");
        round_trip = std::max(round_trip, std::abs(sd));
      }
    }
  }

  json checkpoint_entries = json::array();
  qls_field* last = initial.ptr;
  FieldHandle evolved_keeper;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const double t = checkpoints[k];
    FieldHandle evolved;
    check(qls_field_evolve(initial.ptr, speed, t, &evolved.ptr), "evolve");

    const std::string field_name =
        "field_checkpoint_" + std::to_string(k) + ".csv";
    write_field_csv(out, field_name, evolved.ptr);

    PolylinesHandle lines;
    check(qls_field_extract(evolved.ptr, &lines.ptr), "interface");
    const std::string iface_file = write_interface(
        out, "interface_checkpoint_" + std::to_string(k), lines.ptr);

    json entry = interface_stats(lines.ptr);
    entry["t"] = t;
    entry["field_file"] = field_name;
    entry["interface_file"] = iface_file;
    checkpoint_entries.push_back(entry);

    if (k + 1 == checkpoints.size()) {
      evolved_keeper.ptr = evolved.ptr;
      evolved.ptr = nullptr;
      last = evolved_keeper.ptr;
    }
  }

  // Node classification of the last field (initial when no checkpoints).
  std::vector<unsigned char> labels(nx * ny);
  check(qls_field_classify(last, labels.data()), "classification");
  Table cls{{"i", "j", "label"}, {}};
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const unsigned char l = labels[j * nx + i];
      ++counts[l];
      cls.rows.push_back(json::array({i, j, static_cast<long long>(l)}));
    }
  }
  const std::string cls_file = write_table(out, "classification", cls);

  json summary{
      {"schema_version", kSchemaVersion},
      {"command", "lsm-demo"},
      {"spectrum", spectrum},
      {"contour_target", target},
      {"speed", speed},
      {"grid", json{{"nx", nx}, {"ny", ny}, {"h", h},
                    {"origin", json::array({origin[0], origin[1]})}}},
      {"initial",
       json{{"field_file", "field_initial.csv"},
            {"interface_file", init_file},
            {"round_trip_max_deviation", round_trip}}},
      {"checkpoints", checkpoint_entries},
      {"classification",
       json{{"file", cls_file},
            {"outside", counts[0]},
            {"interface", counts[1]},
            {"inside", counts[2]},
            {"labels", json{{"outside", 0}, {"interface", 1}, {"inside", 2}}}}}};
  write_file(out.dir / "summary.json", render_json(summary));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-set tools for expectation-value contours"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format, mode = "three_step";

  CLI::App* contours =
      app.add_subcommand("contours", "Sample constant-energy contours");
  CLI::App* protocol = app.add_subcommand(
      "protocol", "Move contour points between two energy contours");
  CLI::App* oscillator = app.add_subcommand(
      "oscillator", "Oscillator lattice level sets and pulse plans");
  CLI::App* lsm = app.add_subcommand(
      "lsm-demo", "Grid evolution of an energy contour under normal speed");

  for (CLI::App* sub : {contours, protocol, oscillator, lsm}) {
    sub->add_option("--config", config_path, "JSON experiment config")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "csv or json");
  }
  protocol->add_option("--mode", mode, "three_step or direct")
      ->check(CLI::IsMember({"three_step", "direct"}));

  CLI11_PARSE(app, argc, argv);

  const json config = load_config(config_path);
  const Output out = resolve_output(config, out_dir, format);

  if (contours->parsed()) return run_contours(config, out);
  if (protocol->parsed()) return run_protocol(config, out, mode);
  if (oscillator->parsed()) return run_oscillator(config, out);
  if (lsm->parsed()) return run_lsm_demo(config, out);
  return 1;
}
