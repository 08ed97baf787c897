#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "jcinfo/errors.hpp"
#include "jcinfo/validation.hpp"

namespace jcinfo::cli {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigurationError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigurationError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigurationError("config: '" + key + "' is an empty list");
  return out;
}

std::optional<int> parse_n_max(const std::string& v) {
  if (v == "auto") return std::nullopt;
  return to_int("n_max", v);
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw ConfigurationError("alpha steps must be at least 1");
  if (steps == 1) return {lo};
  if (!(hi > lo)) throw ConfigurationError("need alpha max > alpha min");
  std::vector<double> v(steps);
  for (int k = 0; k < steps; ++k) v[k] = lo + (hi - lo) * k / (steps - 1);
  v.back() = hi;
  return v;
}

struct Flags {
  std::vector<double> alpha;
  double alpha_min = 0.0, alpha_max = 0.0;
  int alpha_steps = 0;
  double t_min = 0.0, t_max = 0.0;
  int t_steps = 0;
  std::string n_max;
  int grid_radial = 0, grid_angular = 0;
  std::string format;
  std::string out;
  std::string config;
  int threads = 0;

  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* sub, Flags& f) {
  auto* a = sub->add_option("--alpha", f.alpha, "Comma-separated alpha values")->delimiter(',');
  auto* amin = sub->add_option("--alpha-min", f.alpha_min, "Smallest alpha of a uniform range");
  auto* amax = sub->add_option("--alpha-max", f.alpha_max, "Largest alpha of a uniform range");
  auto* asteps = sub->add_option("--alpha-steps", f.alpha_steps, "Number of alpha values");
  a->excludes(amin)->excludes(amax)->excludes(asteps);
  f.opts["alpha"] = a;
  f.opts["alpha-min"] = amin;
  f.opts["alpha-max"] = amax;
  f.opts["alpha-steps"] = asteps;
  f.opts["t-min"] = sub->add_option("--t-min", f.t_min, "First scaled time (default 0)");
  f.opts["t-max"] = sub->add_option("--t-max", f.t_max, "Last scaled time (default 2*pi)");
  f.opts["t-steps"] = sub->add_option("--t-steps", f.t_steps, "Number of time samples (default 257)");
  f.opts["n-max"] = sub->add_option("--n-max", f.n_max, "Fock truncation or 'auto'");
  f.opts["grid-radial"] = sub->add_option("--grid-radial", f.grid_radial, "Radial nodes (default 200)");
  f.opts["grid-angular"] =
      sub->add_option("--grid-angular", f.grid_angular, "Angular nodes (default 256)");
  f.opts["format"] =
      sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  f.opts["out"] = sub->add_option("--out", f.out, "Output path (default stdout)");
  f.opts["config"] = sub->add_option("--config", f.config, "key = value config file");
  f.opts["threads"] = sub->add_option("--threads", f.threads, "Worker threads (default: all cores)");
}

struct Resolved {
  SweepSpec spec;
  std::string format = "csv";
  std::string out;
  FileConfig file;
  bool have_file = false;
};

std::vector<double> default_alphas(const std::string& cmd) {
  if (cmd == "surface") return linspace(0.5, 3.5, 31);
  if (cmd == "alpha-sweep") return linspace(1.0, 5.0, 21);
  return {1.0, 2.0, 3.0};
}

Resolved resolve(const std::string& cmd, const Flags& f) {
  Resolved r;
  if (f.given("config")) {
    r.file = parse_config(f.config);
    r.have_file = true;
  }
  const FileConfig& fc = r.file;
  SweepSpec& spec = r.spec;
  spec.base = fc.model;

  // alpha: flags, then file, then the subcommand default.
  if (f.given("alpha")) {
    spec.alpha_values = f.alpha;
  } else if (f.given("alpha-min") || f.given("alpha-max") || f.given("alpha-steps")) {
    if (!(f.given("alpha-min") && f.given("alpha-max") && f.given("alpha-steps"))) {
      throw ConfigurationError("--alpha-min, --alpha-max and --alpha-steps go together");
    }
    spec.alpha_values = linspace(f.alpha_min, f.alpha_max, f.alpha_steps);
  } else if (fc.alpha) {
    spec.alpha_values = *fc.alpha;
  } else if (fc.alpha_min || fc.alpha_max || fc.alpha_steps) {
    if (!(fc.alpha_min && fc.alpha_max && fc.alpha_steps)) {
      throw ConfigurationError("config: alpha_min, alpha_max and alpha_steps go together");
    }
    spec.alpha_values = linspace(*fc.alpha_min, *fc.alpha_max, *fc.alpha_steps);
  } else if (fc.has_alpha_mag) {
    spec.alpha_values = {fc.model.alpha_mag};
  } else {
    spec.alpha_values = default_alphas(cmd);
  }

  spec.t_min = f.given("t-min") ? f.t_min : fc.t_min.value_or(0.0);
  spec.t_max = f.given("t-max") ? f.t_max : fc.t_max.value_or(2.0 * std::numbers::pi);
  spec.t_steps = f.given("t-steps") ? f.t_steps : fc.t_steps.value_or(257);
  if (f.given("n-max")) spec.base.n_max = parse_n_max(f.n_max);

  GridOptions grid;
  grid.n_r = f.given("grid-radial") ? f.grid_radial : fc.n_r.value_or(grid.n_r);
  grid.n_theta = f.given("grid-angular") ? f.grid_angular : fc.n_theta.value_or(grid.n_theta);
  spec.grid_overrides = grid;
  spec.threads = f.given("threads") ? f.threads : fc.threads.value_or(0);
  if (cmd == "alpha-sweep") spec.aggregate = Aggregate::kPeriodMean;

  r.format = f.given("format") ? f.format : fc.format.value_or("csv");
  if (r.format != "csv" && r.format != "json") {
    throw ConfigurationError("format must be csv or json, got '" + r.format + "'");
  }
  r.out = f.out;
  spec.validate();
  return r;
}

json meta_json(const SeriesTable& table) {
  json meta = json::object();
  for (const auto& [k, v] : table.metadata) meta[k] = v;
  meta["columns"] = table.columns;
  meta["row_count"] = table.rows.size();
  return meta;
}

void write_validation(std::ostream& os, const std::vector<CheckResult>& results,
                      const std::string& format) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& r : results) rows.push_back({r.name, r.passed, r.value, r.threshold});
    json doc;
    doc["meta"] = {{"experiment", "validate"},
                   {"columns", {"check", "passed", "value", "threshold"}},
                   {"row_count", results.size()}};
    doc["rows"] = rows;
    os << doc.dump(2) << '\n';
    return;
  }
  os << "check,passed,value,threshold\n";
  for (const auto& r : results) {
    os << '"' << r.name << "\"," << (r.passed ? "true" : "false") << ','
       << format_double(r.value) << ',' << format_double(r.threshold) << '\n';
  }
}

}  // namespace

FileConfig parse_config_text(const std::string& text) {
  FileConfig fc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw ConfigurationError("config: '" + key + "' has no value");

    if (key == "alpha_mag") {
      fc.model.alpha_mag = to_double(key, val);
      fc.has_alpha_mag = true;
    } else if (key == "alpha_phase") {
      fc.model.alpha_phase = to_double(key, val);
    } else if (key == "lambda") {
      fc.model.lambda = to_double(key, val);
    } else if (key == "omega_f") {
      fc.model.omega_f = to_double(key, val);
    } else if (key == "omega_a") {
      fc.model.omega_a = to_double(key, val);
    } else if (key == "n_max") {
      fc.model.n_max = parse_n_max(val);
    } else if (key == "tail_tol") {
      fc.model.tail_tol = to_double(key, val);
    } else if (key == "alpha") {
      fc.alpha = to_list(key, val);
    } else if (key == "alpha_min") {
      fc.alpha_min = to_double(key, val);
    } else if (key == "alpha_max") {
      fc.alpha_max = to_double(key, val);
    } else if (key == "alpha_steps") {
      fc.alpha_steps = to_int(key, val);
    } else if (key == "t_min") {
      fc.t_min = to_double(key, val);
    } else if (key == "t_max") {
      fc.t_max = to_double(key, val);
    } else if (key == "t_steps") {
      fc.t_steps = to_int(key, val);
    } else if (key == "n_r") {
      fc.n_r = to_int(key, val);
    } else if (key == "n_theta") {
      fc.n_theta = to_int(key, val);
    } else if (key == "threads") {
      fc.threads = to_int(key, val);
    } else if (key == "format") {
      fc.format = val;
    } else {
      throw ConfigurationError("config: unknown key '" + key + "'");
    }
    fc.entries.emplace_back(key, val);
  }
  fc.model.validate();
  if (fc.alpha) {
    for (double a : *fc.alpha) {
      if (!(a >= 0.0)) throw InvalidParameterError("config: alpha values must be nonnegative");
    }
  }
  return fc;
}

FileConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const SeriesTable& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << format_double(row[c]);
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const SeriesTable& table) {
  json doc;
  doc["meta"] = meta_json(table);
  doc["rows"] = table.rows;
  os << doc.dump() << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-space information measures for the intensity-dependent Jaynes-Cummings model",
               "jcinfo"};
  app.require_subcommand(1);

  struct Sub {
    std::string name;
    std::string help;
  };
  const std::vector<Sub> subs = {
      {"surface", "I_F and S_W over an (alpha, T) grid"},
      {"trace", "I_F, S_W and var_x2 time traces"},
      {"parametric", "I_F against S_W, ordered for parametric plots"},
      {"alpha-sweep", "Period-mean I_F and S_W per alpha"},
      {"cr", "Cramer-Rao product traces with marginal checks"},
      {"validate", "Run the invariant suite"},
  };
  std::map<std::string, Flags> flags;
  for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), flags[s.name]);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests surface as CallForHelp from the subcommand.
    if (e.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kOk;
    }
    err << "jcinfo: " << e.what() << '\n';
    return kConfigError;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const Flags& f = flags.at(cmd);
  try {
    Resolved r = resolve(cmd, f);

    std::ofstream file;
    if (!r.out.empty()) {
      file.open(r.out);
      if (!file) throw ConfigurationError("cannot write output file '" + r.out + "'");
    }
    std::ostream& sink = r.out.empty() ? out : file;

    if (cmd == "validate") {
      ValidationOptions vo;
      vo.alphas = r.spec.alpha_values;
      vo.grid = *r.spec.grid_overrides;
      const auto results = run_validation_suite(vo);
      bool ok = true;
      for (const auto& res : results) {
        ok = ok && res.passed;
        err << (res.passed ? "PASS " : "FAIL ") << res.name << " (" << format_double(res.value)
            << " vs " << format_double(res.threshold) << ")\n";
      }
      write_validation(sink, results, r.format);
      return ok ? kOk : kValidationFailed;
    }

    SeriesTable table;
    if (cmd == "surface") table = surface_sweep(r.spec);
    else if (cmd == "trace") table = time_traces(r.spec);
    else if (cmd == "parametric") table = parametric_fisher_vs_wehrl(r.spec);
    else if (cmd == "alpha-sweep") table = alpha_sweep(r.spec);
    else table = cr_traces(r.spec);

    if (r.have_file) {
      std::string echo;
      for (const auto& [k, v] : r.file.entries) echo += k + "=" + v + ";";
      table.set_meta("config_file", f.config);
      table.set_meta("config_entries", echo);
    }
    table.set_meta("threads", std::to_string(r.spec.threads));

    if (r.format == "json") write_json(sink, table);
    else write_csv(sink, table);

    if (!r.out.empty()) {
      file.close();
      std::ofstream meta(r.out + ".meta.json");
      if (!meta) throw ConfigurationError("cannot write metadata sidecar '" + r.out + ".meta.json'");
      meta << meta_json(table).dump(2) << '\n';
    }
    return kOk;
  } catch (const GridCoverageError& e) {
    err << "jcinfo: numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const TruncationError& e) {
    err << "jcinfo: numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const NumericalError& e) {
    err << "jcinfo: numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const Error& e) {
    err << "jcinfo: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace jcinfo::cli
