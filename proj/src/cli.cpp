#include "empgram/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "empgram/error.hpp"
#include "empgram/identify.hpp"
#include "empgram/matrix_io.hpp"
#include "empgram/model.hpp"

namespace empgram::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--model: cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model resolve_model(const std::string& spec) {
  const auto names = builtin_model_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return builtin_model(spec);
  if (fs::is_regular_file(spec)) return load_lti(read_file(spec), fs::path(spec).stem().string());
  throw ConfigError("--model: unknown model '" + spec + "' (not a builtin name or readable file)");
}

Vector broadcast(const Vector& v, std::size_t p, const char* flag) {
  if (v.size() == p) return v;
  if (v.size() == 1) return Vector(p, v.front());
  throw ConfigError(std::string(flag) + ": expected 1 or " + std::to_string(p) + " values, got " +
                    std::to_string(v.size()));
}

// Parameter range used by parameter Gramians: explicit flags, else half-widths
// of 0.5 * nominal around the nominal values.
std::optional<CenteringMode> resolve_centering(const Model& model, const ExperimentConfig& c) {
  const std::size_t p = model.dims().params;
  if (p == 0) return std::nullopt;
  Vector nominal = c.theta_nom.empty() ? model.parameters().nominal : broadcast(c.theta_nom, p, "--theta-nom");
  if (nominal.size() != p) throw ConfigError("--theta-nom: model '" + model.name() + "' has no nominal parameters");
  CenteringMode mode{c.centering, {}, {}, nominal};
  if (c.theta_min.empty()) {
    mode.lower = nominal;
    for (double& v : mode.lower) v -= 0.5 * std::abs(v);
  } else {
    mode.lower = broadcast(c.theta_min, p, "--theta-min");
  }
  if (c.theta_max.empty()) {
    mode.upper = nominal;
    for (double& v : mode.upper) v += 0.5 * std::abs(v);
  } else {
    mode.upper = broadcast(c.theta_max, p, "--theta-max");
  }
  centering_center(mode);  // validates
  return mode;
}

void validate(const ExperimentConfig& c) {
  if (!(c.h > 0.0)) throw ConfigError("--h: time step must be positive");
  if (!(c.horizon > 0.0)) throw ConfigError("--T: horizon must be positive");
  if (c.levels == 0) throw ConfigError("--levels: must be positive");
  if (!(c.threshold > 0.0)) throw ConfigError("--threshold: must be positive");
}

struct Experiment {
  Model model;
  TimeGrid grid;
  InputFunction input;
  PerturbationDesign design;
  GramianOptions options;
};

Experiment setup(const ExperimentConfig& c, InputKind default_input, double default_state_scale) {
  validate(c);
  Model model = resolve_model(c.model);
  TimeGrid grid(c.h, c.horizon);
  const InputKind kind = c.input.value_or(default_input);
  InputFunction input = make_input(kind, InputParams{c.h, c.horizon, c.seed, 0.0});

  PerturbationDesign design;
  design.input_scales = c.input_scales;
  design.state_scales = c.state_scales.empty() ? Vector{default_state_scale} : c.state_scales;
  design.offset = c.offset;

  GramianOptions opt;
  opt.weighting = c.weighting;
  opt.average = c.average;
  opt.nonsym = c.nonsym;
  opt.schur = c.schur;
  opt.threads = c.threads;
  opt.levels = c.levels;
  opt.centering = resolve_centering(model, c);
  return Experiment{std::move(model), grid, std::move(input), std::move(design), std::move(opt)};
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("--out: cannot create directory '" + dir + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("--out: cannot write '" + path.string() + "'");
  f << text;
}

std::string join(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_number(v[i]);
  }
  return s;
}

std::string describe(const ExperimentConfig& c, const Experiment& e, std::string_view command, std::size_t tail = 0) {
  std::ostringstream os;
  os << "command=" << command << '\n'
     << "model=" << c.model << '\n'
     << "kind=" << to_string(command == "identify" ? GramianKind::identifiability : c.kind) << '\n'
     << "input=" << to_string(e.input.kind()) << '\n'
     << "h=" << format_number(c.h) << '\n'
     << "T=" << format_number(c.horizon) << '\n'
     << "weight=" << to_string(c.weighting) << '\n'
     << "input_scales=" << join(e.design.input_scales) << '\n'
     << "state_scales=" << join(e.design.state_scales) << '\n'
     << "offset=" << (c.offset ? std::string(to_string(*c.offset)) : std::string("default")) << '\n'
     << "levels=" << c.levels << '\n'
     << "schur=" << to_string(c.schur) << '\n'
     << "average=" << (c.average ? 1 : 0) << '\n'
     << "nonsym=" << (c.nonsym ? 1 : 0) << '\n'
     << "seed=" << c.seed << '\n';
  if (e.options.centering) {
    os << "centering=" << to_string(e.options.centering->kind) << '\n'
       << "theta_min=" << join(e.options.centering->lower) << '\n'
       << "theta_nom=" << join(e.options.centering->nominal) << '\n'
       << "theta_max=" << join(e.options.centering->upper) << '\n';
  }
  if (command == "identify") {
    os << "tail=" << tail << '\n'
       << "threshold=" << format_number(c.threshold) << '\n';
  }
  return os.str();
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return exit_divergence;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
}

constexpr std::size_t default_tail = 7;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ExperimentConfig identify_defaults() {
  ExperimentConfig c;
  c.horizon = 10.0;
  c.weighting = Weighting::row;
  c.state_scales = {0.1};
  return c;
}

int cmd_gramian(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    Experiment e = setup(config, InputKind::impulse, 1.0);
    if (config.kind == GramianKind::identifiability || config.kind == GramianKind::sensitivity ||
        config.kind == GramianKind::joint) {
      e.options.drive = e.input;
    }
    const GramianResult r = compute_gramian(config.kind, e.model, e.design, e.input, e.grid, e.options);
    ensure_dir(config.out);
    std::string name(to_string(config.kind));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    write_text(fs::path(config.out) / "gramian.txt", format_matrix_block(name, r.matrix));
    out << "kind: " << to_string(config.kind) << '\n'
        << "dimensions: " << r.matrix.rows() << "x" << r.matrix.cols() << '\n'
        << "trace: " << format_number(trace(r.matrix)) << '\n'
        << "wall time: " << std::fixed << std::setprecision(3) << seconds_since(t0) << " s\n";
    out.unsetf(std::ios::floatfield);
    return exit_ok;
  });
}

int cmd_identify(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    Experiment e = setup(config, InputKind::step, 0.1);
    if (e.model.dims().params == 0) throw ConfigError("--model: identify needs a model with parameters");
    e.options.drive = e.input;
    const GramianResult wi = empirical_identifiability(e.model, e.design, e.grid, e.options);

    const std::size_t p = e.model.dims().params;
    std::optional<std::size_t> tail = config.tail;
    if (!tail && p > default_tail) tail = default_tail;
    if (p == 1) {
      // A single parameter has no tail; it is identifiable iff its Gramian entry is positive.
      if (tail && *tail != 0) throw ConfigError("--tail: a one-parameter model has no tail");
    }
    IdentifiabilityReport report;
    if (p >= 2) {
      report = analyze_identifiability(wi.matrix, tail, config.threshold);
    } else {
      const double v = wi.matrix(0, 0);
      report.singular_values = {std::abs(v)};
      report.vectors = Matrix{{1.0}};
      report.tail_size = 0;
      report.u_bar = {1.0};
      report.relative = {1.0};
      report.ranking = {0};
      report.threshold = config.threshold;
      if (v > 0.0) report.identifiable = {0};
    }

    ensure_dir(config.out);
    const fs::path dir(config.out);
    std::string sv = "index,value\n";
    for (std::size_t k = 0; k < report.singular_values.size(); ++k)
      sv += std::to_string(k + 1) + "," + format_number(report.singular_values[k]) + "\n";
    write_text(dir / "singular_values.csv", sv);

    std::string contrib = "parameter,u_bar,relative,identifiable\n";
    for (std::size_t i = 0; i < p; ++i) {
      const bool ok = std::find(report.identifiable.begin(), report.identifiable.end(), i) != report.identifiable.end();
      contrib += std::to_string(i + 1) + "," + format_number(report.u_bar[i]) + "," + format_number(report.relative[i]) +
                 "," + (ok ? "1" : "0") + "\n";
    }
    write_text(dir / "contributions.csv", contrib);
    write_text(dir / "config.txt", describe(config, e, "identify", report.tail_size));

    out << "model: " << e.model.name() << " (P=" << p << ", tail=" << report.tail_size << ")\n";
    out << "top contributors to the weakly identifiable subspace:\n";
    for (std::size_t r = 0; r < std::min<std::size_t>(10, p); ++r) {
      const std::size_t i = report.ranking[r];
      out << "  " << std::setw(2) << r + 1 << ". theta_" << i + 1 << "  u_bar=" << format_number(report.u_bar[i])
          << "  relative=" << format_number(report.relative[i]) << '\n';
    }
    out << "identifiable: " << report.identifiable.size() << " of " << p << '\n';
    out << "wall time: " << std::fixed << std::setprecision(3) << seconds_since(t0) << " s\n";
    out.unsetf(std::ios::floatfield);
    return exit_ok;
  });
}

int cmd_list(std::ostream& out) {
  out << "models:";
  for (const auto& n : builtin_model_names()) out << ' ' << n;
  out << "\ngramian kinds:";
  for (auto n : gramian_kind_names()) out << ' ' << n;
  out << "\ninputs:";
  for (auto n : input_kind_names()) out << ' ' << n;
  out << "\nweightings:";
  for (auto n : weighting_names()) out << ' ' << n;
  out << '\n';
  return exit_ok;
}

namespace {

template <typename Enum>
std::function<void(const std::string&)> setter(Enum& target, Enum (*parse)(std::string_view)) {
  return [&target, parse](const std::string& s) { target = parse(s); };
}

Vector parse_csv(const std::string& text, const std::string& flag) {
  Vector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag + ": malformed number '" + item + "'");
    }
  }
  if (v.empty()) throw ConfigError(flag + ": empty list");
  return v;
}

void add_common(CLI::App& cmd, ExperimentConfig& c, std::map<std::string, std::string>& raw) {
  cmd.set_help_flag("--help", "print this help message and exit");  // -h would clash with --h
  cmd.add_option("--model", c.model, "builtin model name or LTI matrix file");
  cmd.add_option("--input", raw["--input"], "impulse|step|sinc|chirp|prbs");
  cmd.add_option("--h", c.h, "time step");
  cmd.add_option("--T", c.horizon, "time horizon");
  cmd.add_option("--weight", raw["--weight"], "none|tlin|tquad|trec|col|row");
  cmd.add_option("--centering", raw["--centering"], "mid|log|nominal");
  cmd.add_option("--theta-min", raw["--theta-min"], "comma-separated lower parameter bounds");
  cmd.add_option("--theta-max", raw["--theta-max"], "comma-separated upper parameter bounds");
  cmd.add_option("--theta-nom", raw["--theta-nom"], "comma-separated nominal parameters");
  cmd.add_option("--input-scales", raw["--input-scales"], "comma-separated input scales");
  cmd.add_option("--state-scales", raw["--state-scales"], "comma-separated state scales");
  cmd.add_option("--offset", raw["--offset"], "zero|initial|final|mean|reference");
  cmd.add_option("--levels", c.levels, "parameter perturbation levels per side");
  cmd.add_option("--schur", raw["--schur"], "approx|exact");
  cmd.add_flag("--average", c.average, "sum all outputs into one");
  cmd.add_flag("--nonsym", c.nonsym, "non-symmetric cross-type variant");
  cmd.add_option("--out", c.out, "output directory");
  cmd.add_option("--threads", c.threads, "worker threads (0 = all cores)");
  cmd.add_option("--seed", c.seed, "prbs seed");
}

void apply_raw(ExperimentConfig& c, const std::map<std::string, std::string>& raw) {
  auto get = [&](const char* key) -> const std::string& { return raw.at(key); };
  auto wrap = [](const char* flag, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(flag) + ": " + e.what());
    }
  };
  if (!get("--input").empty()) wrap("--input", [&] { c.input = parse_input_kind(get("--input")); });
  if (!get("--weight").empty()) wrap("--weight", [&] { c.weighting = parse_weighting(get("--weight")); });
  if (!get("--centering").empty()) wrap("--centering", [&] { c.centering = parse_centering_kind(get("--centering")); });
  if (!get("--schur").empty()) wrap("--schur", [&] { c.schur = parse_schur_mode(get("--schur")); });
  if (!get("--offset").empty()) wrap("--offset", [&] { c.offset = parse_offset_mode(get("--offset")); });
  if (!get("--theta-min").empty()) c.theta_min = parse_csv(get("--theta-min"), "--theta-min");
  if (!get("--theta-max").empty()) c.theta_max = parse_csv(get("--theta-max"), "--theta-max");
  if (!get("--theta-nom").empty()) c.theta_nom = parse_csv(get("--theta-nom"), "--theta-nom");
  if (!get("--input-scales").empty()) c.input_scales = parse_csv(get("--input-scales"), "--input-scales");
  if (!get("--state-scales").empty()) c.state_scales = parse_csv(get("--state-scales"), "--state-scales");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Empirical Gramians and parameter identifiability for nonlinear ODE systems", "empgram"};
  app.require_subcommand(1);

  ExperimentConfig gcfg;
  ExperimentConfig icfg = identify_defaults();
  std::map<std::string, std::string> graw;
  std::map<std::string, std::string> iraw;
  std::string kind = "wc";

  auto* gram = app.add_subcommand("gramian", "compute one empirical Gramian");
  add_common(*gram, gcfg, graw);
  gram->add_option("--kind", kind, "wc|woc|wo|wx|wy|ws|wi|wj");

  auto* ident = app.add_subcommand("identify", "parameter identifiability study");
  add_common(*ident, icfg, iraw);
  std::size_t tail = 0;
  ident->add_option("--tail", tail, "number of smallest singular vectors aggregated (default: 7, or the spectral gap for P <= 7)");
  ident->add_option("--threshold", icfg.threshold, "relative contribution below which a parameter is identifiable");

  app.add_subcommand("list", "list builtin models, Gramian kinds, inputs and weightings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return exit_config;
  }

  if (app.got_subcommand("list")) return cmd_list(out);
  if (app.got_subcommand("gramian")) {
    return guarded(err, [&] {
      apply_raw(gcfg, graw);
      try {
        gcfg.kind = parse_gramian_kind(kind);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("--kind: ") + e.what());
      }
      return cmd_gramian(gcfg, out, err);
    });
  }
  return guarded(err, [&] {
    apply_raw(icfg, iraw);
    if (ident->count("--tail") > 0) icfg.tail = tail;
    return cmd_identify(icfg, out, err);
  });
}

}  // namespace empgram::cli
