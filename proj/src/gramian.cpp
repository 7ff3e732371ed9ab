#include "empgram/gramian.hpp"

#include <cmath>
#include <string>

#include "empgram/error.hpp"
#include "empgram/kernels.hpp"
#include "empgram/parallel.hpp"

namespace empgram {

GramianKind parse_gramian_kind(std::string_view name) {
  if (name == "wc") return GramianKind::controllability;
  if (name == "woc") return GramianKind::output_controllability;
  if (name == "wo") return GramianKind::observability;
  if (name == "wx") return GramianKind::cross;
  if (name == "wy") return GramianKind::linear_cross;
  if (name == "ws") return GramianKind::sensitivity;
  if (name == "wi") return GramianKind::identifiability;
  if (name == "wj") return GramianKind::joint;
  throw ConfigError("unknown Gramian kind '" + std::string(name) + "'");
}

std::string_view to_string(GramianKind kind) {
  switch (kind) {
    case GramianKind::controllability: return "wc";
    case GramianKind::output_controllability: return "woc";
    case GramianKind::observability: return "wo";
    case GramianKind::cross: return "wx";
    case GramianKind::linear_cross: return "wy";
    case GramianKind::sensitivity: return "ws";
    case GramianKind::identifiability: return "wi";
    case GramianKind::joint: return "wj";
  }
  return "wc";
}

std::vector<std::string_view> gramian_kind_names() { return {"wc", "woc", "wo", "wx", "wy", "ws", "wi", "wj"}; }

OffsetMode parse_offset_mode(std::string_view name) {
  if (name == "zero") return OffsetMode::zero;
  if (name == "initial") return OffsetMode::initial;
  if (name == "final") return OffsetMode::final;
  if (name == "mean") return OffsetMode::mean;
  if (name == "reference") return OffsetMode::reference;
  throw ConfigError("unknown offset mode '" + std::string(name) + "'");
}

std::string_view to_string(OffsetMode mode) {
  switch (mode) {
    case OffsetMode::zero: return "zero";
    case OffsetMode::initial: return "initial";
    case OffsetMode::final: return "final";
    case OffsetMode::mean: return "mean";
    case OffsetMode::reference: return "reference";
  }
  return "zero";
}

CenteringKind parse_centering_kind(std::string_view name) {
  if (name == "mid" || name == "midpoint") return CenteringKind::midpoint;
  if (name == "log" || name == "logarithmic") return CenteringKind::logarithmic;
  if (name == "nominal") return CenteringKind::nominal;
  throw ConfigError("unknown centering '" + std::string(name) + "'");
}

std::string_view to_string(CenteringKind kind) {
  switch (kind) {
    case CenteringKind::midpoint: return "mid";
    case CenteringKind::logarithmic: return "log";
    case CenteringKind::nominal: return "nominal";
  }
  return "nominal";
}

Vector centering_center(const CenteringMode& mode) {
  const std::size_t p = mode.lower.size();
  if (mode.upper.size() != p) throw ConfigError("centering: lower and upper bounds differ in length");
  for (std::size_t j = 0; j < p; ++j)
    if (mode.lower[j] > mode.upper[j]) throw ConfigError("centering: lower bound exceeds upper bound");

  Vector c(p);
  switch (mode.kind) {
    case CenteringKind::midpoint:
      for (std::size_t j = 0; j < p; ++j) c[j] = 0.5 * (mode.lower[j] + mode.upper[j]);
      break;
    case CenteringKind::logarithmic:
      for (std::size_t j = 0; j < p; ++j) {
        if (!(mode.lower[j] > 0.0)) throw DomainError("logarithmic centering requires positive lower bounds");
        c[j] = std::exp(0.5 * (std::log(mode.lower[j]) + std::log(mode.upper[j])));
      }
      break;
    case CenteringKind::nominal:
      if (mode.nominal.size() != p) throw ConfigError("nominal centering requires nominal parameter values");
      for (std::size_t j = 0; j < p; ++j) {
        if (mode.nominal[j] < mode.lower[j] || mode.nominal[j] > mode.upper[j])
          throw ConfigError("nominal parameter " + std::to_string(j + 1) + " outside [lower, upper]");
      }
      c = mode.nominal;
      break;
  }
  return c;
}

std::vector<ParameterPerturbation> design_parameter_perturbations(const CenteringMode& centering, std::size_t count) {
  if (count == 0) throw ConfigError("parameter perturbation count must be positive");
  const Vector center = centering_center(centering);
  std::vector<ParameterPerturbation> out;
  for (std::size_t j = 0; j < center.size(); ++j) {
    const double up = centering.upper[j] - center[j];
    const double down = center[j] - centering.lower[j];
    for (std::size_t i = 1; i <= count; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(count);
      if (up > 0.0) {
        Vector p = center;
        p[j] = i == count ? centering.upper[j] : center[j] + s * up;
        out.push_back({j, i - 1, p[j] - center[j], std::move(p)});
      }
      if (down > 0.0) {
        Vector p = center;
        p[j] = i == count ? centering.lower[j] : center[j] - s * down;
        out.push_back({j, count + i - 1, p[j] - center[j], std::move(p)});
      }
    }
  }
  return out;
}

namespace {

// One simulation of the ensemble and the post-processing applied to it.
struct RunSpec {
  Vector x0;
  Vector params;
  InputDrive drive;
  SampleKind want = SampleKind::state;
  bool sum_outputs = false;
  bool use_hook = false;
  OffsetMode offset = OffsetMode::zero;
  std::size_t reference = 0;  // index into the reference batch, for OffsetMode::reference
  double scale = 1.0;
  std::string label;
};

class Engine {
 public:
  Engine(const Model& model, const TimeGrid& grid, const GramianOptions& opt)
      : model_(model), grid_(grid), opt_(opt), q_(quadrature_weights(opt.weighting, grid)) {}

  const Model& model() const { return model_; }
  const GramianOptions& options() const { return opt_; }
  VectorView quadrature() const { return q_; }

  void set_hook(SolverHook hook) { hook_ = std::move(hook); }

  // Raw trajectories, optionally output-summed; no centering or scaling.
  std::vector<Matrix> simulate_references(const std::vector<RunSpec>& specs) const {
    std::vector<Matrix> out(specs.size());
    parallel_for(specs.size(), opt_.threads, [&](std::size_t i) { out[i] = simulate(specs[i]); });
    return out;
  }

  std::vector<Matrix> simulate_runs(const std::vector<RunSpec>& specs, const std::vector<Matrix>& references) const {
    std::vector<Matrix> out(specs.size());
    parallel_for(specs.size(), opt_.threads, [&](std::size_t i) {
      const RunSpec& s = specs[i];
      Matrix m = simulate(s);
      center(m, s.offset, s.offset == OffsetMode::reference ? &references.at(s.reference) : nullptr);
      if (s.scale != 1.0) {
        for (double& v : m.data()) v /= s.scale;
      }
      apply_normalization(opt_.weighting, m);
      out[i] = std::move(m);
    });
    return out;
  }

  // sum_k q_k <x_a(t_k), y_b(t_k)> where a, b index row blocks of `rows` rows.
  double inner(const Matrix& x, std::size_t a, const Matrix& y, std::size_t b, std::size_t rows) const {
    const auto& kt = kernels::active();
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto xr = x.row(a * rows + r);
      const auto yr = y.row(b * rows + r);
      s += kt.weighted_dot(xr.data(), yr.data(), q_.data(), q_.size());
    }
    return s;
  }

  // W += sum_k q_k x(t_k) x(t_k)^T over the rows of x.
  void accumulate_gram(Matrix& w, const Matrix& x) const {
    const auto& kt = kernels::active();
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = kt.weighted_dot(x.row(i).data(), x.row(j).data(), q_.data(), q_.size());
        w(i, j) += v;
        if (i != j) w(j, i) += v;
      }
    }
  }

  // W += sum_k q_k x(t_k) y(t_k)^T
  void accumulate_outer(Matrix& w, const Matrix& x, const Matrix& y) const {
    const auto& kt = kernels::active();
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < y.rows(); ++j)
        w(i, j) += kt.weighted_dot(x.row(i).data(), y.row(j).data(), q_.data(), q_.size());
  }

 private:
  Matrix simulate(const RunSpec& s) const {
    static const SolverHook no_hook;
    const SolverHook& hook = s.use_hook ? hook_ : no_hook;
    Matrix samples;
    try {
      samples = (opt_.solver ? opt_.solver(model_, s.x0, s.params, s.drive, grid_, s.want, hook)
                             : integrate(model_, s.x0, s.params, s.drive, grid_, s.want, hook))
                    .samples;
    } catch (const DivergenceError& e) {
      throw DivergenceError(s.label + ": " + e.what(), e.time(), e.step(), e.state());
    }
    if (!s.sum_outputs) return samples;
    Matrix summed(1, samples.cols());
    for (std::size_t k = 0; k < samples.cols(); ++k) {
      double v = 0.0;
      for (std::size_t r = 0; r < samples.rows(); ++r) v += samples(r, k);
      summed(0, k) = v;
    }
    return summed;
  }

  static void center(Matrix& m, OffsetMode mode, const Matrix* reference) {
    const std::size_t last = m.cols() - 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      auto row = m.row(i);
      switch (mode) {
        case OffsetMode::zero:
          break;
        case OffsetMode::initial: {
          const double c = row[0];
          for (double& v : row) v -= c;
          break;
        }
        case OffsetMode::final: {
          const double c = row[last];
          for (double& v : row) v -= c;
          break;
        }
        case OffsetMode::mean: {
          double c = 0.0;
          for (double v : row) c += v;
          c /= static_cast<double>(row.size());
          for (double& v : row) v -= c;
          break;
        }
        case OffsetMode::reference: {
          const auto ref = reference->row(i);
          for (std::size_t k = 0; k < row.size(); ++k) row[k] -= ref[k];
          break;
        }
      }
    }
  }

  const Model& model_;
  const TimeGrid& grid_;
  const GramianOptions& opt_;
  Vector q_;
  SolverHook hook_;
};

std::vector<std::size_t> resolve_directions(const std::vector<std::size_t>& given, std::size_t dim, const char* what) {
  if (given.empty()) {
    std::vector<std::size_t> all(dim);
    for (std::size_t i = 0; i < dim; ++i) all[i] = i;
    return all;
  }
  for (std::size_t i : given)
    if (i >= dim) throw ConfigError(std::string(what) + " direction " + std::to_string(i) + " out of range");
  return given;
}

void check_scales(const Vector& scales, const char* what) {
  if (scales.empty()) throw ConfigError(std::string(what) + " scale set must not be empty");
  for (double s : scales)
    if (s == 0.0 || !std::isfinite(s)) throw ConfigError(std::string(what) + " scales must be finite and nonzero");
}

std::optional<CenteringMode> model_centering(const Model& model) {
  const ParameterBox& box = model.parameters();
  const std::size_t p = model.dims().params;
  if (box.nominal.size() != p || box.lower.size() != p || box.upper.size() != p) return std::nullopt;
  return CenteringMode{CenteringKind::nominal, box.lower, box.upper, box.nominal};
}

CenteringMode resolve_centering(const Model& model, const GramianOptions& opt) {
  if (opt.centering) {
    if (opt.centering->lower.size() != model.dims().params)
      throw ConfigError("centering: parameter bounds have wrong length");
    return *opt.centering;
  }
  if (auto c = model_centering(model)) return *c;
  throw ConfigError("parameter Gramians need parameter bounds (model '" + model.name() + "' has none)");
}

Vector base_params(const Model& model, const GramianOptions& opt) {
  const std::size_t p = model.dims().params;
  if (p == 0) return {};
  if (opt.centering) return centering_center(*opt.centering);
  if (model.parameters().nominal.size() == p) return model.parameters().nominal;
  throw ConfigError("model '" + model.name() + "' has parameters but no nominal values");
}

Vector input_offset(const Model& model, const PerturbationDesign& design) {
  const std::size_t m = model.dims().inputs;
  if (design.input_offset.empty()) return Vector(m, 0.0);
  if (design.input_offset.size() != m) throw ConfigError("input offset has wrong length");
  return design.input_offset;
}

Vector state_offset(const Model& model, const PerturbationDesign& design, VectorView params) {
  if (design.state_offset.empty()) return model.initial_state(params);
  if (design.state_offset.size() != model.dims().states) throw ConfigError("state offset has wrong length");
  return design.state_offset;
}

OffsetMode controllability_offset(const PerturbationDesign& design, const InputFunction& input) {
  if (design.offset) return *design.offset;
  return input.kind() == InputKind::step ? OffsetMode::final : OffsetMode::zero;
}

OffsetMode observability_offset(const PerturbationDesign& design) {
  return design.offset.value_or(OffsetMode::reference);
}

InputDrive observation_drive(const Model& model, const GramianOptions& opt, const Vector& ubar) {
  if (!opt.drive) return InputDrive{std::nullopt, Vector(model.dims().inputs, 0.0), ubar};
  return InputDrive{*opt.drive, Vector(model.dims().inputs, 1.0), ubar};
}

std::string label(const char* what, std::size_t a, std::size_t b) {
  return std::string(what) + " run (" + std::to_string(a + 1) + ", " + std::to_string(b + 1) + ")";
}

// Input-perturbed runs, ordered by (scale k, channel m).
struct ControlEnsemble {
  std::vector<RunSpec> references;
  std::vector<RunSpec> runs;
  std::vector<std::size_t> channels;
};

ControlEnsemble control_ensemble(const Model& model, const PerturbationDesign& design, const InputFunction& input,
                                 SampleKind want, VectorView params, const Vector& xbar, const Vector& ubar) {
  check_scales(design.input_scales, "input");
  ControlEnsemble e;
  e.channels = resolve_directions(design.input_directions, model.dims().inputs, "input");
  const OffsetMode mode = controllability_offset(design, input);
  const Vector pv(params.begin(), params.end());
  if (mode == OffsetMode::reference) {
    e.references.push_back(RunSpec{xbar, pv, InputDrive{std::nullopt, Vector(ubar.size(), 0.0), ubar}, want, false,
                                   false, OffsetMode::zero, 0, 1.0, "reference run"});
  }
  for (std::size_t k = 0; k < design.input_scales.size(); ++k) {
    const double c = design.input_scales[k];
    for (std::size_t m : e.channels) {
      Vector gain(model.dims().inputs, 0.0);
      gain[m] = c;
      e.runs.push_back(RunSpec{xbar, pv, InputDrive{input, std::move(gain), ubar}, want, false, false, mode, 0, c,
                               label("input", k, m)});
    }
  }
  return e;
}

// Initial-state perturbed runs, ordered by (scale l, direction i).
struct ObserveEnsemble {
  std::vector<RunSpec> references;
  std::vector<RunSpec> runs;
  std::vector<std::size_t> directions;
};

ObserveEnsemble observe_ensemble(const Model& model, const PerturbationDesign& design, const GramianOptions& opt,
                                 bool sum_outputs, VectorView params, const Vector& xbar, const Vector& ubar) {
  check_scales(design.state_scales, "state");
  ObserveEnsemble e;
  e.directions = resolve_directions(design.state_directions, model.dims().states, "state");
  const OffsetMode mode = observability_offset(design);
  const InputDrive drive = observation_drive(model, opt, ubar);
  const Vector pv(params.begin(), params.end());
  if (mode == OffsetMode::reference) {
    e.references.push_back(RunSpec{xbar, pv, drive, SampleKind::output, sum_outputs, false, OffsetMode::zero, 0, 1.0,
                                   "reference run"});
  }
  for (std::size_t l = 0; l < design.state_scales.size(); ++l) {
    const double d = design.state_scales[l];
    for (std::size_t i : e.directions) {
      Vector x0 = xbar;
      x0[i] += d;
      e.runs.push_back(RunSpec{std::move(x0), pv, drive, SampleKind::output, sum_outputs, false, mode, 0, d,
                               label("state", l, i)});
    }
  }
  return e;
}

// Runs over the augmented directions [x; p]. slot[l][a] is the run index for
// level l and augmented direction a, or npos when that side is degenerate.
struct AugmentedEnsemble {
  std::vector<RunSpec> references;
  std::vector<RunSpec> runs;
  std::vector<std::vector<std::size_t>> slot;
  std::size_t levels = 0;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

AugmentedEnsemble augmented_ensemble(const Model& model, const PerturbationDesign& design, const GramianOptions& opt,
                                     bool sum_outputs, const CenteringMode& centering, const Vector& center,
                                     const Vector& xbar, const Vector& ubar) {
  check_scales(design.state_scales, "state");
  const std::size_t n = model.dims().states;
  const std::size_t p = model.dims().params;
  const std::size_t count = opt.levels;
  const auto perturbations = design_parameter_perturbations(centering, count);
  const auto directions = resolve_directions(design.state_directions, n, "state");
  const OffsetMode mode = observability_offset(design);
  const InputDrive drive = observation_drive(model, opt, ubar);

  AugmentedEnsemble e;
  e.levels = 2 * count;
  e.slot.assign(e.levels, std::vector<std::size_t>(n + p, AugmentedEnsemble::npos));
  if (mode == OffsetMode::reference) {
    e.references.push_back(RunSpec{xbar, center, drive, SampleKind::output, sum_outputs, true, OffsetMode::zero, 0,
                                   1.0, "reference run"});
  }
  // State directions: level l uses sign(l) * s_l * S_x[l mod |S_x|], mirroring
  // the parameter levels.
  for (std::size_t l = 0; l < e.levels; ++l) {
    const double sign = l < count ? 1.0 : -1.0;
    const double s = static_cast<double>(l % count + 1) / static_cast<double>(count);
    const double d = sign * s * design.state_scales[l % design.state_scales.size()];
    for (std::size_t i : directions) {
      Vector x0 = xbar;
      x0[i] += d;
      e.slot[l][i] = e.runs.size();
      e.runs.push_back(RunSpec{std::move(x0), center, drive, SampleKind::output, sum_outputs, true, mode, 0, d,
                               label("state", l, i)});
    }
  }
  for (const ParameterPerturbation& pp : perturbations) {
    e.slot[pp.level][n + pp.param] = e.runs.size();
    e.runs.push_back(RunSpec{xbar, pp.params, drive, SampleKind::output, sum_outputs, true, mode, 0, pp.displacement,
                             label("parameter", pp.level, pp.param)});
  }
  return e;
}

SolverHook resolve_hook(const Model& model, const GramianOptions& opt, const Vector& center) {
  if (opt.hook) return opt.hook;
  return default_hook_for_initial_state_params(model, center);
}

GramianResult controllability_impl(GramianKind kind, const Model& model, const PerturbationDesign& design,
                                   const InputFunction& input, const TimeGrid& grid, const GramianOptions& opt) {
  const SampleKind want = kind == GramianKind::controllability ? SampleKind::state : SampleKind::output;
  const Vector params = base_params(model, opt);
  const Vector ubar = input_offset(model, design);
  const Vector xbar = state_offset(model, design, params);

  Engine engine(model, grid, opt);
  const ControlEnsemble e = control_ensemble(model, design, input, want, params, xbar, ubar);
  const auto refs = engine.simulate_references(e.references);
  const auto runs = engine.simulate_runs(e.runs, refs);

  const std::size_t dim = want == SampleKind::state ? model.dims().states : model.dims().outputs;
  Matrix w(dim, dim);
  for (const Matrix& x : runs) engine.accumulate_gram(w, x);
  w *= 1.0 / static_cast<double>(design.input_scales.size());
  return GramianResult{kind, symmetrized(w), std::nullopt, {}, {}};
}

// Sum of run matrices sharing the same key, in run order.
Matrix sum_runs(const std::vector<Matrix>& runs, const std::vector<std::size_t>& indices) {
  Matrix s = runs.at(indices.front());
  for (std::size_t i = 1; i < indices.size(); ++i) s += runs[indices[i]];
  return s;
}

// Controllability side of cross-type Gramians: per channel m, sum over scales
// of the scaled state trajectories (or one sum over all channels for nonsym).
std::vector<Matrix> control_side(const Engine& engine, const ControlEnsemble& e, bool nonsym) {
  const auto refs = engine.simulate_references(e.references);
  const auto runs = engine.simulate_runs(e.runs, refs);
  const std::size_t channels = e.channels.size();
  std::vector<Matrix> out;
  if (nonsym) {
    std::vector<std::size_t> all(runs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    out.push_back(sum_runs(runs, all));
    return out;
  }
  for (std::size_t c = 0; c < channels; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t r = c; r < runs.size(); r += channels) idx.push_back(r);
    out.push_back(sum_runs(runs, idx));
  }
  return out;
}

}  // namespace

GramianResult empirical_controllability(const Model& model, const PerturbationDesign& design,
                                        const InputFunction& input, const TimeGrid& grid,
                                        const GramianOptions& options) {
  return controllability_impl(GramianKind::controllability, model, design, input, grid, options);
}

GramianResult empirical_output_controllability(const Model& model, const PerturbationDesign& design,
                                               const InputFunction& input, const TimeGrid& grid,
                                               const GramianOptions& options) {
  return controllability_impl(GramianKind::output_controllability, model, design, input, grid, options);
}

GramianResult empirical_observability(const Model& model, const PerturbationDesign& design, const TimeGrid& grid,
                                      const GramianOptions& opt) {
  const Vector params = base_params(model, opt);
  const Vector ubar = input_offset(model, design);
  const Vector xbar = state_offset(model, design, params);

  Engine engine(model, grid, opt);
  const ObserveEnsemble e = observe_ensemble(model, design, opt, opt.average, params, xbar, ubar);
  const auto refs = engine.simulate_references(e.references);
  const auto runs = engine.simulate_runs(e.runs, refs);

  const std::size_t n = model.dims().states;
  const std::size_t dirs = e.directions.size();
  const std::size_t rows = runs.front().rows();
  Matrix w(n, n);
  for (std::size_t l = 0; l < design.state_scales.size(); ++l) {
    for (std::size_t a = 0; a < dirs; ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        const double v = engine.inner(runs[l * dirs + a], 0, runs[l * dirs + b], 0, rows);
        w(e.directions[a], e.directions[b]) += v;
        if (a != b) w(e.directions[b], e.directions[a]) += v;
      }
    }
  }
  w *= 1.0 / static_cast<double>(design.state_scales.size());
  return GramianResult{GramianKind::observability, symmetrized(w), std::nullopt, {}, {}};
}

GramianResult empirical_cross(const Model& model, const PerturbationDesign& design, const InputFunction& input,
                              const TimeGrid& grid, const GramianOptions& opt) {
  const Dimensions& dims = model.dims();
  if (!opt.nonsym && dims.inputs != dims.outputs)
    throw ConfigError("cross Gramian needs as many inputs as outputs (use the non-symmetric variant)");
  const Vector params = base_params(model, opt);
  const Vector ubar = input_offset(model, design);
  const Vector xbar = state_offset(model, design, params);

  Engine engine(model, grid, opt);
  const ControlEnsemble ce = control_ensemble(model, design, input, SampleKind::state, params, xbar, ubar);
  if (!opt.nonsym) {
    for (std::size_t i = 0; i < ce.channels.size(); ++i)
      if (ce.channels[i] != i) throw ConfigError("cross Gramian pairs every input channel with its output");
  }
  const auto control = control_side(engine, ce, opt.nonsym);

  const ObserveEnsemble oe = observe_ensemble(model, design, opt, opt.nonsym, params, xbar, ubar);
  const auto orefs = engine.simulate_references(oe.references);
  const auto oruns = engine.simulate_runs(oe.runs, orefs);

  const std::size_t n = dims.states;
  const std::size_t dirs = oe.directions.size();
  Matrix w(n, n);
  for (std::size_t b = 0; b < dirs; ++b) {
    std::vector<std::size_t> idx;
    for (std::size_t l = 0; l < design.state_scales.size(); ++l) idx.push_back(l * dirs + b);
    const Matrix psi = sum_runs(oruns, idx);
    for (std::size_t a = 0; a < n; ++a) {
      double v = 0.0;
      for (std::size_t m = 0; m < control.size(); ++m) v += engine.inner(control[m], a, psi, m, 1);
      w(a, oe.directions[b]) = v;
    }
  }
  w *= 1.0 / static_cast<double>(design.input_scales.size() * design.state_scales.size());
  return GramianResult{GramianKind::cross, std::move(w), std::nullopt, {}, {}};
}

GramianResult empirical_linear_cross(const Model& model, const PerturbationDesign& design,
                                     const InputFunction& input, const TimeGrid& grid,
                                     const GramianOptions& opt) {
  if (!model.lti()) throw ConfigError("linear cross Gramian requires an LTI model");
  const LtiSystem& sys = *model.lti();
  if (sys.B.cols() != sys.C.rows()) throw ConfigError("linear cross Gramian needs as many inputs as outputs");
  const Model dual = make_lti_model(LtiSystem{sys.A.transposed(), sys.C.transposed(), Matrix::identity(sys.A.rows())},
                                    model.name() + "-dual");

  const Vector ubar = input_offset(model, design);
  const Vector xbar = state_offset(model, design, {});

  Engine primal_engine(model, grid, opt);
  Engine dual_engine(dual, grid, opt);
  const ControlEnsemble pe = control_ensemble(model, design, input, SampleKind::state, {}, xbar, ubar);
  const ControlEnsemble de = control_ensemble(dual, design, input, SampleKind::state, {}, Vector(xbar.size(), 0.0), ubar);
  const auto primal = primal_engine.simulate_runs(pe.runs, primal_engine.simulate_references(pe.references));
  const auto dual_runs = dual_engine.simulate_runs(de.runs, dual_engine.simulate_references(de.references));

  Matrix w(sys.A.rows(), sys.A.rows());
  for (std::size_t r = 0; r < primal.size(); ++r) primal_engine.accumulate_outer(w, primal[r], dual_runs[r]);
  w *= 1.0 / static_cast<double>(design.input_scales.size());
  return GramianResult{GramianKind::linear_cross, std::move(w), std::nullopt, {}, {}};
}

GramianResult empirical_sensitivity(const Model& model, const PerturbationDesign& design,
                                    const InputFunction& input, const TimeGrid& grid,
                                    const GramianOptions& opt) {
  const Dimensions& dims = model.dims();
  if (dims.params == 0) throw ConfigError("sensitivity Gramian requires at least one parameter");
  check_scales(design.input_scales, "input");
  const CenteringMode centering = resolve_centering(model, opt);
  const Vector center = centering_center(centering);
  const Vector ubar = input_offset(model, design);
  const Vector xbar = state_offset(model, design, center);
  const auto channels = resolve_directions(design.input_directions, dims.inputs, "input");

  Vector gain(dims.inputs, 0.0);
  for (std::size_t m : channels) gain[m] = design.input_scales.front();
  const InputDrive drive{input, std::move(gain), ubar};

  Engine engine(model, grid, opt);
  engine.set_hook(resolve_hook(model, opt, center));
  const std::vector<RunSpec> refs_spec{
      RunSpec{xbar, center, drive, SampleKind::state, false, true, OffsetMode::zero, 0, 1.0, "reference run"}};
  std::vector<RunSpec> specs;
  const auto perturbations = design_parameter_perturbations(centering, opt.levels);
  for (const ParameterPerturbation& pp : perturbations) {
    specs.push_back(RunSpec{xbar, pp.params, drive, SampleKind::state, false, true, OffsetMode::reference, 0,
                            pp.displacement, label("parameter", pp.level, pp.param)});
  }
  const auto refs = engine.simulate_references(refs_spec);
  const auto runs = engine.simulate_runs(specs, refs);

  GramianResult result{GramianKind::sensitivity, Matrix(dims.params, dims.params), std::nullopt,
                       Vector(dims.params, 0.0), std::vector<Matrix>(dims.params, Matrix(dims.states, dims.states))};
  std::vector<std::size_t> seen(dims.params, 0);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const std::size_t j = perturbations[r].param;
    engine.accumulate_gram(result.parameter_gramians[j], runs[r]);
    ++seen[j];
  }
  for (std::size_t j = 0; j < dims.params; ++j) {
    if (seen[j] > 0) result.parameter_gramians[j] *= 1.0 / static_cast<double>(seen[j]);
    result.parameter_gramians[j] = symmetrized(result.parameter_gramians[j]);
    result.sensitivities[j] = trace(result.parameter_gramians[j]);
    result.matrix(j, j) = result.sensitivities[j];
  }
  return result;
}

GramianResult empirical_identifiability(const Model& model, const PerturbationDesign& design, const TimeGrid& grid,
                                        const GramianOptions& opt) {
  const Dimensions& dims = model.dims();
  if (dims.params == 0) throw ConfigError("identifiability Gramian requires at least one parameter");
  const CenteringMode centering = resolve_centering(model, opt);
  const Vector center = centering_center(centering);
  const Vector ubar = input_offset(model, design);
  const Vector xbar = state_offset(model, design, center);

  Engine engine(model, grid, opt);
  engine.set_hook(resolve_hook(model, opt, center));
  const AugmentedEnsemble e = augmented_ensemble(model, design, opt, opt.average, centering, center, xbar, ubar);
  const auto refs = engine.simulate_references(e.references);
  const auto runs = engine.simulate_runs(e.runs, refs);

  const std::size_t n = dims.states;
  const std::size_t na = n + dims.params;
  const std::size_t rows = runs.front().rows();
  Matrix w(na, na);
  for (std::size_t l = 0; l < e.levels; ++l) {
    const auto& slot = e.slot[l];
    for (std::size_t a = 0; a < na; ++a) {
      if (slot[a] == AugmentedEnsemble::npos) continue;
      for (std::size_t b = 0; b <= a; ++b) {
        if (slot[b] == AugmentedEnsemble::npos) continue;
        const double v = engine.inner(runs[slot[a]], 0, runs[slot[b]], 0, rows);
        w(a, b) += v;
        if (a != b) w(b, a) += v;
      }
    }
  }
  w *= 1.0 / static_cast<double>(e.levels);
  w = symmetrized(w);

  AugmentedBlocks blocks{w.block(0, 0, n, n), w.block(n, 0, dims.params, n), w.block(n, n, dims.params, dims.params)};
  Matrix wi = schur_complement(blocks.state, blocks.mixed, blocks.param, opt.schur);
  return GramianResult{GramianKind::identifiability, std::move(wi), std::move(blocks), {}, {}};
}

GramianResult empirical_joint(const Model& model, const PerturbationDesign& design, const InputFunction& input,
                              const TimeGrid& grid, const GramianOptions& opt) {
  const Dimensions& dims = model.dims();
  if (dims.params == 0) throw ConfigError("joint Gramian requires at least one parameter");
  if (!opt.nonsym && dims.inputs != dims.outputs)
    throw ConfigError("joint Gramian needs as many inputs as outputs (use the non-symmetric variant)");
  const CenteringMode centering = resolve_centering(model, opt);
  const Vector center = centering_center(centering);
  const Vector ubar = input_offset(model, design);
  const Vector xbar = state_offset(model, design, center);

  Engine engine(model, grid, opt);
  engine.set_hook(resolve_hook(model, opt, center));
  const ControlEnsemble ce = control_ensemble(model, design, input, SampleKind::state, center, xbar, ubar);
  if (!opt.nonsym) {
    for (std::size_t i = 0; i < ce.channels.size(); ++i)
      if (ce.channels[i] != i) throw ConfigError("joint Gramian pairs every input channel with its output");
  }
  const auto control = control_side(engine, ce, opt.nonsym);

  const AugmentedEnsemble e = augmented_ensemble(model, design, opt, opt.nonsym, centering, center, xbar, ubar);
  const auto refs = engine.simulate_references(e.references);
  const auto runs = engine.simulate_runs(e.runs, refs);

  const std::size_t n = dims.states;
  const std::size_t na = n + dims.params;
  Matrix w(n, na);
  for (std::size_t b = 0; b < na; ++b) {
    std::vector<std::size_t> idx;
    for (std::size_t l = 0; l < e.levels; ++l)
      if (e.slot[l][b] != AugmentedEnsemble::npos) idx.push_back(e.slot[l][b]);
    if (idx.empty()) continue;
    const Matrix psi = sum_runs(runs, idx);
    for (std::size_t a = 0; a < n; ++a) {
      double v = 0.0;
      for (std::size_t m = 0; m < control.size(); ++m) v += engine.inner(control[m], a, psi, m, 1);
      w(a, b) = v;
    }
  }
  w *= 1.0 / static_cast<double>(design.input_scales.size() * e.levels);

  AugmentedBlocks blocks{w.block(0, 0, n, n), w.block(0, n, n, dims.params).transposed(), Matrix()};
  const Matrix sym = blocks.state + blocks.state.transposed();
  Matrix wj;
  if (opt.schur == SchurMode::exact) {
    wj = blocks.mixed * pinv(sym) * blocks.mixed.transposed();
    wj *= -0.5;
  } else {
    const double alpha = trace(sym) / static_cast<double>(n);
    wj = Matrix(dims.params, dims.params);
    if (alpha != 0.0) {
      wj = blocks.mixed * blocks.mixed.transposed();
      wj *= -0.5 / alpha;
    }
  }
  return GramianResult{GramianKind::joint, symmetrized(wj), std::move(blocks), {}, {}};
}

GramianResult compute_gramian(GramianKind kind, const Model& model, const PerturbationDesign& design,
                              const InputFunction& input, const TimeGrid& grid, const GramianOptions& options) {
  switch (kind) {
    case GramianKind::controllability: return empirical_controllability(model, design, input, grid, options);
    case GramianKind::output_controllability:
      return empirical_output_controllability(model, design, input, grid, options);
    case GramianKind::observability: return empirical_observability(model, design, grid, options);
    case GramianKind::cross: return empirical_cross(model, design, input, grid, options);
    case GramianKind::linear_cross: return empirical_linear_cross(model, design, input, grid, options);
    case GramianKind::sensitivity: return empirical_sensitivity(model, design, input, grid, options);
    case GramianKind::identifiability: return empirical_identifiability(model, design, grid, options);
    case GramianKind::joint: return empirical_joint(model, design, input, grid, options);
  }
  throw ConfigError("unknown Gramian kind");
}

}  // namespace empgram
