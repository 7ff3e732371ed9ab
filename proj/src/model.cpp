#include "empgram/model.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "empgram/error.hpp"
#include "empgram/matrix_io.hpp"

namespace empgram {

Model::Model(std::string name, Dimensions dims, Dynamics f, OutputMap g, InitialState x0, ParameterBox box)
    : name_(std::move(name)), dims_(dims), f_(std::move(f)), g_(std::move(g)), x0_(std::move(x0)), box_(std::move(box)) {
  if (dims_.inputs == 0 || dims_.states == 0 || dims_.outputs == 0)
    throw ConfigError("model '" + name_ + "': input, state and output dimensions must be positive");
  if (!f_ || !g_) throw ConfigError("model '" + name_ + "': dynamics and output map are required");
  if (!x0_) {
    const std::size_t n = dims_.states;
    x0_ = [n](VectorView) { return Vector(n, 0.0); };
  }
  for (const Vector* v : {&box_.nominal, &box_.lower, &box_.upper}) {
    if (!v->empty() && v->size() != dims_.params)
      throw ConfigError("model '" + name_ + "': parameter vector length differs from parameter dimension");
  }
  if (!box_.lower.empty() && !box_.upper.empty()) {
    for (std::size_t j = 0; j < dims_.params; ++j) {
      if (box_.lower[j] > box_.upper[j]) throw ConfigError("parameter lower bound exceeds upper bound");
      if (!box_.nominal.empty() && (box_.nominal[j] < box_.lower[j] || box_.nominal[j] > box_.upper[j]))
        throw ConfigError("nominal parameter outside [lower, upper]");
    }
  }
}

void Model::check_sizes(VectorView x, VectorView u, VectorView p) const {
  if (x.size() != dims_.states || u.size() != dims_.inputs || p.size() != dims_.params) {
    std::ostringstream os;
    os << "model '" << name_ << "': expected (x, u, p) lengths (" << dims_.states << ", " << dims_.inputs << ", "
       << dims_.params << "), got (" << x.size() << ", " << u.size() << ", " << p.size() << ")";
    throw ConfigError(os.str());
  }
}

Vector Model::eval_dynamics(double t, VectorView x, VectorView u, VectorView p) const {
  check_sizes(x, u, p);
  Vector dx(dims_.states, 0.0);
  f_(t, x, u, p, dx);
  for (double v : dx) {
    if (!std::isfinite(v))
      throw DivergenceError("non-finite derivative at t=" + format_number(t), t, 0, Vector(x.begin(), x.end()));
  }
  return dx;
}

Vector Model::eval_output(double t, VectorView x, VectorView u, VectorView p) const {
  check_sizes(x, u, p);
  Vector y(dims_.outputs, 0.0);
  g_(t, x, u, p, y);
  return y;
}

Vector Model::initial_state(VectorView p) const {
  if (p.size() != dims_.params) throw ConfigError("initial_state: parameter length mismatch");
  Vector x0 = x0_(p);
  if (x0.size() != dims_.states) throw ConfigError("initial_state: returned vector has wrong length");
  return x0;
}

Model Model::with_parameters(ParameterBox box) const {
  Model m(name_, dims_, f_, g_, x0_, std::move(box));
  m.lti_ = lti_;
  return m;
}

Model Model::with_summed_output() const {
  Dimensions d = dims_;
  d.outputs = 1;
  const std::size_t q = dims_.outputs;
  OutputMap g = [g = g_, q](double t, VectorView x, VectorView u, VectorView p, std::span<double> y) {
    Vector full(q, 0.0);
    g(t, x, u, p, full);
    double s = 0.0;
    for (double v : full) s += v;
    y[0] = s;
  };
  return Model(name_ + "+summed", d, f_, std::move(g), x0_, box_);
}

Model make_lti_model(LtiSystem sys, std::string name) {
  const std::size_t n = sys.A.rows();
  if (n == 0 || !sys.A.square()) throw ConfigError("LTI: A must be square and nonempty");
  if (sys.B.rows() != n || sys.B.cols() == 0) throw ConfigError("LTI: B must have as many rows as A");
  if (sys.C.cols() != n || sys.C.rows() == 0) throw ConfigError("LTI: C must have as many columns as A");
  const Dimensions dims{sys.B.cols(), n, sys.C.rows(), 0};

  // Callbacks hold their own copies so the model stays valid independently.
  Model::Dynamics f = [A = sys.A, B = sys.B](double, VectorView x, VectorView u, VectorView, std::span<double> dx) {
    for (std::size_t i = 0; i < A.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
      for (std::size_t j = 0; j < B.cols(); ++j) s += B(i, j) * u[j];
      dx[i] = s;
    }
  };
  Model::OutputMap g = [C = sys.C](double, VectorView x, VectorView, VectorView, std::span<double> y) {
    for (std::size_t i = 0; i < C.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < C.cols(); ++j) s += C(i, j) * x[j];
      y[i] = s;
    }
  };
  Model m(std::move(name), dims, std::move(f), std::move(g), nullptr);
  m.lti_ = std::move(sys);
  return m;
}

Model builtin_jakstat() {
  using namespace jakstat;
  const Dimensions dims{1, 10, 8, 23};

  // th[k - 1] is parameter k; x[i - 1] is state i.
  Model::Dynamics f = [](double, VectorView x, VectorView u, VectorView th, std::span<double> dx) {
    const double u1 = u[0];
    const double x6c = x[5] - c3;
    const double gate = th[12] * x[0] + 1.0;
    dx[0] = th[5] * x[1] - th[4] * x[0] - c1 * th[0] * x[0] * u1;
    dx[1] = th[4] * x[0] - th[5] * x[1];
    dx[2] = th[1] * x[2] * x6c + c1 * th[0] * x[0] * u1;
    dx[3] = -th[2] * x[3] - th[1] * x[2] * x6c;
    dx[4] = th[2] * x[3] - th[3] * x[4];
    dx[5] = -c2 * th[7] * x6c - th[6] * x[2] * x[5] / gate - th[6] * x[3] * x[5] / gate;
    dx[6] = th[8] * x[6] * x6c - c2 * x[9] * (x[6] - c4);
    dx[7] = -th[10] * (x[6] - c4);
    dx[8] = -c1 * th[11] * x[8] * u1;
    dx[9] = th[13] * x[7] / (th[14] + x[7]) - th[15] * x[9];
  };
  Model::OutputMap g = [](double, VectorView x, VectorView, VectorView th, std::span<double> y) {
    y[0] = x[0] + x[2] + x[3];
    y[1] = th[17] * (x[2] + x[3] + x[4] + c5 - x[8]);
    y[2] = th[18] * (x[3] + x[4]);
    y[3] = th[19] * (c3 - x[5]);
    y[4] = th[20] * x[7];
    y[5] = th[16] * th[21] / th[10] * x[7];
    y[6] = x[9];
    y[7] = c4 - x[6];
  };
  Model::InitialState x0 = [](VectorView th) {
    return Vector{1.3, th[22], 0.0, 0.0, 0.0, c3, c4, 0.0, c5, 0.0};
  };
  ParameterBox box{Vector(23, 1.0), Vector(23, 0.01), Vector(23, 10.0)};
  return Model("jakstat", dims, std::move(f), std::move(g), std::move(x0), std::move(box));
}

namespace {

Model builtin_decay() {
  Model::Dynamics f = [](double, VectorView x, VectorView, VectorView p, std::span<double> dx) { dx[0] = -p[0] * x[0]; };
  Model::OutputMap g = [](double, VectorView x, VectorView, VectorView, std::span<double> y) { y[0] = x[0]; };
  Model::InitialState x0 = [](VectorView) { return Vector{1.0}; };
  return Model("decay", Dimensions{1, 1, 1, 1}, std::move(f), std::move(g), std::move(x0),
               ParameterBox{{1.0}, {0.5}, {1.5}});
}

}  // namespace

std::vector<std::string> builtin_model_names() { return {"jakstat", "scalar", "decay"}; }

Model builtin_model(std::string_view name) {
  if (name == "jakstat") return builtin_jakstat();
  if (name == "scalar") return make_lti_model(LtiSystem{{{-1.0}}, {{1.0}}, {{1.0}}}, "scalar");
  if (name == "decay") return builtin_decay();
  throw ConfigError("unknown builtin model '" + std::string(name) + "'");
}

LtiSystem parse_lti(std::string_view text) {
  auto blocks = parse_matrix_blocks(text);
  for (const char* key : {"A", "B", "C"}) {
    if (!blocks.contains(key)) throw ParseError(0, std::string("missing block '") + key + "'");
  }
  for (const auto& [name, m] : blocks) {
    if (name != "A" && name != "B" && name != "C") throw ParseError(0, "unexpected block '" + name + "'");
  }
  LtiSystem sys{blocks["A"], blocks["B"], blocks["C"]};
  if (!sys.A.square()) throw ConfigError("A is " + std::to_string(sys.A.rows()) + "x" + std::to_string(sys.A.cols()) + ", must be square");
  if (sys.B.rows() != sys.A.rows()) throw ConfigError("B has " + std::to_string(sys.B.rows()) + " rows, A has " + std::to_string(sys.A.rows()));
  if (sys.C.cols() != sys.A.cols()) throw ConfigError("C has " + std::to_string(sys.C.cols()) + " columns, A has " + std::to_string(sys.A.cols()));
  return sys;
}

Model load_lti(std::string_view text, std::string name) { return make_lti_model(parse_lti(text), std::move(name)); }

}  // namespace empgram
