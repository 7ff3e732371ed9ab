#include "empgram/signals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "empgram/error.hpp"

namespace empgram {

InputFunction::InputFunction() : kind_(InputKind::step), eval_([](double) { return 1.0; }) {}

InputFunction InputFunction::custom(std::function<double(double)> fn) {
  if (!fn) throw ConfigError("custom input: empty function");
  return InputFunction(InputKind::custom, std::move(fn));
}

namespace {

// xorshift64*; one bit per hold interval, sequence wraps after the horizon.
std::shared_ptr<const std::vector<unsigned char>> prbs_bits(std::uint64_t seed, std::size_t count) {
  auto bits = std::make_shared<std::vector<unsigned char>>(count);
  std::uint64_t s = seed ? seed : 0x9E3779B97F4A7C15ull;
  for (auto& b : *bits) {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    b = static_cast<unsigned char>(((s * 0x2545F4914F6CDD1Dull) >> 63) & 1u);
  }
  return bits;
}

}  // namespace

InputFunction make_input(InputKind kind, const InputParams& p) {
  if (kind != InputKind::step && kind != InputKind::custom && !(p.step > 0.0))
    throw ConfigError("input: step width h must be positive");
  switch (kind) {
    case InputKind::step:
      return InputFunction(kind, [](double) { return 1.0; });
    case InputKind::impulse: {
      const double h = p.step;
      return InputFunction(kind, [h](double t) { return (t >= 0.0 && t < h) ? 1.0 / h : 0.0; });
    }
    case InputKind::sinc: {
      const double inv_h = 1.0 / p.step;
      return InputFunction(kind, [inv_h](double t) {
        if (t == 0.0) return 1.0;
        const double a = t * inv_h;
        return std::sin(a) / a;
      });
    }
    case InputKind::chirp: {
      if (!(p.horizon > 0.0)) throw ConfigError("chirp input: horizon must be positive");
      const double T = p.horizon;
      const double f0 = 1.0 / T;
      const double f1 = 0.5 / p.step;
      return InputFunction(kind, [T, f0, f1](double t) {
        const double f = f0 + (f1 - f0) * t / (2.0 * T);
        return std::exp(-t / T) * std::cos(2.0 * std::numbers::pi * f * t);
      });
    }
    case InputKind::prbs: {
      if (!(p.horizon > 0.0)) throw ConfigError("prbs input: horizon must be positive");
      const double hold = p.bit_duration > 0.0 ? p.bit_duration : 10.0 * p.step;
      const auto count = static_cast<std::size_t>(std::ceil(p.horizon / hold)) + 1;
      auto bits = prbs_bits(p.seed, count);
      return InputFunction(kind, [bits, hold](double t) {
        if (t < 0.0) return 0.0;
        const auto i = static_cast<std::size_t>(std::floor(t / hold)) % bits->size();
        return static_cast<double>((*bits)[i]);
      });
    }
    case InputKind::custom:
      break;
  }
  throw ConfigError("input: custom inputs are built with InputFunction::custom");
}

InputKind parse_input_kind(std::string_view name) {
  if (name == "impulse") return InputKind::impulse;
  if (name == "step") return InputKind::step;
  if (name == "sinc") return InputKind::sinc;
  if (name == "chirp") return InputKind::chirp;
  if (name == "prbs") return InputKind::prbs;
  throw ConfigError("unknown input kind '" + std::string(name) + "'");
}

std::string_view to_string(InputKind kind) {
  switch (kind) {
    case InputKind::impulse: return "impulse";
    case InputKind::step: return "step";
    case InputKind::sinc: return "sinc";
    case InputKind::chirp: return "chirp";
    case InputKind::prbs: return "prbs";
    case InputKind::custom: return "custom";
  }
  return "custom";
}

std::vector<std::string_view> input_kind_names() { return {"impulse", "step", "sinc", "chirp", "prbs"}; }

}  // namespace empgram
