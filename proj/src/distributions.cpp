#include "rtgq/distributions.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "rtgq/error.hpp"

namespace rtgq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::Validation, std::string(name) + " must be a positive finite number");
  }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(std::string_view field, std::string_view whole) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::Parse, "bad number '" + std::string(field) + "' in service spec '" +
                                      std::string(whole) + "'");
  }
  return v;
}

int parse_int(std::string_view field, std::string_view whole) {
  int v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::Parse, "bad integer '" + std::string(field) + "' in service spec '" +
                                      std::string(whole) + "'");
  }
  return v;
}

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ServiceDistribution ServiceDistribution::exponential(double mu) {
  require_positive(mu, "exponential rate");
  return ServiceDistribution(Exponential{mu});
}

ServiceDistribution ServiceDistribution::deterministic(double d) {
  require_positive(d, "deterministic duration");
  return ServiceDistribution(Deterministic{d});
}

ServiceDistribution ServiceDistribution::erlang(int shape, double rate) {
  if (shape < 1) throw Error(ErrorCode::Validation, "erlang shape must be a positive integer");
  require_positive(rate, "erlang rate");
  return ServiceDistribution(Erlang{shape, rate});
}

ServiceDistribution ServiceDistribution::hyperexp2(double p, double mu1, double mu2) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::Validation, "hyper2 p must lie in [0, 1]");
  require_positive(mu1, "hyper2 mu1");
  require_positive(mu2, "hyper2 mu2");
  return ServiceDistribution(HyperExp2{p, mu1, mu2});
}

ServiceDistribution ServiceDistribution::parse(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts.front();
  auto expect_fields = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      throw Error(ErrorCode::Parse, "service spec '" + std::string(text) + "' expects " +
                                        std::to_string(n) + " parameter(s) after '" +
                                        std::string(kind) + ":'");
    }
  };
  if (kind == "exp") {
    expect_fields(1);
    return exponential(parse_number(parts[1], text));
  }
  if (kind == "det") {
    expect_fields(1);
    return deterministic(parse_number(parts[1], text));
  }
  if (kind == "erlang") {
    expect_fields(2);
    return erlang(parse_int(parts[1], text), parse_number(parts[2], text));
  }
  if (kind == "hyper2") {
    expect_fields(3);
    return hyperexp2(parse_number(parts[1], text), parse_number(parts[2], text),
                     parse_number(parts[3], text));
  }
  throw Error(ErrorCode::Parse, "unknown service law '" + std::string(kind) +
                                    "' (expected exp, det, erlang or hyper2)");
}

std::string ServiceDistribution::to_string() const {
  return std::visit(
      Overloaded{
          [](const Exponential& e) { return "exp:" + shortest(e.mu); },
          [](const Deterministic& d) { return "det:" + shortest(d.d); },
          [](const Erlang& e) { return "erlang:" + std::to_string(e.shape) + ":" + shortest(e.rate); },
          [](const HyperExp2& h) {
            return "hyper2:" + shortest(h.p) + ":" + shortest(h.mu1) + ":" + shortest(h.mu2);
          },
      },
      law_);
}

Moments moments(const ServiceDistribution& dist) {
  return std::visit(
      Overloaded{
          [](const Exponential& e) { return Moments{1.0 / e.mu, 2.0 / (e.mu * e.mu)}; },
          [](const Deterministic& d) { return Moments{d.d, d.d * d.d}; },
          [](const Erlang& e) {
            const double k = e.shape;
            return Moments{k / e.rate, k * (k + 1.0) / (e.rate * e.rate)};
          },
          [](const HyperExp2& h) {
            return Moments{h.p / h.mu1 + (1.0 - h.p) / h.mu2,
                           2.0 * h.p / (h.mu1 * h.mu1) + 2.0 * (1.0 - h.p) / (h.mu2 * h.mu2)};
          },
      },
      dist.variant());
}

namespace {
void require_nonneg_s(double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::Domain, "transform argument s must be >= 0");
}
}  // namespace

double lst(const ServiceDistribution& dist, double s) {
  require_nonneg_s(s);
  return std::visit(
      Overloaded{
          [s](const Exponential& e) { return e.mu / (e.mu + s); },
          [s](const Deterministic& d) { return std::exp(-s * d.d); },
          [s](const Erlang& e) { return std::exp(-e.shape * std::log1p(s / e.rate)); },
          [s](const HyperExp2& h) {
            return h.p * h.mu1 / (h.mu1 + s) + (1.0 - h.p) * h.mu2 / (h.mu2 + s);
          },
      },
      dist.variant());
}

double lst_complement(const ServiceDistribution& dist, double s) {
  require_nonneg_s(s);
  return std::visit(
      Overloaded{
          [s](const Exponential& e) { return s / (e.mu + s); },
          [s](const Deterministic& d) { return -std::expm1(-s * d.d); },
          [s](const Erlang& e) { return -std::expm1(-e.shape * std::log1p(s / e.rate)); },
          [s](const HyperExp2& h) { return h.p * s / (h.mu1 + s) + (1.0 - h.p) * s / (h.mu2 + s); },
      },
      dist.variant());
}

double pdf(const ServiceDistribution& dist, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::Domain, "density argument t must be >= 0");
  return std::visit(
      Overloaded{
          [t](const Exponential& e) { return e.mu * std::exp(-e.mu * t); },
          [](const Deterministic&) -> double {
            throw Error(ErrorCode::Unsupported, "deterministic service has no density");
          },
          [t](const Erlang& e) {
            const double k = e.shape;
            if (t == 0.0) return e.shape == 1 ? e.rate : 0.0;
            return std::exp(k * std::log(e.rate) + (k - 1.0) * std::log(t) - e.rate * t -
                            std::lgamma(k));
          },
          [t](const HyperExp2& h) {
            return h.p * h.mu1 * std::exp(-h.mu1 * t) + (1.0 - h.p) * h.mu2 * std::exp(-h.mu2 * t);
          },
      },
      dist.variant());
}

double sample(const ServiceDistribution& dist, RandomSource& rng) {
  return std::visit(
      Overloaded{
          [&rng](const Exponential& e) { return rng.exponential(e.mu); },
          [](const Deterministic& d) { return d.d; },
          [&rng](const Erlang& e) {
            double total = 0.0;
            for (int i = 0; i < e.shape; ++i) total += rng.exponential(e.rate);
            return total;
          },
          [&rng](const HyperExp2& h) {
            const double u = rng.uniform();
            return rng.exponential(u < h.p ? h.mu1 : h.mu2);
          },
      },
      dist.variant());
}

}  // namespace rtgq
