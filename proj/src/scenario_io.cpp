#include <json.hpp>
#include <set>

#include "format.hpp"
#include "rtgq/cli_io.hpp"
#include "rtgq/error.hpp"

namespace rtgq {

namespace {

double number_field(const nlohmann::json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) throw Error(ErrorCode::Validation, std::string("missing field '") + name + "'");
  if (!it->is_number()) {
    throw Error(ErrorCode::Validation, std::string("field '") + name + "' must be a number");
  }
  return it->get<double>();
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("scenario document: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "scenario document must be a single object");

  static const std::set<std::string> known{"lambda", "theta", "service"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw Error(ErrorCode::UnknownField, "unknown field '" + key + "'");
  }

  const double lambda = number_field(doc, "lambda");
  const double theta = number_field(doc, "theta");
  const auto svc = doc.find("service");
  if (svc == doc.end()) throw Error(ErrorCode::Validation, "missing field 'service'");
  if (!svc->is_string()) throw Error(ErrorCode::Validation, "field 'service' must be a string");

  std::optional<ServiceDistribution> service;
  try {
    service = ServiceDistribution::parse(svc->get<std::string>());
  } catch (const Error& e) {
    throw Error(e.code(), std::string("field 'service': ") + e.what());
  }
  return Scenario(lambda, theta, *service);
}

void write_pi_csv(std::ostream& out, const StationaryDistribution& pi) {
  out << "state,probability\n";
  for (std::size_t k = 0; k < pi.pi.size(); ++k) {
    out << k << ',' << detail::format_double(pi.pi[k]) << '\n';
  }
}

std::string analytic_json(const AnalyticReport& r) {
  using detail::json_number;
  if (!r.stable) {
    return "{\"rho\":" + json_number(r.rho) +
           ",\"stable\":false,\"n_mean\":null,\"w_mean\":null,\"pi0\":null}";
  }
  return "{\"rho\":" + json_number(r.rho) + ",\"stable\":true,\"n_mean\":" + json_number(r.n_mean) +
         ",\"w_mean\":" + json_number(r.w_mean) + ",\"pi0\":" + json_number(r.pi0) +
         ",\"pk_n_mean\":" + json_number(r.pk_n_mean) + "}";
}

std::string chain_json(const TransitionMatrix& m, const StationaryDistribution& pi) {
  using detail::json_number;
  const auto mean = chain_mean(pi);
  return "{\"K\":" + std::to_string(m.truncation()) + ",\"pi0\":" + json_number(pi.pi.front()) +
         ",\"chain_mean\":" + json_number(mean.mean) + ",\"residual\":" + json_number(pi.residual) +
         ",\"tail_mass\":" + json_number(m.tail_mass()) +
         ",\"truncation_suspect\":" + (mean.truncation_suspect ? "true" : "false") + "}";
}

}  // namespace rtgq
