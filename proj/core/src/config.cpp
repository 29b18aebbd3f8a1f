#include <fstream>
#include <sstream>

#include "dampedwave/coefficient.hpp"
#include "dampedwave/counterexample.hpp"
#include "json.hpp"

namespace dampedwave {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number())
    throw CoefficientError(std::string("coefficient config: missing numeric field '") + field +
                           "'");
  return j[field].get<double>();
}

}  // namespace

Coefficient Coefficient::from_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw CoefficientError(std::string("coefficient config: ") + e.what());
  }
  if (!j.contains("family") || !j["family"].is_string())
    throw CoefficientError("coefficient config: missing string field 'family'");
  const std::string family = j["family"].get<std::string>();
  const double horizon = j.value("horizon", 1.0);
  const int k = j.value("k", 0);
  const double alpha = j.value("alpha", 1.0);

  if (family == "power") {
    Coefficient c = power(j.value("scale", 1.0), require_number(j, "exponent"), horizon, k, alpha);
    return c;
  }
  if (family == "constant") return constant(require_number(j, "mu"), horizon);
  if (family == "zero") return zero(horizon);
  if (family == "sinsq") return sin_squared(require_number(j, "omega"), horizon, k, alpha);
  if (family == "table") {
    if (!j.contains("path") || !j["path"].is_string())
      throw CoefficientError("coefficient config: table needs a 'path' to a two-column CSV");
    std::ifstream in(j["path"].get<std::string>());
    if (!in) throw CoefficientError("coefficient config: cannot open table CSV");
    std::vector<double> ts, cs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string a, b;
      if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) continue;
      if (first) {  // optional header
        first = false;
        try {
          ts.push_back(std::stod(a));
          cs.push_back(std::stod(b));
        } catch (...) {
        }
        continue;
      }
      ts.push_back(std::stod(a));
      cs.push_back(std::stod(b));
    }
    return table(std::move(ts), std::move(cs), k, alpha);
  }
  if (family == "counterexample") {
    CounterexampleParams p;
    p.delta = j.value("delta", 1.0);
    p.sigma = j.value("sigma", 0.0);
    p.k = k;
    p.alpha = alpha;
    p.n_max = j.value("n_max", 6);
    const CounterexampleBundle bundle = select_sequences(p);
    return build_coefficient(bundle);
  }
  throw CoefficientError("coefficient config: unknown family '" + family + "'");
}

}  // namespace dampedwave
