#include "hyperwalk/environment.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace hyperwalk {

EnvironmentModel EnvironmentModel::bernoulli(double p) {
  EnvironmentModel m;
  m.kind = ModelKind::kBernoulli;
  m.p = p;
  return m;
}

EnvironmentModel EnvironmentModel::conductance(double alpha, ConductanceLaw law) {
  EnvironmentModel m;
  m.kind = ModelKind::kConductance;
  m.alpha = alpha;
  m.law = law;
  return m;
}

void EnvironmentModel::validate() const {
  if (kind == ModelKind::kBernoulli && !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in [0, 1]");
  }
  if (kind == ModelKind::kConductance && !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

std::string EnvironmentModel::describe() const {
  std::ostringstream os;
  if (kind == ModelKind::kBernoulli) {
    os << "bernoulli(p=" << p << ")";
  } else {
    os << "conductance(alpha=" << alpha << ", law=" << to_string(law) << ")";
  }
  return os.str();
}

ConductanceLaw parse_conductance_law(const std::string& name) {
  if (name == "log_uniform") return ConductanceLaw::kLogUniform;
  if (name == "uniform") return ConductanceLaw::kUniform;
  throw std::invalid_argument("unknown conductance law '" + name + "' (log_uniform | uniform)");
}

std::string to_string(ConductanceLaw law) {
  return law == ConductanceLaw::kLogUniform ? "log_uniform" : "uniform";
}

Key128 edge_key(std::uint64_t seed) { return derive_key(domain::kEdge, seed); }

double edge_uniform(const Key128& key, const Digest128& a, const Digest128& b) {
  const Digest128& lo = (a < b) ? a : b;
  const Digest128& hi = (a < b) ? b : a;
  const std::uint64_t words[4] = {lo.lo, lo.hi, hi.lo, hi.hi};
  return open_unit_interval(siphash128_words(key, words));
}

double conductance_from_uniform(const EnvironmentModel& model, double u) {
  const double a = model.alpha;
  double c = 0.0;
  if (model.law == ConductanceLaw::kLogUniform) {
    c = std::pow(a, 1.0 - 2.0 * u);
  } else {
    c = a + u * (1.0 / a - a);
  }
  // Rounding can land on an endpoint when u is within an ulp of 0 or 1.
  return std::clamp(c, std::nextafter(a, 1.0), std::nextafter(1.0 / a, 0.0));
}

std::uint64_t environment_seed(std::uint64_t master, std::uint64_t replica, std::uint64_t attempt) {
  const Key128 k = derive_key(domain::kEnvironmentSeed, master, replica, attempt);
  std::uint64_t v = 0;
  std::memcpy(&v, k.data(), sizeof v);
  return v;
}

}  // namespace hyperwalk
