#include "ssk/report.hpp"

#include <sstream>

#include "ssk/errors.hpp"

namespace ssk {

Json to_json(const MixturePolynomial& mixture) {
  Json arr = Json::array();
  for (const auto& t : mixture.terms()) arr.push_back({{"p", t.degree}, {"w", t.weight}});
  return arr;
}

MixturePolynomial mixture_from_json(const Json& j) {
  if (j.is_string()) return MixturePolynomial::parse(j.get<std::string>());
  if (!j.is_array()) throw ConfigError("mixture must be an array of {p, w} objects");
  std::vector<MixtureTerm> terms;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("p") || !item.contains("w"))
      throw ConfigError("mixture entries need fields p and w");
    terms.push_back({item.at("p").get<int>(), item.at("w").get<double>()});
  }
  return MixturePolynomial(std::move(terms));
}

Json to_json(const RSPoint& p) {
  return {{"beta", p.beta}, {"h", p.h}, {"q", p.q}, {"r", p.r}, {"b", p.b},
          {"free_energy", free_energy_rs(p)}, {"mixture", to_json(p.mixture)}};
}

Json to_json(const RegionDiagnostics& d) {
  Json j = {{"roots", d.roots}, {"root_at_zero", d.root_at_zero}, {"pass", d.pass}};
  j["M_norm1"] = std::isnan(d.m_norm1) ? Json(nullptr) : Json(d.m_norm1);
  if (!d.reason.empty()) j["reason"] = d.reason;
  return j;
}

Json to_json(const FluctuationReport& rep) {
  Json j;
  j["point"] = to_json(rep.point);
  j["W"] = rep.wu.w;
  j["U"] = rep.wu.u;
  j["Y"] = Json(std::vector<double>(rep.y.begin(), rep.y.end()));
  Json m = Json::array();
  for (int i = 0; i < 7; ++i) {
    Json row = Json::array();
    for (int k = 0; k < 7; ++k) row.push_back(rep.m(i, k));
    m.push_back(row);
  }
  j["M"] = m;
  j["v"] = Json(std::vector<double>(rep.v.data(), rep.v.data() + 7));
  Json limits;
  for (int l = 0; l < 7; ++l) limits[std::string(kLimitNames[l])] = rep.limits[l];
  j["limits"] = limits;
  j["cond"] = rep.cond;
  j["M_norm1"] = rep.m_norm1;
  j["matrix_variant"] = std::string(to_string(rep.variant));
  return j;
}

Json to_json(const EstimatorSummary& s) {
  return {{"mean", s.mean}, {"stderr", s.std_error}, {"n_effective", s.n_effective},
          {"n_disorder", s.n_disorder}};
}

Json to_json(const ExperimentConfig& c) {
  Json j = {{"mixture", to_json(c.mixture)}, {"beta", c.beta},       {"h", c.h},
            {"N", c.n},                      {"n_disorder", c.n_disorder},
            {"n_chains", c.n_chains},        {"sweeps", c.sweeps},   {"burnin", c.burnin},
            {"seed", c.seed},                {"measure_every", c.measure_every},
            {"batches", c.batches},          {"dump_every", c.dump_every}};
  if (!c.dump_path.empty()) j["dump_path"] = c.dump_path;
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  try {
    if (j.contains("mixture")) c.mixture = mixture_from_json(j.at("mixture"));
    if (j.contains("beta")) c.beta = j.at("beta").get<double>();
    if (j.contains("h")) c.h = j.at("h").get<double>();
    if (j.contains("N")) c.n = j.at("N").get<int>();
    if (j.contains("n_disorder")) c.n_disorder = j.at("n_disorder").get<int>();
    if (j.contains("n_chains")) c.n_chains = j.at("n_chains").get<int>();
    if (j.contains("sweeps")) c.sweeps = j.at("sweeps").get<long>();
    if (j.contains("burnin")) c.burnin = j.at("burnin").get<long>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("measure_every")) c.measure_every = j.at("measure_every").get<int>();
    if (j.contains("batches")) c.batches = j.at("batches").get<int>();
    if (j.contains("dump_every")) c.dump_every = j.at("dump_every").get<long>();
    if (j.contains("dump_path")) c.dump_path = j.at("dump_path").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("bad configuration field: ") + ex.what());
  }
  return c;
}

Json to_json(const ExperimentResult& r) {
  Json j;
  j["config"] = to_json(r.config);
  j["q"] = r.q;
  j["r"] = r.r;
  j["tail_threshold"] = r.tail_threshold;
  Json est;
  for (int k = 0; k < kObservableCount; ++k)
    est[std::string(observable_name(k))] = to_json(r.estimates[k]);
  j["estimates"] = est;
  j["diagnostics"] = {{"rhat_max", r.rhat_max},
                      {"converged", r.converged},
                      {"max_energy_drift", r.max_energy_drift},
                      {"mean_acceptance", r.mean_acceptance}};
  return j;
}

Json to_json(const ThermoResult& t) {
  Json grid = Json::array();
  for (std::size_t i = 0; i < t.betas.size(); ++i) {
    grid.push_back({{"beta", t.betas[i]},
                    {"xi_R12", to_json(t.xi_overlap[i])},
                    {"integrand", t.integrand[i]},
                    {"integrand_stderr", t.integrand_stderr[i]}});
  }
  return {{"grid", grid},
          {"F_N_zero", t.f_zero},
          {"F_N", t.f_n},
          {"F_N_stderr", t.f_n_stderr},
          {"simpson_error", t.simpson_error},
          {"grid_warning", t.grid_warning},
          {"F_RS", t.f_rs},
          {"F_RS_zero", t.f_rs_zero}};
}

std::string fluctuation_csv(const FluctuationReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "name,limit,v";
  for (int k = 0; k < 7; ++k) os << ",M" << k + 1;
  os << '\n';
  for (int l = 0; l < 7; ++l) {
    os << kLimitNames[l] << ',' << rep.limits[l] << ',' << rep.v[l];
    for (int k = 0; k < 7; ++k) os << ',' << rep.m(l, k);
    os << '\n';
  }
  return os.str();
}

std::string experiment_csv(const ExperimentResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "disorder,acceptance,step,rhat";
  for (int k = 0; k < kObservableCount; ++k) os << ',' << observable_name(k);
  os << '\n';
  for (const auto& row : r.per_disorder) {
    os << row.index << ',' << row.acceptance << ',' << row.step << ',' << row.rhat;
    for (int k = 0; k < kObservableCount; ++k) os << ',' << row.mean[k];
    os << '\n';
  }
  return os.str();
}

}  // namespace ssk
