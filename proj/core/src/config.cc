#include "slicing/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "slicing/errors.h"

namespace slicing {

namespace {

using nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string at(const std::string& path, std::size_t i) {
  return fmt::format("{}[{}]", path, i);
}

// Collects every problem instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, std::string_view what) {
    errors.push_back(fmt::format("{}: {}", path, what));
  }

  const json* field(const json& obj, std::string_view key, const std::string& path,
                    bool required = true) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(std::string(key));
    if (it == obj.end()) {
      if (required) fail(join(path, key), "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, std::string_view key, const std::string& path,
                               bool required = true) {
    const json* v = field(obj, key, path, required);
    if (!v) return std::nullopt;
    return as_number(*v, join(path, key));
  }

  std::optional<double> as_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<long long> integer(const json& obj, std::string_view key,
                                   const std::string& path, bool required = true) {
    const json* v = field(obj, key, path, required);
    if (!v) return std::nullopt;
    return as_integer(*v, join(path, key));
  }

  std::optional<long long> as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) {
      fail(path, "expected an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> string(const json& obj, std::string_view key,
                                    const std::string& path, bool required = true) {
    const json* v = field(obj, key, path, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  template <typename T>
  std::vector<T> list(const json& obj, std::string_view key, const std::string& path) {
    std::vector<T> out;
    const json* v = field(obj, key, path);
    if (!v) return out;
    const auto p = join(path, key);
    if (!v->is_array()) {
      fail(p, "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if constexpr (std::is_integral_v<T>) {
        if (auto x = as_integer((*v)[i], at(p, i))) out.push_back(static_cast<T>(*x));
      } else {
        if (auto x = as_number((*v)[i], at(p, i))) out.push_back(static_cast<T>(*x));
      }
    }
    return out;
  }
};

AccuracyCoeffs read_coeffs(Reader& r, const json& v, const std::string& path) {
  AccuracyCoeffs c;
  if (!v.is_array() || v.size() != 6) {
    r.fail(path, "expected an array of six coefficients g1..g6");
    return c;
  }
  for (std::size_t k = 0; k < 6; ++k) {
    if (auto x = r.as_number(v[k], at(path, k))) c.g[k] = *x;
  }
  return c;
}

ModelSpec read_model(Reader& r, const json& v, const std::string& path, std::size_t position) {
  ModelSpec m;
  m.id = static_cast<int>(position + 1);
  if (!v.is_object()) {
    r.fail(path, "expected an object");
    return m;
  }
  if (auto id = r.integer(v, "id", path, false)) m.id = static_cast<int>(*id);
  if (const json* c = r.field(v, "coeffs", path)) m.coeffs = read_coeffs(r, *c, join(path, "coeffs"));
  if (auto x = r.number(v, "alpha", path)) m.alpha = *x;
  if (auto x = r.number(v, "c_max", path)) m.c_max = *x;
  if (auto x = r.number(v, "d_max", path)) m.d_max = *x;
  if (auto x = r.number(v, "l_min", path)) m.l_min = *x;
  if (auto x = r.number(v, "l_max", path)) m.l_max = *x;
  if (auto x = r.integer(v, "m_min", path)) m.m_min = static_cast<int>(*x);
  if (auto x = r.integer(v, "m_max", path)) m.m_max = static_cast<int>(*x);

  if (m.id != static_cast<int>(position + 1)) {
    r.fail(join(path, "id"), fmt::format("ids must be 1..I in order (expected {})", position + 1));
  }
  if (!(m.alpha > 0.0)) r.fail(join(path, "alpha"), "must be > 0");
  if (!(m.c_max > 0.0)) r.fail(join(path, "c_max"), "must be > 0");
  if (!(m.d_max > 0.0)) r.fail(join(path, "d_max"), "must be > 0");
  if (!(m.l_min > 0.0 && m.l_min <= m.l_max && m.l_max <= 100.0)) {
    r.fail(join(path, "l_min"), "need 0 < l_min <= l_max <= 100");
  }
  if (!(m.m_min >= 1 && m.m_min <= m.m_max)) {
    r.fail(join(path, "m_min"), "need 1 <= m_min <= m_max");
  }
  return m;
}

ResourcePool read_pool(Reader& r, const json& v, const std::string& path) {
  ResourcePool p;
  if (auto x = r.number(v, "psi_max", path)) p.psi_max = *x;
  if (auto x = r.number(v, "lambda_max", path)) p.lambda_max = *x;
  if (auto x = r.number(v, "phi", path)) p.phi = *x;
  if (auto x = r.number(v, "c_psi", path)) p.c_psi = *x;
  if (auto x = r.number(v, "c_lambda", path)) p.c_lambda = *x;
  if (auto x = r.number(v, "epsilon", path, false)) p.epsilon = *x;
  if (auto x = r.number(v, "dataset_size", path, false)) p.dataset_size = *x;
  if (auto x = r.number(v, "batch_size", path, false)) p.batch_size = *x;
  const std::pair<const char*, double> positive[] = {
      {"psi_max", p.psi_max}, {"lambda_max", p.lambda_max}, {"phi", p.phi},
      {"c_psi", p.c_psi},     {"c_lambda", p.c_lambda},     {"dataset_size", p.dataset_size},
      {"batch_size", p.batch_size}};
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0)) r.fail(join(path, name), "must be > 0");
  }
  if (!(p.epsilon >= 0.0)) r.fail(join(path, "epsilon"), "must be >= 0");
  return p;
}

ModelGrid read_grid(Reader& r, const json& v, const std::string& path) {
  ModelGrid g;
  if (!v.is_object()) {
    r.fail(path, "expected an object");
    return g;
  }
  g.l = r.list<double>(v, "l_grid", path);
  g.m = r.list<int>(v, "m_grid", path);
  g.psi = r.list<double>(v, "psi_grid", path);
  g.lambda = r.list<double>(v, "lambda_grid", path);
  return g;
}

// Shared grid (object) or one grid per model (array).
Grids read_grids(Reader& r, const json& v, std::size_t models) {
  Grids grids;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      grids.per_model.push_back(read_grid(r, v[i], at("grids", i)));
    }
    if (v.size() != models) {
      r.fail("grids", fmt::format("expected {} model grids, got {}", models, v.size()));
    }
  } else {
    grids.per_model.assign(models, read_grid(r, v, "grids"));
  }
  return grids;
}

// Grid membership and range checks reuse validate_grids.
void check_grids(Reader& r, const Grids& grids, const std::vector<ModelSpec>& models,
                 const ResourcePool& pool) {
  if (models.empty() || grids.per_model.size() != models.size()) return;
  try {
    validate_grids(grids, Environment(models, pool));
  } catch (const ConfigError& e) {
    std::istringstream lines(e.what());
    std::string line;
    std::getline(lines, line);  // "invalid grids:" banner
    while (std::getline(lines, line)) {
      r.errors.push_back(line.substr(line.find_first_not_of(' ')));
    }
  }
}

InitScheme read_init(Reader& r, const json& v) {
  const std::string path = "init";
  if (v.is_string()) {
    if (v.get<std::string>() == "uniform") return InitScheme::uniform();
    r.fail(path, "unknown init scheme '" + v.get<std::string>() + "'");
    return {};
  }
  const auto scheme = r.string(v, "scheme", path);
  if (!scheme) return {};
  if (*scheme == "uniform") return InitScheme::uniform();
  if (*scheme == "sbs") {
    InitScheme s = InitScheme::sbs(1, 1);
    if (auto c = r.integer(v, "center", path)) {
      if (*c < 1) r.fail(join(path, "center"), "must be >= 1");
      else s.center = static_cast<std::size_t>(*c);
    }
    if (auto k = r.integer(v, "subset_size", path)) {
      if (*k < 1) r.fail(join(path, "subset_size"), "J' must be >= 1");
      else s.subset_size = static_cast<std::size_t>(*k);
    }
    return s;
  }
  if (*scheme == "gbs") {
    InitScheme s = InitScheme::gbs(1.0, 1.0);
    if (auto mu = r.number(v, "mu", path)) s.mu = *mu;
    if (auto sigma = r.number(v, "sigma", path)) {
      if (!(*sigma > 0.0)) r.fail(join(path, "sigma"), "must be > 0");
      else s.sigma = *sigma;
    }
    return s;
  }
  r.fail(join(path, "scheme"), "unknown init scheme '" + *scheme + "' (expected uniform, sbs or gbs)");
  return {};
}

ModelAllocation read_allocation(Reader& r, const json& v, const std::string& path) {
  ModelAllocation a;
  if (auto x = r.number(v, "l", path)) a.l = *x;
  if (auto x = r.integer(v, "m", path)) a.m = static_cast<int>(*x);
  if (auto x = r.number(v, "psi", path)) a.psi = *x;
  if (auto x = r.number(v, "lambda", path)) a.lambda = *x;
  return a;
}

BaselineSelection read_baselines(Reader& r, const json& v, std::size_t models) {
  BaselineSelection b;
  const std::string path = "baselines";
  if (!v.is_object()) {
    r.fail(path, "expected an object");
    return b;
  }
  if (const json* oa = r.field(v, "oa", path, false)) {
    if (!oa->is_boolean()) r.fail(join(path, "oa"), "expected a boolean");
    else b.oa = oa->get<bool>();
  }
  if (const json* fa = r.field(v, "fa", path, false)) {
    const auto p = join(path, "fa");
    AllocationDecision d;
    if (fa->is_array()) {
      for (std::size_t i = 0; i < fa->size(); ++i) {
        d.per_model.push_back(read_allocation(r, (*fa)[i], at(p, i)));
      }
      if (fa->size() != models) {
        r.fail(p, fmt::format("expected {} per-model allocations, got {}", models, fa->size()));
      }
    } else if (fa->is_object()) {
      d.per_model.assign(models, read_allocation(r, *fa, p));
    } else if (!fa->is_null()) {
      r.fail(p, "expected an allocation object or an array of them");
    }
    if (!d.per_model.empty()) b.fa = std::move(d);
  }
  return b;
}

}  // namespace

EtaSetting parse_eta(std::string_view token) {
  if (token == "auto") return EtaSetting::optimal();
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("eta: '{}' is neither a number nor 'auto'", token));
  }
  if (!(value > 0.0 && value < 1.0)) {
    throw ConfigError(fmt::format("eta: {} outside (0, 1)", value));
  }
  return EtaSetting::fixed(value);
}

std::string to_string(const EtaSetting& eta) {
  return eta.automatic ? std::string("auto") : fmt::format("{:.9g}", eta.value);
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");

  Reader r;
  ExperimentConfig cfg;

  if (const json* env = r.field(root, "environment", "")) {
    if (const json* models = r.field(*env, "models", "environment")) {
      if (!models->is_array() || models->empty()) {
        r.fail("environment.models", "expected a non-empty array");
      } else {
        for (std::size_t i = 0; i < models->size(); ++i) {
          cfg.models.push_back(read_model(r, (*models)[i], at("environment.models", i), i));
        }
      }
    }
    if (const json* pool = r.field(*env, "pool", "environment")) {
      cfg.pool = read_pool(r, *pool, "environment.pool");
    }
    if (const json* sched = r.field(*env, "coeff_schedule", "environment", false)) {
      const std::string p = "environment.coeff_schedule";
      if (!sched->is_array()) {
        r.fail(p, "expected an array of {slot, coeffs} entries");
      } else {
        for (std::size_t k = 0; k < sched->size(); ++k) {
          const auto ep = at(p, k);
          const auto slot = r.integer((*sched)[k], "slot", ep);
          const json* rows = r.field((*sched)[k], "coeffs", ep);
          if (!slot || !rows) continue;
          if (*slot < 1) {
            r.fail(join(ep, "slot"), "slots are 1-based");
            continue;
          }
          if (!rows->is_array() || rows->size() != cfg.models.size()) {
            r.fail(join(ep, "coeffs"), "expected one coefficient row per model");
            continue;
          }
          std::vector<AccuracyCoeffs> cs;
          for (std::size_t i = 0; i < rows->size(); ++i) {
            cs.push_back(read_coeffs(r, (*rows)[i], at(join(ep, "coeffs"), i)));
          }
          cfg.coeff_schedule[static_cast<std::size_t>(*slot)] = std::move(cs);
        }
      }
    }
  }

  if (const json* grids = r.field(root, "grids", "")) {
    cfg.grids = read_grids(r, *grids, cfg.models.size());
    check_grids(r, cfg.grids, cfg.models, cfg.pool);
  }

  if (auto algo = r.string(root, "algorithm", "")) {
    try {
      cfg.algorithm = parse_algorithm(*algo);
    } catch (const ConfigError& e) {
      r.fail("algorithm", e.what());
    }
  }

  if (const json* eta = r.field(root, "eta", "")) {
    if (eta->is_string()) {
      if (eta->get<std::string>() == "auto") cfg.eta = EtaSetting::optimal();
      else r.fail("eta", "expected a number in (0, 1) or 'auto'");
    } else if (auto x = r.as_number(*eta, "eta")) {
      if (!(*x > 0.0 && *x < 1.0)) r.fail("eta", fmt::format("{} outside (0, 1)", *x));
      else cfg.eta = EtaSetting::fixed(*x);
    }
  }

  if (const json* init = r.field(root, "init", "", false)) cfg.init = read_init(r, *init);

  if (auto t = r.integer(root, "horizon", "")) {
    if (*t < 1) r.fail("horizon", "must be >= 1");
    else cfg.horizon = static_cast<std::size_t>(*t);
  }

  if (const json* seeds = r.field(root, "seeds", "")) {
    if (!seeds->is_array() || seeds->empty()) {
      r.fail("seeds", "expected a non-empty array of integers");
    } else {
      for (std::size_t i = 0; i < seeds->size(); ++i) {
        if (auto s = r.as_integer((*seeds)[i], at("seeds", i))) {
          if (*s < 0) r.fail(at("seeds", i), "must be >= 0");
          else cfg.seeds.push_back(static_cast<std::uint64_t>(*s));
        }
      }
    }
  }

  if (const json* b = r.field(root, "baselines", "", false)) {
    cfg.baselines = read_baselines(r, *b, cfg.models.size());
  }
  if (auto out = r.string(root, "output_dir", "", false)) cfg.output_dir = *out;
  if (const json* cad = r.field(root, "snapshot_cadence", "", false)) {
    if (cad->is_string() && cad->get<std::string>() == "auto") {
      cfg.snapshot_cadence.reset();
    } else if (auto c = r.as_integer(*cad, "snapshot_cadence")) {
      if (*c < 0) r.fail("snapshot_cadence", "must be >= 0");
      else cfg.snapshot_cadence = static_cast<std::size_t>(*c);
    }
  }

  if (!r.errors.empty()) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& e : r.errors) os << "\n  " << e;
    throw ConfigError(os.str());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace slicing
