#include "gwsurr/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "gwsurr/container.hpp"

namespace gwsurr {

void RunConfig::validate() const {
  if (!(q_min >= 1.0)) throw std::invalid_argument("config: q_min must be >= 1");
  if (!(q_min < q_max)) throw std::invalid_argument("config: q_min must be < q_max");
  if (n_train < 1 || n_val < 0 || n_test < 0) {
    throw std::invalid_argument("config: sample counts must be positive");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
  if (!(t_c > grid.t_end)) throw std::invalid_argument("config: t_c must exceed grid.t_end");
  for (const TrainConfig* tc : {&ae, &regressor}) {
    if (tc->epochs < 0 || tc->batch_size < 1 || !(tc->lr0 > 0.0) ||
        !(tc->schedule_gamma > 0.0 && tc->schedule_gamma <= 1.0) ||
        tc->schedule_step_epochs < 1) {
      throw std::invalid_argument("config: bad training recipe");
    }
  }
}

namespace {

nlohmann::json train_to_json(const TrainConfig& t) {
  return {{"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"lr0", t.lr0},
          {"schedule_gamma", t.schedule_gamma},
          {"schedule_step_epochs", t.schedule_step_epochs}};
}

TrainConfig train_from_json(const nlohmann::json& j, const TrainConfig& defaults) {
  TrainConfig t = defaults;
  t.epochs = j.value("epochs", t.epochs);
  t.batch_size = j.value("batch_size", t.batch_size);
  t.lr0 = j.value("lr0", t.lr0);
  t.schedule_gamma = j.value("schedule_gamma", t.schedule_gamma);
  t.schedule_step_epochs = j.value("schedule_step_epochs", t.schedule_step_epochs);
  return t;
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["q_min"] = c.q_min;
  j["q_max"] = c.q_max;
  j["n_train"] = c.n_train;
  j["n_val"] = c.n_val;
  j["n_test"] = c.n_test;
  j["grid"] = {{"t_start", c.grid.t_start},
               {"t_end", c.grid.t_end},
               {"n_samples", c.grid.n_samples}};
  j["t_c"] = c.t_c;
  j["tol"] = c.tol;
  j["ae"] = train_to_json(c.ae);
  j["ae"]["latent_dim"] = c.ae_latent_dim;
  j["ae"]["hidden"] = c.ae_hidden;
  j["regressor"] = train_to_json(c.regressor);
  j["seed"] = c.seed;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.q_min = j.value("q_min", c.q_min);
  c.q_max = j.value("q_max", c.q_max);
  c.n_train = j.value("n_train", c.n_train);
  c.n_val = j.value("n_val", c.n_val);
  c.n_test = j.value("n_test", c.n_test);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid = TimeGrid(g.value("t_start", 0.0), g.value("t_end", 4990.0),
                      g.value("n_samples", 4096));
  }
  c.t_c = j.value("t_c", c.t_c);
  c.tol = j.value("tol", c.tol);
  if (j.contains("ae")) {
    c.ae = train_from_json(j.at("ae"), c.ae);
    c.ae_latent_dim = j.at("ae").value("latent_dim", c.ae_latent_dim);
    c.ae_hidden = j.at("ae").value("hidden", c.ae_hidden);
  }
  if (j.contains("regressor")) c.regressor = train_from_json(j.at("regressor"), c.regressor);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

TrainConfig RunConfig::ae_config() const {
  TrainConfig t = ae;
  t.seed = ae_seed();
  return t;
}

TrainConfig RunConfig::regressor_config() const {
  TrainConfig t = regressor;
  t.seed = regressor_seed();
  return t;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad config JSON in " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

void save_run_config(const std::filesystem::path& path, const RunConfig& config) {
  atomic_write_bytes(path, to_json(config).dump(2) + "\n");
}

std::vector<double> equispaced_q(double q_min, double q_max, int n) {
  if (n < 1) throw std::invalid_argument("equispaced_q: n must be >= 1");
  std::vector<double> q(n);
  if (n == 1) {
    q[0] = q_min;
    return q;
  }
  for (int i = 0; i < n; ++i) q[i] = q_min + (q_max - q_min) * i / (n - 1);
  return q;
}

std::vector<double> uniform_q(double q_min, double q_max, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = rng.uniform(q_min, q_max);
  std::sort(q.begin(), q.end());
  return q;
}

}  // namespace gwsurr
