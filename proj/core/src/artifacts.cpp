#include "gwsurr/artifacts.hpp"

#include <stdexcept>

namespace gwsurr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json grid_to_json(const TimeGrid& g) {
  return {{"t_start", g.t_start}, {"t_end", g.t_end}, {"n_samples", g.n_samples}};
}

TimeGrid grid_from_json(const json& j) {
  return TimeGrid(j.at("t_start").get<double>(), j.at("t_end").get<double>(),
                  j.at("n_samples").get<int>());
}

json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json train_config_to_json(const TrainConfig& t) {
  return {{"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"lr0", t.lr0},
          {"schedule_gamma", t.schedule_gamma},
          {"schedule_step_epochs", t.schedule_step_epochs},
          {"seed", t.seed}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig t;
  t.epochs = j.at("epochs").get<int>();
  t.batch_size = j.at("batch_size").get<int>();
  t.lr0 = j.at("lr0").get<double>();
  t.schedule_gamma = j.at("schedule_gamma").get<double>();
  t.schedule_step_epochs = j.at("schedule_step_epochs").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

json history_to_json(const TrainHistory& h) {
  return {{"train", h.train_loss}, {"val", h.val_loss}};
}

TrainHistory history_from_json(const json& j) {
  TrainHistory h;
  h.train_loss = j.at("train").get<std::vector<double>>();
  h.val_loss = j.at("val").get<std::vector<double>>();
  return h;
}

ArrayContainer load_kind(const fs::path& path, const std::string& kind) {
  ArrayContainer c = load_container(path);
  const std::string got = c.meta.value("kind", "");
  if (got != kind) {
    throw std::runtime_error("expected artifact kind '" + kind + "' but " + path.string() +
                             " holds '" + got + "'");
  }
  return c;
}

}  // namespace

std::string artifact_kind(const fs::path& path) {
  return load_container(path).meta.value("kind", "");
}

// --- waveform sets ---------------------------------------------------------

void save_waveform_set(const fs::path& path, const WaveformSet& set) {
  json meta;
  meta["kind"] = "waveform_set";
  meta["q_values"] = set.q_values;
  meta["grid"] = grid_to_json(set.grid);
  meta["gen_grid"] = grid_to_json(set.gen_grid);
  meta["peak_index"] = set.peak_index;
  save_container(path, ArrayContainer::complex(set.waveforms, meta));
}

WaveformSet load_waveform_set(const fs::path& path) {
  ArrayContainer c = load_kind(path, "waveform_set");
  WaveformSet set;
  set.q_values = c.meta.at("q_values").get<std::vector<double>>();
  set.grid = grid_from_json(c.meta.at("grid"));
  set.gen_grid = grid_from_json(c.meta.at("gen_grid"));
  set.peak_index = c.meta.at("peak_index").get<int>();
  set.waveforms = std::move(c.c128);
  if (set.size() != static_cast<int>(set.q_values.size()) ||
      set.length() != set.grid.n_samples) {
    throw std::runtime_error("inconsistent waveform set in " + path.string());
  }
  return set;
}

// --- reduced basis ----------------------------------------------------------

void save_reduced_basis(const fs::path& path, const ReducedBasis& basis) {
  json meta;
  meta["kind"] = "reduced_basis";
  meta["tol"] = basis.tol;
  meta["greedy_q"] = basis.greedy_q;
  meta["greedy_errors"] = basis.greedy_errors;
  meta["grid"] = grid_to_json(basis.grid);
  meta["gen_grid"] = grid_to_json(basis.gen_grid);
  meta["peak_index"] = basis.peak_index;
  save_container(path, ArrayContainer::complex(basis.basis, meta));
}

ReducedBasis load_reduced_basis(const fs::path& path) {
  ArrayContainer c = load_kind(path, "reduced_basis");
  ReducedBasis b;
  b.tol = c.meta.at("tol").get<double>();
  b.greedy_q = c.meta.at("greedy_q").get<std::vector<double>>();
  b.greedy_errors = c.meta.at("greedy_errors").get<std::vector<double>>();
  b.grid = grid_from_json(c.meta.at("grid"));
  b.gen_grid = grid_from_json(c.meta.at("gen_grid"));
  b.peak_index = c.meta.at("peak_index").get<int>();
  b.basis = std::move(c.c128);
  return b;
}

// --- empirical interpolant ---------------------------------------------------

void save_eim(const fs::path& path, const EimModel& eim) {
  json meta;
  meta["kind"] = "eim";
  meta["node_indices"] =
      std::vector<int>(eim.node_indices.data(), eim.node_indices.data() + eim.size());
  meta["v_condition"] = eim.v_condition;
  meta["grid"] = grid_to_json(eim.grid);
  meta["gen_grid"] = grid_to_json(eim.gen_grid);
  meta["peak_index"] = eim.peak_index;
  save_container(path, ArrayContainer::complex(eim.interpolant, meta));
}

EimModel load_eim(const fs::path& path) {
  ArrayContainer c = load_kind(path, "eim");
  EimModel eim;
  const auto nodes = c.meta.at("node_indices").get<std::vector<int>>();
  eim.node_indices =
      Eigen::Map<const Eigen::VectorXi>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
  eim.v_condition = c.meta.at("v_condition").get<double>();
  eim.grid = grid_from_json(c.meta.at("grid"));
  eim.gen_grid = grid_from_json(c.meta.at("gen_grid"));
  eim.peak_index = c.meta.at("peak_index").get<int>();
  eim.interpolant = std::move(c.c128);
  if (eim.interpolant.cols() != eim.size()) {
    throw std::runtime_error("inconsistent interpolant in " + path.string());
  }
  return eim;
}

// --- coefficient datasets ----------------------------------------------------

void save_dataset(const fs::path& path, const CoefficientDataset& dataset) {
  json meta;
  meta["kind"] = "dataset";
  meta["q"] = vector_to_json(dataset.q);
  meta["mean"] = vector_to_json(dataset.mean);
  meta["std"] = vector_to_json(dataset.std);
  meta["stacking"] = "real_then_imag";
  save_container(path, ArrayContainer::real(dataset.a, meta));
}

CoefficientDataset load_dataset(const fs::path& path) {
  ArrayContainer c = load_kind(path, "dataset");
  CoefficientDataset ds;
  ds.q = vector_from_json(c.meta.at("q"));
  ds.mean = vector_from_json(c.meta.at("mean"));
  ds.std = vector_from_json(c.meta.at("std"));
  ds.a = std::move(c.f64);
  if (ds.q.size() != ds.a.rows() || ds.mean.size() != ds.a.cols() ||
      ds.std.size() != ds.a.cols()) {
    throw std::runtime_error("inconsistent dataset in " + path.string());
  }
  return ds;
}

// --- neural models -----------------------------------------------------------

void save_regressor(const fs::path& path, const RegressorModel& model) {
  json meta;
  meta["kind"] = "regressor";
  meta["spec"] = model.spec.to_string();
  meta["output_dim"] = model.spec.output_dim;
  meta["q_min"] = model.q_min;
  meta["q_max"] = model.q_max;
  meta["mean"] = vector_to_json(model.mean);
  meta["std"] = vector_to_json(model.std);
  meta["config"] = train_config_to_json(model.config);
  meta["history"] = history_to_json(model.history);
  meta["eim_sha256"] = model.eim_sha256;
  save_container(path, ArrayContainer::real_vector(model.net.params(), meta));
}

RegressorModel load_regressor(const fs::path& path) {
  ArrayContainer c = load_kind(path, "regressor");
  RegressorModel model;
  model.spec = NetworkSpec::parse(c.meta.at("spec").get<std::string>(), 1,
                                  c.meta.at("output_dim").get<int>());
  model.q_min = c.meta.at("q_min").get<double>();
  model.q_max = c.meta.at("q_max").get<double>();
  model.mean = vector_from_json(c.meta.at("mean"));
  model.std = vector_from_json(c.meta.at("std"));
  model.config = train_config_from_json(c.meta.at("config"));
  model.history = history_from_json(c.meta.at("history"));
  model.eim_sha256 = c.meta.value("eim_sha256", "");
  model.net = Network::build(model.spec, default_spiral_init(model.q_min, model.q_max));
  if (model.net.param_count() != c.f64.size()) {
    throw std::runtime_error("parameter count mismatch in " + path.string());
  }
  model.net.params() = Eigen::Map<const Eigen::VectorXd>(c.f64.data(), c.f64.size());
  return model;
}

void save_autoencoder(const fs::path& path, const AutoencoderModel& model) {
  json meta;
  meta["kind"] = "autoencoder";
  meta["input_dim"] = model.input_dim;
  meta["latent_dim"] = model.latent_dim;
  meta["hidden"] = model.hidden_widths;
  meta["mean"] = vector_to_json(model.mean);
  meta["std"] = vector_to_json(model.std);
  meta["config"] = train_config_to_json(model.config);
  meta["history"] = history_to_json(model.history);
  meta["final_mse"] = model.final_mse;
  save_container(path, ArrayContainer::real_vector(model.net.params(), meta));
}

AutoencoderModel load_autoencoder(const fs::path& path) {
  ArrayContainer c = load_kind(path, "autoencoder");
  AutoencoderModel model;
  model.input_dim = c.meta.at("input_dim").get<int>();
  model.latent_dim = c.meta.at("latent_dim").get<int>();
  model.hidden_widths = c.meta.at("hidden").get<std::vector<int>>();
  model.mean = vector_from_json(c.meta.at("mean"));
  model.std = vector_from_json(c.meta.at("std"));
  model.config = train_config_from_json(c.meta.at("config"));
  model.history = history_from_json(c.meta.at("history"));
  model.final_mse = c.meta.at("final_mse").get<double>();
  model.encoder_layer_count = 2 * (static_cast<int>(model.hidden_widths.size()) + 1);

  NetworkSpec spec;
  spec.input_dim = model.input_dim;
  spec.output_dim = model.input_dim;
  spec.layer_widths = model.hidden_widths;
  spec.layer_widths.push_back(model.latent_dim);
  for (auto it = model.hidden_widths.rbegin(); it != model.hidden_widths.rend(); ++it) {
    spec.layer_widths.push_back(*it);
  }
  model.net = Network::build(spec);
  if (model.net.param_count() != c.f64.size()) {
    throw std::runtime_error("parameter count mismatch in " + path.string());
  }
  model.net.params() = Eigen::Map<const Eigen::VectorXd>(c.f64.data(), c.f64.size());
  return model;
}

// --- spline baseline ----------------------------------------------------------

void save_spline(const fs::path& path, const SplineModel& model) {
  json meta;
  meta["kind"] = "spline";
  meta["q"] = vector_to_json(model.spline().knots());
  save_container(path, ArrayContainer::real(model.spline().values(), meta));
}

SplineModel load_spline(const fs::path& path) {
  ArrayContainer c = load_kind(path, "spline");
  const Eigen::VectorXd knots = vector_from_json(c.meta.at("q"));
  return SplineModel(NaturalCubicSpline(knots, std::move(c.f64)));
}

// --- pca ------------------------------------------------------------------------

void save_pca(const fs::path& path, const PcaModel& model) {
  json meta;
  meta["kind"] = "pca";
  meta["mean"] = vector_to_json(model.mean);
  meta["singular_values"] = vector_to_json(model.singular_values);
  meta["mse"] = model.mse;
  meta["rank_deficient"] = model.rank_deficient;
  save_container(path, ArrayContainer::real(model.components, meta));
}

PcaModel load_pca(const fs::path& path) {
  ArrayContainer c = load_kind(path, "pca");
  PcaModel model;
  model.mean = vector_from_json(c.meta.at("mean"));
  model.singular_values = vector_from_json(c.meta.at("singular_values"));
  model.mse = c.meta.at("mse").get<double>();
  model.rank_deficient = c.meta.at("rank_deficient").get<bool>();
  model.components = std::move(c.f64);
  return model;
}

}  // namespace gwsurr
