#include "commands.hpp"

#include <filesystem>
#include <iostream>

#include "gwsurr/artifacts.hpp"
#include "gwsurr/config.hpp"
#include "gwsurr/container.hpp"
#include "gwsurr/export_csv.hpp"
#include "gwsurr/latent.hpp"
#include "gwsurr/provenance.hpp"
#include "gwsurr/surrogate.hpp"

namespace gwsurr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kConfigFile = "config.json";
constexpr const char* kWavesTrain = "waves_train.gwsurr";
constexpr const char* kWavesVal = "waves_val.gwsurr";
constexpr const char* kWavesTest = "waves_test.gwsurr";
constexpr const char* kBasis = "basis.gwsurr";
constexpr const char* kEim = "eim.gwsurr";
constexpr const char* kDatasetTrain = "dataset_train.gwsurr";
constexpr const char* kDatasetVal = "dataset_val.gwsurr";
constexpr const char* kDatasetTest = "dataset_test.gwsurr";
constexpr const char* kAutoencoder = "ae.gwsurr";
constexpr const char* kPca = "pca.gwsurr";
constexpr const char* kSpline = "spline.gwsurr";

fs::path require_artifact(const fs::path& out, const std::string& name,
                          const std::string& producer) {
  const fs::path path = out / name;
  if (!fs::exists(path)) {
    throw std::runtime_error("missing artifact " + path.string() + " (run `gwsurr " + producer +
                             "` first)");
  }
  return path;
}

// Resolution order: --config file, else the config.json written into the
// output directory by gen-data, else built-in defaults. CLI flags override.
RunConfig resolve_config(const Options& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = load_run_config(opt.config_path);
  } else if (fs::exists(fs::path(opt.out_dir) / kConfigFile)) {
    cfg = load_run_config(fs::path(opt.out_dir) / kConfigFile);
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.tol) cfg.tol = *opt.tol;
  if (opt.epochs) {
    cfg.ae.epochs = *opt.epochs;
    cfg.regressor.epochs = *opt.epochs;
  }
  if (opt.batch_size) {
    cfg.ae.batch_size = *opt.batch_size;
    cfg.regressor.batch_size = *opt.batch_size;
  }
  cfg.validate();
  return cfg;
}

std::string model_stem(const std::string& model_file) {
  return fs::path(model_file).stem().string();
}

}  // namespace

int cmd_gen_data(const Options& opt) {
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const NewtonianChirpModel model(cfg.t_c);

  save_run_config(out / kConfigFile, cfg);

  const auto train_q = equispaced_q(cfg.q_min, cfg.q_max, cfg.n_train);
  save_waveform_set(out / kWavesTrain, build_training_set(model, train_q, cfg.grid));
  const auto val_q = uniform_q(cfg.q_min, cfg.q_max, cfg.n_val, cfg.val_q_seed());
  save_waveform_set(out / kWavesVal, build_training_set(model, val_q, cfg.grid));
  const auto test_q = uniform_q(cfg.q_min, cfg.q_max, cfg.n_test, cfg.test_q_seed());
  save_waveform_set(out / kWavesTest, build_training_set(model, test_q, cfg.grid));

  for (const char* name : {kWavesTrain, kWavesVal, kWavesTest}) {
    write_provenance(out / name, "gen-data", to_json(cfg), {out / kConfigFile});
  }
  std::cout << "gen-data: wrote " << cfg.n_train << "/" << cfg.n_val << "/" << cfg.n_test
            << " waveforms (q in [" << cfg.q_min << ", " << cfg.q_max << "]) to " << out
            << "\n";
  return 0;
}

int cmd_build_basis(const Options& opt) {
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const auto train_path = require_artifact(out, kWavesTrain, "gen-data");

  const auto train = load_waveform_set(train_path);
  const auto basis = greedy_build(train, cfg.tol);
  save_reduced_basis(out / kBasis, basis);
  write_provenance(out / kBasis, "build-basis", to_json(cfg), {train_path});

  std::cout << "build-basis: size " << basis.size() << ", final greedy error "
            << basis.greedy_errors.back() << " (tol " << cfg.tol << ")\n";
  return 0;
}

int cmd_build_eim(const Options& opt) {
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const auto basis_path = require_artifact(out, kBasis, "build-basis");
  const auto train_path = require_artifact(out, kWavesTrain, "gen-data");

  const auto basis = load_reduced_basis(basis_path);
  const auto eim = build_eim(basis);
  save_eim(out / kEim, eim);
  write_provenance(out / kEim, "build-eim", to_json(cfg), {basis_path});

  const auto train_ds = build_dataset(load_waveform_set(train_path), eim);
  save_dataset(out / kDatasetTrain, train_ds);
  write_provenance(out / kDatasetTrain, "build-eim", to_json(cfg), {out / kEim, train_path});

  // validation/test coefficients carry the training statistics
  const struct {
    const char* waves;
    const char* dataset;
  } splits[] = {{kWavesVal, kDatasetVal}, {kWavesTest, kDatasetTest}};
  for (const auto& split : splits) {
    if (!fs::exists(out / split.waves)) continue;
    const auto ds =
        build_dataset(load_waveform_set(out / split.waves), eim, train_ds.mean, train_ds.std);
    save_dataset(out / split.dataset, ds);
    write_provenance(out / split.dataset, "build-eim", to_json(cfg),
                     {out / kEim, out / split.waves, out / kDatasetTrain});
  }

  std::cout << "build-eim: " << eim.size() << " nodes, cond(V) = " << eim.v_condition << "\n";
  return 0;
}

int cmd_train_ae(const Options& opt) {
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const auto ds_path = require_artifact(out, kDatasetTrain, "build-eim");

  const auto ds = load_dataset(ds_path);
  const auto model = train_autoencoder(ds, cfg.ae_latent_dim, cfg.ae_config(), cfg.ae_hidden);
  save_autoencoder(out / kAutoencoder, model);
  write_provenance(out / kAutoencoder, "train-ae", to_json(cfg), {ds_path});

  json report;
  report["final_mse"] = model.final_mse;
  report["epochs"] = cfg.ae.epochs;
  report["first_epoch_loss"] = model.history.train_loss.front();
  report["last_epoch_loss"] = model.history.train_loss.back();
  atomic_write_bytes(out / "ae_report.json", report.dump(2) + "\n");

  std::cout << "train-ae: final reconstruction MSE " << model.final_mse << " after "
            << cfg.ae.epochs << " epochs\n";
  return 0;
}

int cmd_pca(const Options& opt) {
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const auto ds_path = require_artifact(out, kDatasetTrain, "build-eim");

  const auto model = pca_fit(load_dataset(ds_path), cfg.ae_latent_dim);
  save_pca(out / kPca, model);
  write_provenance(out / kPca, "pca", to_json(cfg), {ds_path});

  json report;
  report["mse"] = model.mse;
  report["components"] = cfg.ae_latent_dim;
  report["rank_deficient"] = model.rank_deficient;
  atomic_write_bytes(out / "pca_report.json", report.dump(2) + "\n");

  std::cout << "pca: reconstruction MSE " << model.mse << " with " << cfg.ae_latent_dim
            << " components\n";
  return 0;
}

int cmd_train_reg(const Options& opt) {
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const auto train_path = require_artifact(out, kDatasetTrain, "build-eim");
  const auto eim_path = require_artifact(out, kEim, "build-eim");

  const auto train_ds = load_dataset(train_path);
  CoefficientDataset val_ds;
  std::vector<fs::path> inputs = {train_path, eim_path};
  if (fs::exists(out / kDatasetVal)) {
    val_ds = load_dataset(out / kDatasetVal);
    inputs.push_back(out / kDatasetVal);
  }

  const auto spec = NetworkSpec::parse(opt.spec, 1, train_ds.stacked_dim());
  auto model =
      train_regressor(train_ds, val_ds, spec, cfg.regressor_config(), cfg.q_min, cfg.q_max);
  model.eim_sha256 = sha256_file(eim_path);

  const fs::path model_path = out / ("reg_" + spec.to_string() + ".gwsurr");
  save_regressor(model_path, model);
  write_provenance(model_path, "train-reg", to_json(cfg), inputs);

  std::cout << "train-reg: " << spec.to_string() << " final train loss "
            << model.history.train_loss.back();
  if (!model.history.val_loss.empty()) {
    std::cout << ", val loss " << model.history.val_loss.back();
  }
  std::cout << " -> " << model_path.string() << "\n";
  if (spec.use_spiral) {
    const auto* spiral = dynamic_cast<const SpiralLayer*>(&model.net.layer(0));
    if (spiral != nullptr) {
      const SpiralParams p = spiral->params();
      std::cout << "  trained spiral: w=" << p.w << " b=" << p.b << " alpha=" << p.alpha
                << " beta=" << p.beta << "\n";
    }
  }
  return 0;
}

int cmd_spline(const Options& opt) {
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const auto ds_path = require_artifact(out, kDatasetTrain, "build-eim");

  const auto model = fit_spline_baseline(load_dataset(ds_path));
  save_spline(out / kSpline, model);
  write_provenance(out / kSpline, "spline", to_json(cfg), {ds_path});

  std::cout << "spline: fitted " << 2 * model.coeff_count() << " natural cubic splines over "
            << model.spline().knots().size() << " knots\n";
  return 0;
}

int cmd_eval(const Options& opt) {
  if (opt.model.empty()) throw std::runtime_error("eval: --model is required");
  const fs::path out(opt.out_dir);
  const RunConfig cfg = resolve_config(opt);
  DirLock lock(out);
  const auto model_path = require_artifact(out, opt.model, "train-reg (or spline)");
  const auto eim_path = require_artifact(out, kEim, "build-eim");
  const auto test_path = require_artifact(out, kDatasetTest, "build-eim");

  const auto eim = load_eim(eim_path);
  const auto test_ds = load_dataset(test_path);
  const NewtonianChirpModel fiducial(cfg.t_c);

  const std::string kind = artifact_kind(model_path);
  RegressorModel reg;
  SplineModel spl;
  const CoefficientPredictor* predictor = nullptr;
  json model_info = json::object();
  if (kind == "regressor") {
    reg = load_regressor(model_path);
    if (!reg.eim_sha256.empty() && reg.eim_sha256 != sha256_file(eim_path)) {
      std::cerr << "eval: warning: model was trained against a different interpolant\n";
    }
    predictor = &reg;
    model_info["spec"] = reg.spec.to_string();
  } else if (kind == "spline") {
    spl = load_spline(model_path);
    predictor = &spl;
  } else {
    throw std::runtime_error("eval: " + model_path.string() + " holds '" + kind +
                             "', expected a regressor or spline model");
  }

  const auto report = evaluate(*predictor, test_ds.q, fiducial, eim);

  const std::string stem = model_stem(opt.model);
  const fs::path persample_path = out / ("eval_" + stem + "_persample.csv");
  export_mismatch_csv(persample_path, test_ds.q, report);

  json result;
  result["model"] = {{"file", opt.model}, {"sha256", sha256_file(model_path)}, {"kind", kind}};
  result["model"].update(model_info);
  result["eim"] = {{"file", kEim}, {"sha256", sha256_file(eim_path)}};
  result["n_test"] = test_ds.size();
  result["extrapolated_count"] = report.extrapolated_count;
  result["mismatch"] = {{"min", report.min},
                        {"median", report.median},
                        {"p95", report.p95},
                        {"max", report.max}};
  result["per_sample_csv"] = persample_path.filename().string();
  const fs::path report_path = out / ("eval_" + stem + ".json");
  atomic_write_bytes(report_path, result.dump(2) + "\n");
  write_provenance(report_path, "eval", to_json(cfg), {model_path, eim_path, test_path});

  // timing lives outside the eval report so the report stays bit-reproducible
  json timing;
  timing["wall_time_per_batch_seconds"] = report.wall_time_per_batch;
  atomic_write_bytes(out / ("eval_" + stem + "_timing.json"), timing.dump(2) + "\n");

  std::cout << "eval " << opt.model << ": median " << report.median << ", p95 " << report.p95
            << ", max " << report.max << " over " << test_ds.size() << " samples ("
            << report.wall_time_per_batch << " s per batch)\n";
  return 0;
}

int cmd_bench(const Options& opt) {
  if (opt.model.empty()) throw std::runtime_error("bench: --model is required");
  const fs::path out(opt.out_dir);
  DirLock lock(out);
  const auto model_path = require_artifact(out, opt.model, "train-reg (or spline)");

  const std::string kind = artifact_kind(model_path);
  RegressorModel reg;
  SplineModel spl;
  const CoefficientPredictor* predictor = nullptr;
  if (kind == "regressor") {
    reg = load_regressor(model_path);
    predictor = &reg;
  } else if (kind == "spline") {
    spl = load_spline(model_path);
    predictor = &spl;
  } else {
    throw std::runtime_error("bench: unsupported artifact kind '" + kind + "'");
  }

  const auto report = benchmark_predictor(*predictor, opt.batch_sizes);

  const std::string stem = model_stem(opt.model);
  export_throughput_csv(out / ("bench_" + stem + ".csv"), report);
  json j;
  j["model"] = opt.model;
  j["repetitions"] = report.repetitions;
  j["parameter_count"] = report.parameter_count;
  j["bytes_per_sample"] = report.bytes_per_sample;
  j["est_max_batch_4gib"] = report.est_max_batch_4gib;
  j["rows"] = json::array();
  for (const auto& row : report.rows) {
    j["rows"].push_back({{"batch_size", row.batch_size},
                         {"median_seconds", row.median_seconds},
                         {"vectors_per_second", row.vectors_per_second}});
  }
  atomic_write_bytes(out / ("bench_" + stem + ".json"), j.dump(2) + "\n");

  std::cout << "bench " << opt.model << ":\n";
  for (const auto& row : report.rows) {
    std::cout << "  batch " << row.batch_size << ": " << row.median_seconds << " s, "
              << row.vectors_per_second << " vectors/s\n";
  }
  std::cout << "  est. max batch at 4 GiB: " << report.est_max_batch_4gib << "\n";
  return 0;
}

int cmd_export_fig(const Options& opt) {
  const fs::path out(opt.out_dir);
  DirLock lock(out);

  if (opt.kind == "coeffs") {
    const auto ds_path = require_artifact(out, kDatasetTrain, "build-eim");
    export_coeffs_csv(out / "fig_coeffs.csv", load_dataset(ds_path));
    std::cout << "export-fig: wrote fig_coeffs.csv\n";
  } else if (opt.kind == "latent") {
    const auto ae_path = require_artifact(out, kAutoencoder, "train-ae");
    const auto ds_path = require_artifact(out, kDatasetTrain, "build-eim");
    const auto ds = load_dataset(ds_path);
    const auto ae = load_autoencoder(ae_path);
    const auto diag = latent_spiral_diagnostics(encode(ae, ds), ds.q);
    export_latent_csv(out / "fig_latent.csv", ds.q, diag);
    std::cout << "export-fig: wrote fig_latent.csv (spearman " << diag.angle_q_spearman
              << ", r2 " << diag.linear_fit_r2 << ")\n";
  } else if (opt.kind == "loss") {
    if (opt.model.empty()) {
      throw std::runtime_error("export-fig loss: --model is required");
    }
    const auto model_path = require_artifact(out, opt.model, "train-reg or train-ae");
    const std::string kind = artifact_kind(model_path);
    TrainHistory history;
    if (kind == "regressor") {
      history = load_regressor(model_path).history;
    } else if (kind == "autoencoder") {
      history = load_autoencoder(model_path).history;
    } else {
      throw std::runtime_error("export-fig loss: no training history in kind '" + kind + "'");
    }
    const fs::path csv = out / ("fig_loss_" + model_stem(opt.model) + ".csv");
    export_loss_csv(csv, history);
    std::cout << "export-fig: wrote " << csv.filename().string() << "\n";
  } else {
    throw std::runtime_error("export-fig: unknown kind '" + opt.kind +
                             "' (expected coeffs, latent or loss)");
  }
  return 0;
}

}  // namespace gwsurr::cli
