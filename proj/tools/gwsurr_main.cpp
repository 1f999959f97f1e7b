#include <exception>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gwsurr: reduced-basis / empirical-interpolation surrogate toolkit for "
               "one-parameter chirp waveform families"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  gwsurr::cli::Options opt;
  app.add_option("--config", opt.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "output directory (default: out)");
  app.add_option("--seed", opt.seed, "override the run seed");

  using Handler = std::function<int(const gwsurr::cli::Options&)>;
  std::pair<CLI::App*, Handler> dispatch[] = {
      {app.add_subcommand("gen-data",
                          "generate train/val/test waveform sets and write config.json"),
       gwsurr::cli::cmd_gen_data},
      {app.add_subcommand("build-basis", "greedy reduced basis from the training set"),
       gwsurr::cli::cmd_build_basis},
      {app.add_subcommand("build-eim",
                          "empirical interpolant and coefficient datasets from the basis"),
       gwsurr::cli::cmd_build_eim},
      {app.add_subcommand("train-ae", "train the 2-D bottleneck autoencoder"),
       gwsurr::cli::cmd_train_ae},
      {app.add_subcommand("pca", "principal-component baseline on the coefficients"),
       gwsurr::cli::cmd_pca},
      {app.add_subcommand("train-reg", "train a coefficient regressor"),
       gwsurr::cli::cmd_train_reg},
      {app.add_subcommand("eval", "mismatch statistics of a model on the test set"),
       gwsurr::cli::cmd_eval},
      {app.add_subcommand("spline", "fit the cubic-spline baseline"),
       gwsurr::cli::cmd_spline},
      {app.add_subcommand("bench", "CPU inference throughput of a model"),
       gwsurr::cli::cmd_bench},
      {app.add_subcommand("export-fig", "export figure data as CSV"),
       gwsurr::cli::cmd_export_fig},
  };

  auto* build_basis = dispatch[1].first;
  build_basis->add_option("--tol", opt.tol, "greedy tolerance override");

  for (auto* cmd : {dispatch[3].first, dispatch[5].first}) {
    cmd->add_option("--epochs", opt.epochs, "training epochs override");
    cmd->add_option("--batch-size", opt.batch_size, "mini-batch size override");
  }
  dispatch[5].first->add_option("--spec", opt.spec,
                                "architecture, e.g. S-32-64 (S = spiral module)");
  for (int i : {6, 8}) {
    dispatch[i].first->add_option("--model", opt.model, "model artifact file name")
        ->required();
  }
  dispatch[8].first->add_option("--batch-sizes", opt.batch_sizes,
                                "batch sizes to time (comma separated)")
      ->delimiter(',');
  dispatch[9].first
      ->add_option("--kind", opt.kind, "figure kind: coeffs, latent or loss")
      ->required();
  dispatch[9].first->add_option("--model", opt.model, "model file for kind=loss");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, handler] : dispatch) {
      if (cmd->parsed()) return handler(opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
