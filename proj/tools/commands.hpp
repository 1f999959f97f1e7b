#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gwsurr::cli {

/// Parsed command-line state shared by every subcommand.
struct Options {
  std::string config_path;  // --config; optional
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::string spec = "S-32-64";          // train-reg
  std::string model;                     // eval / bench / export-fig loss
  std::string kind;                      // export-fig
  std::vector<int> batch_sizes = {1, 4, 16, 64, 256, 1024};  // bench
};

int cmd_gen_data(const Options& opt);
int cmd_build_basis(const Options& opt);
int cmd_build_eim(const Options& opt);
int cmd_train_ae(const Options& opt);
int cmd_pca(const Options& opt);
int cmd_train_reg(const Options& opt);
int cmd_eval(const Options& opt);
int cmd_spline(const Options& opt);
int cmd_bench(const Options& opt);
int cmd_export_fig(const Options& opt);

}  // namespace gwsurr::cli
