#pragma once

#include <filesystem>

#include "gwsurr/eim.hpp"
#include "gwsurr/latent.hpp"
#include "gwsurr/nnet.hpp"
#include "gwsurr/surrogate.hpp"

namespace gwsurr {

// Figure-data exporters. Plain CSV with a documented header row; floats are
// written with round-trip precision.

/// Columns: q, re_a1..re_am, im_a1..im_am (raw coefficients).
void export_coeffs_csv(const std::filesystem::path& path, const CoefficientDataset& dataset);

/// Columns: q, y1, y2, angle_unwrapped, radius.
void export_latent_csv(const std::filesystem::path& path, const Eigen::VectorXd& q,
                       const LatentDiagnostics& diag);

/// Columns: epoch, train_loss[, val_loss]; one row per training epoch.
void export_loss_csv(const std::filesystem::path& path, const TrainHistory& history);

/// Columns: q, mismatch.
void export_mismatch_csv(const std::filesystem::path& path, const Eigen::VectorXd& q,
                         const MismatchReport& report);

/// Columns: batch_size, median_seconds, vectors_per_second.
void export_throughput_csv(const std::filesystem::path& path, const BenchmarkReport& report);

}  // namespace gwsurr
