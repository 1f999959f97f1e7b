#include "gwsurr/export_csv.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "gwsurr/container.hpp"

namespace gwsurr {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip
  return std::string(buf, res.ptr);
}

}  // namespace

void export_coeffs_csv(const std::filesystem::path& path, const CoefficientDataset& dataset) {
  const int m = dataset.coeff_count();
  std::ostringstream out;
  out << "q";
  for (int j = 1; j <= m; ++j) out << ",re_a" << j;
  for (int j = 1; j <= m; ++j) out << ",im_a" << j;
  out << "\n";
  for (int i = 0; i < dataset.size(); ++i) {
    out << fmt(dataset.q[i]);
    for (int c = 0; c < dataset.stacked_dim(); ++c) out << "," << fmt(dataset.a(i, c));
    out << "\n";
  }
  atomic_write_bytes(path, out.str());
}

void export_latent_csv(const std::filesystem::path& path, const Eigen::VectorXd& q,
                       const LatentDiagnostics& diag) {
  if (q.size() != diag.points.rows()) {
    throw std::invalid_argument("export_latent_csv: q size does not match points");
  }
  std::ostringstream out;
  out << "q,y1,y2,angle_unwrapped,radius\n";
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    out << fmt(q[i]) << "," << fmt(diag.points(i, 0)) << "," << fmt(diag.points(i, 1)) << ","
        << fmt(diag.unwrapped_angle[i]) << "," << fmt(diag.radius[i]) << "\n";
  }
  atomic_write_bytes(path, out.str());
}

void export_loss_csv(const std::filesystem::path& path, const TrainHistory& history) {
  const bool has_val = !history.val_loss.empty();
  if (has_val && history.val_loss.size() != history.train_loss.size()) {
    throw std::invalid_argument("export_loss_csv: inconsistent history lengths");
  }
  std::ostringstream out;
  out << (has_val ? "epoch,train_loss,val_loss\n" : "epoch,train_loss\n");
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    out << e << "," << fmt(history.train_loss[e]);
    if (has_val) out << "," << fmt(history.val_loss[e]);
    out << "\n";
  }
  atomic_write_bytes(path, out.str());
}

void export_mismatch_csv(const std::filesystem::path& path, const Eigen::VectorXd& q,
                         const MismatchReport& report) {
  if (q.size() != report.per_sample.size()) {
    throw std::invalid_argument("export_mismatch_csv: q size does not match report");
  }
  std::ostringstream out;
  out << "q,mismatch\n";
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    out << fmt(q[i]) << "," << fmt(report.per_sample[i]) << "\n";
  }
  atomic_write_bytes(path, out.str());
}

void export_throughput_csv(const std::filesystem::path& path, const BenchmarkReport& report) {
  std::ostringstream out;
  out << "batch_size,median_seconds,vectors_per_second\n";
  for (const auto& row : report.rows) {
    out << row.batch_size << "," << fmt(row.median_seconds) << ","
        << fmt(row.vectors_per_second) << "\n";
  }
  atomic_write_bytes(path, out.str());
}

}  // namespace gwsurr
