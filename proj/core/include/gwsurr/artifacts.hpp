#pragma once

#include <filesystem>

#include "gwsurr/container.hpp"
#include "gwsurr/eim.hpp"
#include "gwsurr/latent.hpp"
#include "gwsurr/rom.hpp"
#include "gwsurr/surrogate.hpp"
#include "gwsurr/waveform.hpp"

namespace gwsurr {

// ArrayContainer (de)serializers for every pipeline artifact. Loaders verify
// the artifact kind tag and shape before rebuilding the in-memory object.

void save_waveform_set(const std::filesystem::path& path, const WaveformSet& set);
WaveformSet load_waveform_set(const std::filesystem::path& path);

void save_reduced_basis(const std::filesystem::path& path, const ReducedBasis& basis);
ReducedBasis load_reduced_basis(const std::filesystem::path& path);

void save_eim(const std::filesystem::path& path, const EimModel& eim);
EimModel load_eim(const std::filesystem::path& path);

void save_dataset(const std::filesystem::path& path, const CoefficientDataset& dataset);
CoefficientDataset load_dataset(const std::filesystem::path& path);

void save_regressor(const std::filesystem::path& path, const RegressorModel& model);
RegressorModel load_regressor(const std::filesystem::path& path);

void save_autoencoder(const std::filesystem::path& path, const AutoencoderModel& model);
AutoencoderModel load_autoencoder(const std::filesystem::path& path);

void save_spline(const std::filesystem::path& path, const SplineModel& model);
SplineModel load_spline(const std::filesystem::path& path);

void save_pca(const std::filesystem::path& path, const PcaModel& model);
PcaModel load_pca(const std::filesystem::path& path);

/// Reads only the kind tag ("regressor", "spline", ...) of a container.
std::string artifact_kind(const std::filesystem::path& path);

}  // namespace gwsurr
