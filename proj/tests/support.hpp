#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "honeytrap/arff.hpp"
#include "honeytrap/eval.hpp"
#include "honeytrap/simnet.hpp"

namespace honeytrap::fixtures {

std::filesystem::path data_path(const std::string& name);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

/// Dataset with numeric attributes x0..x{n-1} and a nominal class over `labels`.
arff::Dataset numeric_dataset(std::size_t n_features, std::vector<std::string> labels = {"mal", "leg"});

/// Default simulation, harvest and feature extraction; full export schema.
arff::Dataset pipeline_dataset(std::uint64_t seed = 42);

/// Two Gaussian blobs in `dims` dimensions, balanced, seeded.
arff::Dataset blobs(std::size_t n, std::size_t dims, double separation, std::uint64_t seed);

/// Mixed numeric/nominal dataset with awkward names and ~10% missing cells.
arff::Dataset random_arff_dataset(std::uint64_t seed);

/// Brute-force Cohen's kappa straight from the cell counts.
double kappa_oracle(const std::vector<std::vector<std::uint64_t>>& counts);

}  // namespace honeytrap::fixtures
