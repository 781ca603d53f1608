#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eikmeans/core.hpp"

namespace eikmeans {

/// The synthetic two-dimensional drift families, plus user-defined mixtures.
enum class Family { UMean, G1Mean, G1Var, G1Cov, G2Mean, G4Mean, CustomMixture };

/// Canonical name, e.g. "2d-1G-mean".
std::string family_name(Family family);

/// Accepts the canonical name with or without the "2d-" prefix.
Family parse_family(std::string_view name);

/// Drift margin used when none is given: 0.06, 0.3, 0.2, 0.2, 0.4, 0.8.
double default_delta(Family family);

struct GaussianComponent {
  Vector mean;
  Matrix cov;
};

struct GeneratorSpec {
  Family family = Family::G1Mean;
  /// Drift margin; std::nullopt selects default_delta(family).
  std::optional<double> delta;
  bool drifted = false;
  std::size_t n = 1000;
  std::size_t extra_dims = 0;
  /// The variance and covariance families also shift the mean by delta
  /// unless this is cleared.
  bool shift_mean = true;
  /// CustomMixture only. Weights must be positive and sum to 1.
  std::vector<GaussianComponent> components;
  Vector weights;
  std::uint64_t seed = 0;

  double effective_delta() const;
};

/// n draws from N(mean, cov). cov must be symmetric positive definite.
SampleMatrix gen_gaussian(std::size_t n, const Vector& mean, const Matrix& cov, std::uint64_t seed);

/// Samples together with the mixture component each row was drawn from.
struct LabeledSample {
  SampleMatrix data;
  LabelVector component;
};

/// Draws an exact-count mixture (component k contributes counts[k] rows,
/// generated in component order) and shuffles the rows.
LabeledSample gen_mixture(const std::vector<GaussianComponent>& components, const Counts& counts,
                          std::uint64_t seed);

LabeledSample gen_dataset_labeled(const GeneratorSpec& spec);
SampleMatrix gen_dataset(const GeneratorSpec& spec);

enum class Experiment1Variant { G1, G3Equal, G3Skewed };

std::string variant_name(Experiment1Variant variant);
/// "1G", "3G-111" or "3G-135" (also "3G[1:1:1]" / "3G[1:3:5]").
Experiment1Variant parse_variant(std::string_view name);

/// 1350 samples: one unit Gaussian at the origin, or three at x = -5, 0, 5
/// with 450/450/450 or 150/450/750 samples.
LabeledSample gen_experiment1_sets(Experiment1Variant variant, std::uint64_t seed);

/// Base 2-D family (1G-mean or 4G-mean) padded with independent N(0,1)
/// columns up to total_dims. Drift margins are 0.5 and 1.0 respectively.
SampleMatrix gen_highdim(Family base, std::size_t total_dims, bool drifted, std::size_t n, std::uint64_t seed);

double highdim_delta(Family base);

}  // namespace eikmeans
