#include "eikmeans/datagen.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eikmeans/error.hpp"
#include "eikmeans/rng.hpp"

namespace eikmeans {

namespace {

Matrix identity(std::size_t d, double scale = 1.0) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) * scale;
}

Matrix cholesky_factor(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() < 1) {
    throw Error(Errc::invalid_argument, "covariance must be a non-empty square matrix");
  }
  if (!cov.allFinite()) {
    throw Error(Errc::invalid_argument, "covariance contains non-finite values");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(Errc::invalid_argument, "covariance is not symmetric");
  }
  const Eigen::MatrixXd dense = cov;
  Eigen::LLT<Eigen::MatrixXd> llt(dense);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::invalid_argument, "covariance is not positive definite");
  }
  return Matrix(llt.matrixL());
}

void draw_gaussian_rows(Rng& rng, const Vector& mean, const Matrix& chol, Matrix& out, std::size_t first,
                        std::size_t count) {
  const std::size_t d = mean.size();
  Vector z(d);
  for (std::size_t i = first; i < first + count; ++i) {
    for (std::size_t j = 0; j < d; ++j) z[j] = rng.normal();
    for (std::size_t r = 0; r < d; ++r) {
      double v = mean[r];
      for (std::size_t c = 0; c <= r; ++c) {
        v += chol(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * z[c];
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = v;
    }
  }
}

LabeledSample mixture_with(Rng& rng, const std::vector<GaussianComponent>& components, const Counts& counts) {
  if (components.empty() || components.size() != counts.size()) {
    throw Error(Errc::invalid_argument, "mixture needs one count per component");
  }
  const std::size_t d = components.front().mean.size();
  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (d == 0 || n == 0) {
    throw Error(Errc::invalid_argument, "mixture must produce at least one sample of dimension >= 1");
  }
  std::vector<Matrix> factors;
  for (const auto& comp : components) {
    if (comp.mean.size() != d || static_cast<std::size_t>(comp.cov.rows()) != d) {
      throw Error(Errc::dimension_mismatch, "mixture components differ in dimension");
    }
    factors.push_back(cholesky_factor(comp.cov));
  }

  Matrix rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  LabelVector tags(n);
  std::size_t at = 0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    draw_gaussian_rows(rng, components[k].mean, factors[k], rows, at, counts[k]);
    std::fill_n(tags.begin() + static_cast<std::ptrdiff_t>(at), counts[k], k);
    at += counts[k];
  }
  if (components.size() > 1) {
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i + 1));
      if (j != i) {
        rows.row(static_cast<Eigen::Index>(i)).swap(rows.row(static_cast<Eigen::Index>(j)));
        std::swap(tags[i], tags[j]);
      }
    }
  }
  return {SampleMatrix(std::move(rows)), std::move(tags)};
}

// Largest-remainder split of n by weights.
Counts split_by_weights(std::size_t n, const Vector& weights) {
  Counts counts(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double exact = weights[k] * static_cast<double>(n);
    counts[k] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[k];
    remainders.emplace_back(-(exact - std::floor(exact)), k);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second];
  return counts;
}

SampleMatrix append_noise(Rng& rng, const SampleMatrix& base, std::size_t extra) {
  if (extra == 0) return base;
  Matrix out(base.values().rows(), base.values().cols() + static_cast<Eigen::Index>(extra));
  out.leftCols(base.values().cols()) = base.values();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = base.values().cols(); j < out.cols(); ++j) out(i, j) = rng.normal();
  }
  return SampleMatrix(std::move(out));
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::UMean: return "2d-U-mean";
    case Family::G1Mean: return "2d-1G-mean";
    case Family::G1Var: return "2d-1G-var";
    case Family::G1Cov: return "2d-1G-cov";
    case Family::G2Mean: return "2d-2G-mean";
    case Family::G4Mean: return "2d-4G-mean";
    case Family::CustomMixture: return "custom-mixture";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string key(name);
  if (key.rfind("2d-", 0) == 0) key = key.substr(3);
  if (key == "U-mean") return Family::UMean;
  if (key == "1G-mean") return Family::G1Mean;
  if (key == "1G-var") return Family::G1Var;
  if (key == "1G-cov") return Family::G1Cov;
  if (key == "2G-mean") return Family::G2Mean;
  if (key == "4G-mean") return Family::G4Mean;
  if (key == "custom-mixture") return Family::CustomMixture;
  throw Error(Errc::invalid_argument, "unknown family '" + std::string(name) + "'");
}

double default_delta(Family family) {
  switch (family) {
    case Family::UMean: return 0.06;
    case Family::G1Mean: return 0.3;
    case Family::G1Var: return 0.2;
    case Family::G1Cov: return 0.2;
    case Family::G2Mean: return 0.4;
    case Family::G4Mean: return 0.8;
    case Family::CustomMixture: return 0.0;
  }
  return 0.0;
}

double GeneratorSpec::effective_delta() const {
  if (!drifted) return 0.0;
  return delta.value_or(default_delta(family));
}

SampleMatrix gen_gaussian(std::size_t n, const Vector& mean, const Matrix& cov, std::uint64_t seed) {
  if (n == 0) {
    throw Error(Errc::invalid_argument, "gen_gaussian: n must be >= 1");
  }
  if (mean.empty() || static_cast<std::size_t>(cov.rows()) != mean.size()) {
    throw Error(Errc::dimension_mismatch, "gen_gaussian: mean and covariance dimensions differ");
  }
  const Matrix chol = cholesky_factor(cov);
  Rng rng(seed);
  Matrix rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(mean.size()));
  draw_gaussian_rows(rng, mean, chol, rows, 0, n);
  return SampleMatrix(std::move(rows));
}

LabeledSample gen_mixture(const std::vector<GaussianComponent>& components, const Counts& counts,
                          std::uint64_t seed) {
  Rng rng(seed);
  return mixture_with(rng, components, counts);
}

LabeledSample gen_dataset_labeled(const GeneratorSpec& spec) {
  if (spec.n == 0) {
    throw Error(Errc::invalid_argument, "generator needs n >= 1");
  }
  if (spec.delta && (!(*spec.delta >= 0.0) || !std::isfinite(*spec.delta))) {
    throw Error(Errc::invalid_argument, "drift margin must be finite and >= 0");
  }
  const double delta = spec.effective_delta();
  const double mean_shift = spec.shift_mean ? delta : 0.0;
  Rng rng(spec.seed);

  LabeledSample base = [&]() -> LabeledSample {
    switch (spec.family) {
      case Family::UMean: {
        Matrix rows(static_cast<Eigen::Index>(spec.n), 2);
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
          rows(i, 0) = rng.uniform(0.0, 1.0 + delta);
          rows(i, 1) = rng.uniform();
        }
        return {SampleMatrix(std::move(rows)), LabelVector(spec.n, 0)};
      }
      case Family::G1Mean:
        return mixture_with(rng, {{{delta, 0.0}, identity(2)}}, {spec.n});
      case Family::G1Var:
        return mixture_with(rng, {{{mean_shift, 0.0}, identity(2, 1.0 + delta)}}, {spec.n});
      case Family::G1Cov: {
        Matrix cov{{1.0, delta}, {delta, 1.0}};
        return mixture_with(rng, {{{mean_shift, 0.0}, cov}}, {spec.n});
      }
      case Family::G2Mean:
        return mixture_with(rng, {{{0.0, 0.0}, identity(2)}, {{delta, 0.0}, identity(2)}},
                            {spec.n - spec.n / 2, spec.n / 2});
      case Family::G4Mean: {
        std::vector<GaussianComponent> comps{{{0.0, 0.0}, identity(2)},
                                             {{5.0, 0.0}, identity(2)},
                                             {{0.0, 5.0}, identity(2)},
                                             {{5.0 - delta, 5.0}, identity(2)}};
        Counts counts(4, spec.n / 4);
        for (std::size_t k = 0; k < spec.n % 4; ++k) ++counts[k];
        return mixture_with(rng, comps, counts);
      }
      case Family::CustomMixture: {
        if (spec.components.empty() || spec.weights.size() != spec.components.size()) {
          throw Error(Errc::invalid_argument, "custom mixture needs one weight per component");
        }
        double total = 0.0;
        for (const double w : spec.weights) {
          if (!(w > 0.0)) throw Error(Errc::invalid_argument, "mixture weights must be positive");
          total += w;
        }
        if (std::fabs(total - 1.0) > 1e-9) {
          throw Error(Errc::invalid_argument, "mixture weights must sum to 1");
        }
        std::vector<GaussianComponent> comps = spec.components;
        for (auto& c : comps) {
          if (!c.mean.empty()) c.mean[0] += delta;
        }
        return mixture_with(rng, comps, split_by_weights(spec.n, spec.weights));
      }
    }
    throw Error(Errc::invalid_argument, "unknown family");
  }();

  return {append_noise(rng, base.data, spec.extra_dims), std::move(base.component)};
}

SampleMatrix gen_dataset(const GeneratorSpec& spec) { return gen_dataset_labeled(spec).data; }

std::string variant_name(Experiment1Variant variant) {
  switch (variant) {
    case Experiment1Variant::G1: return "1G";
    case Experiment1Variant::G3Equal: return "3G-111";
    case Experiment1Variant::G3Skewed: return "3G-135";
  }
  return "unknown";
}

Experiment1Variant parse_variant(std::string_view name) {
  if (name == "1G") return Experiment1Variant::G1;
  if (name == "3G-111" || name == "3G[1:1:1]") return Experiment1Variant::G3Equal;
  if (name == "3G-135" || name == "3G[1:3:5]") return Experiment1Variant::G3Skewed;
  throw Error(Errc::invalid_argument, "unknown variant '" + std::string(name) + "' (expected 1G, 3G-111 or 3G-135)");
}

LabeledSample gen_experiment1_sets(Experiment1Variant variant, std::uint64_t seed) {
  const std::vector<GaussianComponent> three{
      {{-5.0, 0.0}, identity(2)}, {{0.0, 0.0}, identity(2)}, {{5.0, 0.0}, identity(2)}};
  switch (variant) {
    case Experiment1Variant::G1:
      return gen_mixture({{{0.0, 0.0}, identity(2)}}, {1350}, seed);
    case Experiment1Variant::G3Equal:
      return gen_mixture(three, {450, 450, 450}, seed);
    case Experiment1Variant::G3Skewed:
      return gen_mixture(three, {150, 450, 750}, seed);
  }
  throw Error(Errc::invalid_argument, "unknown variant");
}

double highdim_delta(Family base) {
  switch (base) {
    case Family::G1Mean: return 0.5;
    case Family::G4Mean: return 1.0;
    default: break;
  }
  throw Error(Errc::invalid_argument, "high-dimensional padding supports 1G-mean and 4G-mean only");
}

SampleMatrix gen_highdim(Family base, std::size_t total_dims, bool drifted, std::size_t n, std::uint64_t seed) {
  if (total_dims < 2) {
    throw Error(Errc::invalid_argument, "total_dims must be >= 2");
  }
  GeneratorSpec spec;
  spec.family = base;
  spec.delta = highdim_delta(base);
  spec.drifted = drifted;
  spec.n = n;
  spec.extra_dims = total_dims - 2;
  spec.seed = seed;
  return gen_dataset(spec);
}

}  // namespace eikmeans
