#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "stackkit/stability.hpp"

namespace stackkit {

// Returns the predicted probability that the stack is stable, in [0, 1].
class StabilityPredictor {
  public:
    virtual ~StabilityPredictor() = default;
    virtual double predict(const Stack& stack) const = 0;
};

// Exact analytic check at margin 0: 1.0 stable, 0.0 unstable.
class OraclePredictor final : public StabilityPredictor {
  public:
    double predict(const Stack& stack) const override;
};

// Oracle plus zero-mean Gaussian score noise, clamped to [0, 1]. The noise
// stream is deterministic in (seed, call order).
class NoisyOraclePredictor final : public StabilityPredictor {
  public:
    NoisyOraclePredictor(double sigma, std::uint64_t seed);
    double predict(const Stack& stack) const override;

  private:
    double sigma_;
    mutable std::uint64_t counter_;
    std::uint64_t seed_;
};

double oracle_predict(const Stack& stack);
double noisy_predict(const Stack& stack, double sigma_score, std::uint64_t seed);

struct FeatureConfig {
    double sigma_obs = 0.0;  // Gaussian observation noise on offsets
    std::vector<std::string> features = {"margin", "norm_margin", "area", "degenerate"};
    int max_interfaces = 5;

    int dimension() const { return max_interfaces * static_cast<int>(features.size()); }
};

// Fixed-length geometric featurization: per interface (bottom-up, padded with
// zeros to max_interfaces) the cumulative-CoM signed margin, the margin
// normalized by the mean face inradius, the contact area and a degeneracy
// flag. Offsets are perturbed by sigma_obs before measuring, standing in for
// imperfect visual observation.
std::vector<double> extract_features(const Stack& stack, const FeatureConfig& config,
                                     std::uint64_t seed);

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    FeatureConfig feature_config;

    double logit(const std::vector<double>& phi) const;
    // P(stable) = 1 - sigmoid(logit): internally the positive class is
    // "unstable", the public convention is P(stable).
    double predict_stable(const std::vector<double>& phi) const;
};

struct TrainHyper {
    double lr = 0.1;
    int epochs = 200;
    int batch = 64;
    double l2 = 0.0;
    std::uint64_t seed = 0;
};

struct TrainResult {
    LogisticModel model;
    std::vector<double> loss_trace;  // full-set loss after each epoch
};

// Sum over samples of the binary cross-entropy of sigmoid(w phi + b) against
// y = 1 for unstable, plus l2/2 ||w||^2.
double logistic_loss(const std::vector<double>& weights, double bias,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& unstable_labels, double l2);

// Analytic gradient of logistic_loss; returns d/dw in grad_w and d/db.
double logistic_loss_gradient(const std::vector<double>& weights, double bias,
                              const std::vector<std::vector<double>>& xs,
                              const std::vector<int>& unstable_labels, double l2,
                              std::vector<double>& grad_w);

// Mini-batch gradient descent on the mean batch gradient, deterministic in
// hyper.seed. stable_labels holds 1 for stable samples. Throws
// DegenerateDatasetError when only one class is present.
TrainResult train_logistic(const std::vector<std::vector<double>>& xs,
                           const std::vector<int>& stable_labels, const FeatureConfig& config,
                           const TrainHyper& hyper);

std::string serialize_model(const LogisticModel& model);
LogisticModel parse_model(std::string_view text);
void save_model(const LogisticModel& model, const std::filesystem::path& path);
LogisticModel load_model(const std::filesystem::path& path);

// Featurized logistic predictor. Stacks taller than the feature window are
// evaluated on their topmost window (demo use; dataset stacks always fit).
class LogisticPredictor final : public StabilityPredictor {
  public:
    LogisticPredictor(LogisticModel model, std::uint64_t seed);
    double predict(const Stack& stack) const override;

  private:
    LogisticModel model_;
    std::uint64_t seed_;
    mutable std::uint64_t counter_;
};

}  // namespace stackkit
