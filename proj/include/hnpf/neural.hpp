#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "hnpf/fritz_john.hpp"
#include "hnpf/front.hpp"
#include "hnpf/linalg.hpp"
#include "hnpf/problems.hpp"

namespace hnpf {

inline constexpr std::size_t kHiddenWidth = 8;
inline constexpr std::size_t kHiddenLayers = 3;
inline constexpr std::size_t kOutputs = 2;

/// Three tanh layers of eight units and a two-way softmax head.
///
/// All trainable parameters live in one flat array, layer by layer, each layer
/// stored as its fan_in×fan_out weight matrix (row-major) followed by its bias.
/// Inputs pass through a fixed affine map x' = (x - offset)·scale first; it is
/// not trained and defaults to the identity.
class MlpModel {
public:
    MlpModel() = default;
    explicit MlpModel(std::size_t inputs);

    std::size_t inputs() const noexcept { return inputs_; }
    static constexpr std::size_t layer_count() noexcept { return kHiddenLayers + 1; }
    std::size_t fan_in(std::size_t layer) const noexcept;
    std::size_t fan_out(std::size_t layer) const noexcept;

    std::span<double> parameters() noexcept { return params_; }
    std::span<const double> parameters() const noexcept { return params_; }
    std::size_t parameter_count() const noexcept { return params_.size(); }

    /// Row-major fan_in×fan_out block of layer `layer`.
    std::span<const double> weights(std::size_t layer) const;
    std::span<const double> bias(std::size_t layer) const;
    std::size_t weight_offset(std::size_t layer) const noexcept { return offsets_[layer]; }

    Vector input_offset;
    Vector input_scale;

    /// Scale inputs from the box to [-1, 1].
    void set_input_box(std::span<const Interval> box);

    friend bool operator==(const MlpModel &, const MlpModel &) = default;

private:
    std::size_t inputs_ = 0;
    std::vector<double> params_;
    std::vector<std::size_t> offsets_;
};

/// Weights i.i.d. uniform on [-0.5, 0.5], biases zero.
MlpModel init_model(std::size_t inputs, std::uint64_t seed);

struct Probabilities {
    double pareto = 0.5;
    double nonpareto = 0.5;
};

Probabilities forward(const MlpModel &model, std::span<const double> x);

inline constexpr double kLogFloor = 1e-12;

/// Mean of -[t log p_pareto + (1-t) log p_nonpareto], logs floored at 1e-12.
double loss(std::span<const Probabilities> predictions, std::span<const double> targets);

/// Loss on a batch and its exact gradient with respect to every parameter.
double loss_and_gradient(const MlpModel &model, std::span<const Vector> xs,
                         std::span<const double> targets, std::span<double> gradient);

enum class LabelMode {
    soft,  ///< t = 1 - D_norm
    hard   ///< t = 1 if D_norm <= epsilon_margin else 0
};

struct TrainConfig {
    double learning_rate = 0.003;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adamax_epsilon = 1e-8;
    std::size_t steps_per_epoch = 1000;
    std::size_t max_epochs = 50;
    std::size_t batch_size = 64;
    std::size_t patience = 10;
    double epsilon_margin = 0.001;
    double threshold = 0.5;
    LabelMode label_mode = LabelMode::soft;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainReport {
    std::vector<double> train_loss;  ///< mean batch loss per epoch
    std::vector<double> val_loss;    ///< full validation loss after each epoch
    std::size_t epochs_run = 0;
    double initial_val_loss = 0.0;
    /// 1-based epoch of the returned parameters; 0 means the initial model.
    std::size_t best_epoch = 0;
    bool early_stopped = false;

    double final_train_loss() const { return train_loss.empty() ? 0.0 : train_loss.back(); }
    double final_val_loss() const { return val_loss.empty() ? initial_val_loss : val_loss.back(); }
    double best_val_loss() const;
};

struct TrainResult {
    MlpModel model;
    TrainReport report;
};

double training_target(const DiscriminantResult &label, const TrainConfig &config);

/// AdaMax on shuffled mini-batches; keeps the parameters with the lowest
/// validation loss and stops after `patience` epochs without improvement.
/// Throws TrainingError if a loss goes non-finite.
TrainResult train(MlpModel model, const std::vector<LabeledSample> &train_set,
                  const std::vector<LabeledSample> &validation_set, const TrainConfig &config);

/// Labels both sets with the Fritz-John discriminant, then trains.
TrainResult train(MlpModel model, const std::vector<Vector> &train_set,
                  const std::vector<Vector> &validation_set, const MooProblem &problem,
                  const TrainConfig &config);

/// Points with p_pareto >= threshold. Infeasible points are dropped when
/// `feasible_only` is set.
WeakParetoSet extract_weak_front(const MlpModel &model, const std::vector<Vector> &points,
                                 const MooProblem &problem, double threshold,
                                 bool feasible_only = true);

/// Text format:
///   hnpf-mlp 1
///   inputs <n>
///   layer <fan_in> <fan_out>       (once per layer, then one line of weights
///   <weights...>                    row-major and one line of biases)
///   <biases...>
///   input_offset <n values>
///   input_scale <n values>
/// Values use the shortest round-trip decimal form.
void save_model(std::ostream &out, const MlpModel &model);
MlpModel load_model(std::istream &in);
void save_model_file(const std::filesystem::path &path, const MlpModel &model);
MlpModel load_model_file(const std::filesystem::path &path);

void write_train_report_csv(std::ostream &out, const TrainReport &report);

} // namespace hnpf
