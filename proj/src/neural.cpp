#include "hnpf/neural.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "hnpf/csv.hpp"
#include "hnpf/errors.hpp"
#include "hnpf/rng.hpp"

namespace hnpf {

namespace {

constexpr std::uint64_t kInitStream = 11;
constexpr std::uint64_t kBatchStream = 12;

struct Trace {
    /// act[l] is the input of layer l: act[0] the scaled x, act[1..3] tanh outputs.
    std::array<Vector, MlpModel::layer_count()> act;
    std::array<double, kOutputs> p{};
};

void run(const MlpModel &model, std::span<const double> x, Trace &t)
{
    const std::size_t n = model.inputs();
    t.act[0].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.act[0][i] = (x[i] - model.input_offset[i]) * model.input_scale[i];
    }
    std::array<double, kOutputs> logits{};
    for (std::size_t l = 0; l < MlpModel::layer_count(); ++l) {
        const auto w = model.weights(l);
        const auto b = model.bias(l);
        const std::size_t in = model.fan_in(l);
        const std::size_t out = model.fan_out(l);
        const Vector &a = t.act[l];
        const bool last = l + 1 == MlpModel::layer_count();
        Vector *next = last ? nullptr : &t.act[l + 1];
        if (next) {
            next->assign(out, 0.0);
        }
        for (std::size_t j = 0; j < out; ++j) {
            double z = b[j];
            for (std::size_t i = 0; i < in; ++i) {
                z += a[i] * w[i * out + j];
            }
            if (last) {
                logits[j] = z;
            } else {
                (*next)[j] = std::tanh(z);
            }
        }
    }
    const double top = std::max(logits[0], logits[1]);
    const double e0 = std::exp(logits[0] - top);
    const double e1 = std::exp(logits[1] - top);
    t.p = {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double sample_loss(const std::array<double, kOutputs> &p, double target)
{
    return -(target * std::log(std::max(p[0], kLogFloor))
             + (1.0 - target) * std::log(std::max(p[1], kLogFloor)));
}

/// Adds scale·∂loss/∂θ for one sample into `gradient`; returns the sample loss.
double accumulate(const MlpModel &model, std::span<const double> x, double target, double scale,
                  std::span<double> gradient, Trace &t)
{
    run(model, x, t);
    const auto &p = t.p;
    const double dp0 = p[0] > kLogFloor ? -target / p[0] : 0.0;
    const double dp1 = p[1] > kLogFloor ? -(1.0 - target) / p[1] : 0.0;
    const double s = p[0] * dp0 + p[1] * dp1;

    Vector delta{scale * p[0] * (dp0 - s), scale * p[1] * (dp1 - s)};
    Vector previous;
    const auto params = model.parameters();
    for (std::size_t l = MlpModel::layer_count(); l-- > 0;) {
        const std::size_t in = model.fan_in(l);
        const std::size_t out = model.fan_out(l);
        const std::size_t w0 = model.weight_offset(l);
        const std::size_t b0 = w0 + in * out;
        const Vector &a = t.act[l];
        for (std::size_t i = 0; i < in; ++i) {
            for (std::size_t j = 0; j < out; ++j) {
                gradient[w0 + i * out + j] += a[i] * delta[j];
            }
        }
        for (std::size_t j = 0; j < out; ++j) {
            gradient[b0 + j] += delta[j];
        }
        if (l == 0) {
            break;
        }
        previous.assign(in, 0.0);
        for (std::size_t i = 0; i < in; ++i) {
            double g = 0.0;
            for (std::size_t j = 0; j < out; ++j) {
                g += params[w0 + i * out + j] * delta[j];
            }
            previous[i] = g * (1.0 - a[i] * a[i]);
        }
        delta.swap(previous);
    }
    return sample_loss(p, target);
}

double dataset_loss(const MlpModel &model, const std::vector<LabeledSample> &set,
                    const std::vector<double> &targets)
{
    Trace t;
    double sum = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        run(model, set[i].x, t);
        sum += sample_loss(t.p, targets[i]);
    }
    return sum / static_cast<double>(set.size());
}

std::string shortest(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_values(std::ostream &out, std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i ? " " : "") << shortest(values[i]);
    }
    out << '\n';
}

Vector read_values(std::istream &in, std::size_t count, const char *what)
{
    Vector v(count);
    for (auto &x : v) {
        std::string token;
        if (!(in >> token)) {
            throw InputError(std::string("model file: truncated ") + what);
        }
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            throw InputError(std::string("model file: bad number in ") + what);
        }
    }
    return v;
}

void expect_word(std::istream &in, const std::string &word)
{
    std::string got;
    if (!(in >> got) || got != word) {
        throw InputError("model file: expected '" + word + "'");
    }
}

} // namespace

MlpModel::MlpModel(std::size_t inputs)
    : input_offset(inputs, 0.0), input_scale(inputs, 1.0), inputs_(inputs)
{
    std::size_t total = 0;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        offsets_.push_back(total);
        total += fan_in(l) * fan_out(l) + fan_out(l);
    }
    params_.assign(total, 0.0);
}

std::size_t MlpModel::fan_in(std::size_t layer) const noexcept
{
    return layer == 0 ? inputs_ : kHiddenWidth;
}

std::size_t MlpModel::fan_out(std::size_t layer) const noexcept
{
    return layer + 1 == layer_count() ? kOutputs : kHiddenWidth;
}

std::span<const double> MlpModel::weights(std::size_t layer) const
{
    return std::span<const double>(params_).subspan(offsets_[layer], fan_in(layer) * fan_out(layer));
}

std::span<const double> MlpModel::bias(std::size_t layer) const
{
    return std::span<const double>(params_).subspan(offsets_[layer] + fan_in(layer) * fan_out(layer),
                                                    fan_out(layer));
}

void MlpModel::set_input_box(std::span<const Interval> box)
{
    if (box.size() != inputs_) {
        throw InputError("set_input_box: dimension mismatch");
    }
    for (std::size_t i = 0; i < inputs_; ++i) {
        input_offset[i] = 0.5 * (box[i].lo + box[i].hi);
        input_scale[i] = 2.0 / (box[i].hi - box[i].lo);
    }
}

MlpModel init_model(std::size_t inputs, std::uint64_t seed)
{
    if (inputs == 0) {
        throw InputError("init_model: need at least one input");
    }
    MlpModel model(inputs);
    Rng rng(derive_seed(seed, kInitStream));
    auto params = model.parameters();
    for (std::size_t l = 0; l < MlpModel::layer_count(); ++l) {
        const std::size_t w0 = model.weight_offset(l);
        const std::size_t count = model.fan_in(l) * model.fan_out(l);
        for (std::size_t i = 0; i < count; ++i) {
            params[w0 + i] = rng.uniform(-0.5, 0.5);
        }
    }
    return model;
}

Probabilities forward(const MlpModel &model, std::span<const double> x)
{
    if (x.size() != model.inputs()) {
        throw InputError("forward: expected " + std::to_string(model.inputs()) + " inputs");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw InputError("forward: non-finite input");
        }
    }
    Trace t;
    run(model, x, t);
    return {t.p[0], t.p[1]};
}

double loss(std::span<const Probabilities> predictions, std::span<const double> targets)
{
    if (predictions.size() != targets.size()) {
        throw InputError("loss: predictions and labels differ in length");
    }
    if (predictions.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        sum += sample_loss({predictions[i].pareto, predictions[i].nonpareto}, targets[i]);
    }
    return sum / static_cast<double>(predictions.size());
}

double loss_and_gradient(const MlpModel &model, std::span<const Vector> xs,
                         std::span<const double> targets, std::span<double> gradient)
{
    if (xs.size() != targets.size() || xs.empty()) {
        throw InputError("loss_and_gradient: need a non-empty batch with one target per point");
    }
    if (gradient.size() != model.parameter_count()) {
        throw InputError("loss_and_gradient: gradient buffer has the wrong size");
    }
    std::fill(gradient.begin(), gradient.end(), 0.0);
    const double scale = 1.0 / static_cast<double>(xs.size());
    Trace t;
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum += accumulate(model, xs[i], targets[i], scale, gradient, t);
    }
    return sum * scale;
}

void TrainConfig::validate() const
{
    if (!(learning_rate > 0.0)) {
        throw InputError("train config: learning rate must be positive");
    }
    if (!(epsilon_margin > 0.0 && epsilon_margin < 1.0)) {
        throw InputError("train config: epsilon margin must lie in (0, 1)");
    }
    if (max_epochs == 0) {
        throw InputError("train config: max_epochs must be at least 1");
    }
    if (steps_per_epoch == 0 || batch_size == 0) {
        throw InputError("train config: steps per epoch and batch size must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
        throw InputError("train config: moment decays must lie in [0, 1)");
    }
    if (!(threshold >= 0.0)) {
        throw InputError("train config: threshold must be non-negative");
    }
}

double TrainReport::best_val_loss() const
{
    return best_epoch == 0 ? initial_val_loss : val_loss[best_epoch - 1];
}

double training_target(const DiscriminantResult &label, const TrainConfig &config)
{
    if (config.label_mode == LabelMode::hard) {
        return label.feasible && label.normalized <= config.epsilon_margin ? 1.0 : 0.0;
    }
    return label.label_pareto;
}

TrainResult train(MlpModel model, const std::vector<LabeledSample> &train_set,
                  const std::vector<LabeledSample> &validation_set, const TrainConfig &config)
{
    config.validate();
    if (train_set.empty() || validation_set.empty()) {
        throw InputError("train: training and validation sets must be non-empty");
    }
    auto targets_of = [&config](const std::vector<LabeledSample> &set) {
        std::vector<double> t;
        t.reserve(set.size());
        for (const auto &s : set) {
            t.push_back(training_target(s.label, config));
        }
        return t;
    };
    const std::vector<double> train_targets = targets_of(train_set);
    const std::vector<double> val_targets = targets_of(validation_set);

    Rng rng(derive_seed(config.seed, kBatchStream));
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::size_t cursor = 0;

    const std::size_t count = model.parameter_count();
    std::vector<double> grad(count), first_moment(count, 0.0), inf_norm(count, 0.0);
    double beta1_power = 1.0;
    Trace trace;

    TrainReport report;
    report.initial_val_loss = dataset_loss(model, validation_set, val_targets);
    MlpModel best = model;
    double best_loss = report.initial_val_loss;
    std::size_t since_best = 0;
    const std::size_t batch = std::min(config.batch_size, train_set.size());
    const double scale = 1.0 / static_cast<double>(batch);

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        double epoch_sum = 0.0;
        for (std::size_t step = 0; step < config.steps_per_epoch; ++step) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t b = 0; b < batch; ++b) {
                if (cursor == order.size()) {
                    rng.shuffle(order);
                    cursor = 0;
                }
                const std::size_t idx = order[cursor++];
                batch_loss += accumulate(model, train_set[idx].x, train_targets[idx], scale, grad, trace);
            }
            batch_loss *= scale;
            if (!std::isfinite(batch_loss)) {
                throw TrainingError("training loss became non-finite in epoch " + std::to_string(epoch),
                                    epoch);
            }
            epoch_sum += batch_loss;

            beta1_power *= config.beta1;
            const double step_size = config.learning_rate / (1.0 - beta1_power);
            auto params = model.parameters();
            for (std::size_t i = 0; i < count; ++i) {
                first_moment[i] = config.beta1 * first_moment[i] + (1.0 - config.beta1) * grad[i];
                inf_norm[i] = std::max(config.beta2 * inf_norm[i], std::abs(grad[i]));
                params[i] -= step_size * first_moment[i] / (inf_norm[i] + config.adamax_epsilon);
            }
        }
        const double val = dataset_loss(model, validation_set, val_targets);
        if (!std::isfinite(val)) {
            throw TrainingError("validation loss became non-finite in epoch " + std::to_string(epoch),
                                epoch);
        }
        report.train_loss.push_back(epoch_sum / static_cast<double>(config.steps_per_epoch));
        report.val_loss.push_back(val);
        report.epochs_run = epoch;
        if (val < best_loss) {
            best_loss = val;
            best = model;
            report.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= config.patience) {
            report.early_stopped = true;
            break;
        }
    }
    return {std::move(best), std::move(report)};
}

TrainResult train(MlpModel model, const std::vector<Vector> &train_set,
                  const std::vector<Vector> &validation_set, const MooProblem &problem,
                  const TrainConfig &config)
{
    return train(std::move(model), label_samples(problem, train_set),
                 label_samples(problem, validation_set), config);
}

WeakParetoSet extract_weak_front(const MlpModel &model, const std::vector<Vector> &points,
                                 const MooProblem &problem, double threshold, bool feasible_only)
{
    WeakParetoSet out;
    Trace t;
    for (std::size_t i = 0; i < points.size(); ++i) {
        run(model, points[i], t);
        if (t.p[0] < threshold) {
            continue;
        }
        Point p = evaluate(problem, points[i]);
        if (feasible_only && !is_feasible(p.gx)) {
            continue;
        }
        out.points.push_back({i, std::move(p.x), std::move(p.fx), t.p[0]});
    }
    if (out.points.empty()) {
        out.warning = "no point reached p_pareto >= " + csv::format(threshold);
    }
    return out;
}

void save_model(std::ostream &out, const MlpModel &model)
{
    out << "hnpf-mlp 1\n";
    out << "inputs " << model.inputs() << '\n';
    for (std::size_t l = 0; l < MlpModel::layer_count(); ++l) {
        out << "layer " << model.fan_in(l) << ' ' << model.fan_out(l) << '\n';
        write_values(out, model.weights(l));
        write_values(out, model.bias(l));
    }
    out << "input_offset ";
    write_values(out, model.input_offset);
    out << "input_scale ";
    write_values(out, model.input_scale);
}

MlpModel load_model(std::istream &in)
{
    expect_word(in, "hnpf-mlp");
    int version = 0;
    if (!(in >> version) || version != 1) {
        throw InputError("model file: unsupported version");
    }
    expect_word(in, "inputs");
    std::size_t inputs = 0;
    if (!(in >> inputs) || inputs == 0) {
        throw InputError("model file: bad input count");
    }
    MlpModel model(inputs);
    auto params = model.parameters();
    for (std::size_t l = 0; l < MlpModel::layer_count(); ++l) {
        expect_word(in, "layer");
        std::size_t fi = 0, fo = 0;
        if (!(in >> fi >> fo) || fi != model.fan_in(l) || fo != model.fan_out(l)) {
            throw InputError("model file: layer " + std::to_string(l) + " has the wrong shape");
        }
        const Vector w = read_values(in, fi * fo, "weights");
        const Vector b = read_values(in, fo, "biases");
        std::copy(w.begin(), w.end(), params.begin() + static_cast<long>(model.weight_offset(l)));
        std::copy(b.begin(), b.end(),
                  params.begin() + static_cast<long>(model.weight_offset(l) + fi * fo));
    }
    expect_word(in, "input_offset");
    model.input_offset = read_values(in, inputs, "input_offset");
    expect_word(in, "input_scale");
    model.input_scale = read_values(in, inputs, "input_scale");
    return model;
}

void save_model_file(const std::filesystem::path &path, const MlpModel &model)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    save_model(out, model);
}

MlpModel load_model_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open model file " + path.string());
    }
    return load_model(in);
}

void write_train_report_csv(std::ostream &out, const TrainReport &report)
{
    const std::vector<std::string> header{"epoch", "train_loss", "val_loss"};
    csv::write_row(out, header);
    for (std::size_t e = 0; e < report.epochs_run; ++e) {
        const std::vector<double> row{static_cast<double>(e + 1), report.train_loss[e], report.val_loss[e]};
        csv::write_row(out, row);
    }
}

} // namespace hnpf
