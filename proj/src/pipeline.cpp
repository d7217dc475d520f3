#include "hnpf/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hnpf/csv.hpp"
#include "hnpf/errors.hpp"
#include "hnpf/fritz_john.hpp"

namespace hnpf {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <typename T>
void take(const json &section, const char *key, T &field)
{
    if (section.contains(key)) {
        field = section.at(key).get<T>();
    }
}

void reject_unknown(const json &section, const std::string &where,
                    std::initializer_list<const char *> known)
{
    if (!section.is_object()) {
        throw InputError("config: '" + where + "' must be an object");
    }
    for (const auto &[key, value] : section.items()) {
        bool found = false;
        for (const char *k : known) {
            found = found || key == k;
        }
        if (!found) {
            throw InputError("config: unknown key '" + where + "." + key + "'");
        }
    }
}

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    return out;
}

std::vector<FrontPoint> in_display_sense(const MooProblem &problem, const std::vector<FrontPoint> &points)
{
    std::vector<FrontPoint> out = points;
    for (auto &p : out) {
        p.fx = display_objectives(problem, p.fx);
    }
    return out;
}

class StageClock {
public:
    StageClock(RunArtifact &artifact, std::string name)
        : artifact_(artifact), name_(std::move(name)), start_(std::chrono::steady_clock::now())
    {
    }

    void done()
    {
        const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
        artifact_.timings.push_back({name_, d.count()});
        artifact_.completed.push_back(name_);
    }

private:
    RunArtifact &artifact_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

template <typename F>
void stage(RunArtifact &artifact, const std::string &name, F &&body)
{
    StageClock clock(artifact, name);
    try {
        body();
    } catch (const std::exception &e) {
        throw StageError(name, e.what(), artifact);
    }
    clock.done();
}

} // namespace

void RunConfig::validate() const
{
    sample.validate();
    train.validate();
    if (filter_levels == 0) {
        throw InputError("config: filter levels must be positive");
    }
    for (double v : h) {
        if (!(v > 0.0)) {
            throw InputError("config: h must be positive");
        }
    }
    if (!(front_tolerance >= 0.0)) {
        throw InputError("config: front tolerance must be non-negative");
    }
    if (!(case_options.case7_normalizer > 0.0)) {
        throw InputError("config: case VII normalizer must be positive");
    }
}

ordered_json to_json(const RunConfig &c)
{
    ordered_json out;
    out["sample"] = {{"seed", c.sample.seed},
                     {"n_train", c.sample.n_train},
                     {"split", c.sample.split},
                     {"n_infer", c.sample.n_infer},
                     {"distribution", c.sample.distribution == Distribution::binomial ? "binomial" : "uniform"},
                     {"binomial_trials", c.sample.binomial_trials},
                     {"binomial_p", c.sample.binomial_p}};
    out["train"] = {{"seed", c.train.seed},
                    {"learning_rate", c.train.learning_rate},
                    {"beta1", c.train.beta1},
                    {"beta2", c.train.beta2},
                    {"adamax_epsilon", c.train.adamax_epsilon},
                    {"steps_per_epoch", c.train.steps_per_epoch},
                    {"max_epochs", c.train.max_epochs},
                    {"batch_size", c.train.batch_size},
                    {"patience", c.train.patience},
                    {"epsilon_margin", c.train.epsilon_margin},
                    {"threshold", c.train.threshold},
                    {"label_mode", c.train.label_mode == LabelMode::hard ? "hard" : "soft"}};
    out["filter"] = {{"levels", c.filter_levels}, {"h", c.h}};
    out["verify"] = {{"front_tolerance", c.front_tolerance}};
    out["cases"] = {{"case7_normalizer", c.case_options.case7_normalizer}};
    return out;
}

void apply_overrides(RunConfig &c, const json &o)
{
    try {
        reject_unknown(o, "config", {"seed", "sample", "train", "filter", "verify", "cases"});
        if (o.contains("seed")) {
            c.sample.seed = c.train.seed = o.at("seed").get<std::uint64_t>();
        }
        if (o.contains("sample")) {
            const json &s = o.at("sample");
            reject_unknown(s, "sample", {"seed", "n_train", "split", "n_infer", "distribution",
                                         "binomial_trials", "binomial_p"});
            take(s, "seed", c.sample.seed);
            take(s, "n_train", c.sample.n_train);
            take(s, "split", c.sample.split);
            take(s, "n_infer", c.sample.n_infer);
            if (s.contains("distribution")) {
                const auto d = s.at("distribution").get<std::string>();
                if (d != "uniform" && d != "binomial") {
                    throw InputError("config: distribution must be 'uniform' or 'binomial'");
                }
                c.sample.distribution = d == "binomial" ? Distribution::binomial : Distribution::uniform;
            }
            take(s, "binomial_trials", c.sample.binomial_trials);
            take(s, "binomial_p", c.sample.binomial_p);
        }
        if (o.contains("train")) {
            const json &t = o.at("train");
            reject_unknown(t, "train", {"seed", "learning_rate", "beta1", "beta2", "adamax_epsilon",
                                        "steps_per_epoch", "max_epochs", "batch_size", "patience",
                                        "epsilon_margin", "threshold", "label_mode"});
            take(t, "seed", c.train.seed);
            take(t, "learning_rate", c.train.learning_rate);
            take(t, "beta1", c.train.beta1);
            take(t, "beta2", c.train.beta2);
            take(t, "adamax_epsilon", c.train.adamax_epsilon);
            take(t, "steps_per_epoch", c.train.steps_per_epoch);
            take(t, "max_epochs", c.train.max_epochs);
            take(t, "batch_size", c.train.batch_size);
            take(t, "patience", c.train.patience);
            take(t, "epsilon_margin", c.train.epsilon_margin);
            take(t, "threshold", c.train.threshold);
            if (t.contains("label_mode")) {
                const auto m = t.at("label_mode").get<std::string>();
                if (m != "soft" && m != "hard") {
                    throw InputError("config: label_mode must be 'soft' or 'hard'");
                }
                c.train.label_mode = m == "hard" ? LabelMode::hard : LabelMode::soft;
            }
        }
        if (o.contains("filter")) {
            const json &f = o.at("filter");
            reject_unknown(f, "filter", {"levels", "h"});
            take(f, "levels", c.filter_levels);
            if (f.contains("h")) {
                const json &h = f.at("h");
                c.h = h.is_number() ? Vector{h.get<double>()} : h.get<Vector>();
            }
        }
        if (o.contains("verify")) {
            const json &v = o.at("verify");
            reject_unknown(v, "verify", {"front_tolerance"});
            take(v, "front_tolerance", c.front_tolerance);
        }
        if (o.contains("cases")) {
            const json &v = o.at("cases");
            reject_unknown(v, "cases", {"case7_normalizer"});
            take(v, "case7_normalizer", c.case_options.case7_normalizer);
        }
    } catch (const json::exception &e) {
        throw InputError(std::string("config: ") + e.what());
    }
}

StageError::StageError(std::string stage, const std::string &what, RunArtifact partial)
    : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), partial_(std::move(partial))
{
}

std::vector<std::string> case_names()
{
    std::vector<std::string> names = builtin_case_names();
    names.emplace_back("fair-search-uniform");
    names.emplace_back("fair-search-binomial");
    return names;
}

ResolvedCase resolve_case(const std::string &name, const CaseOptions &options)
{
    constexpr int kDocs = 48;
    constexpr double kPr = 0.56;
    constexpr double kPg = 0.5;
    if (name == "fair-search-uniform") {
        ResolvedCase r{fair_search_problem(kDocs, kPr, kPg)};
        r.problem.name = name;
        r.overrides = {{"sample", {{"distribution", "uniform"}}}};
        return r;
    }
    if (name == "fair-search-binomial") {
        ResolvedCase r{fair_search_problem(kDocs, kPr, kPg)};
        r.problem.name = name;
        r.overrides = {{"sample", {{"distribution", "binomial"}}}};
        return r;
    }
    return {builtin_case(name, options)};
}

RunArtifact run_case(const MooProblem &problem, const RunConfig &config,
                     const std::optional<std::filesystem::path> &out_dir)
{
    RunArtifact a;
    a.case_name = problem.name;
    a.config = config;

    stage(a, "config", [&] {
        problem.validate();
        config.validate();
        if (!config.h.empty() && config.h.size() != 1 && config.h.size() != problem.k()) {
            throw InputError("h needs one value or one per objective");
        }
    });
    stage(a, "sample", [&] { a.samples = sample(problem, config.sample); });
    stage(a, "label", [&] {
        a.train_labeled = label_samples(problem, a.samples.train);
        a.validation_labeled = label_samples(problem, a.samples.validation);
    });
    stage(a, "train", [&] {
        MlpModel model = init_model(problem.n(), config.train.seed);
        model.set_input_box(problem.bounds);
        TrainResult r = train(std::move(model), a.train_labeled, a.validation_labeled, config.train);
        a.model = std::move(r.model);
        a.train_report = std::move(r.report);
    });
    stage(a, "extract", [&] {
        const std::vector<Vector> points = sample_inference(problem, config.sample);
        a.evaluations = points.size();
        a.weak = extract_weak_front(a.model, points, problem, config.train.threshold);
    });
    stage(a, "filter", [&] {
        if (a.weak.points.empty()) {
            return;
        }
        a.filter_config = FilterConfig::from_points(a.weak.points, config.filter_levels);
        for (std::size_t i = 0; i < a.filter_config.k() && !config.h.empty(); ++i) {
            a.filter_config.h[i] = config.h.size() == 1 ? config.h[0] : config.h[i];
        }
        a.strong = plane_filter(a.weak, a.filter_config);
    });
    stage(a, "verify", [&] {
        a.density = density(a.strong.points.size(), a.evaluations, problem.name);
        if (problem.has_front()) {
            a.front = front_error(a.strong.points, problem, config.front_tolerance);
        }
    });
    if (out_dir) {
        stage(a, "write", [&] { write_artifact(*out_dir, problem, a); });
    }
    return a;
}

RunArtifact run_case(const std::string &case_name, RunConfig config,
                     const std::optional<std::filesystem::path> &out_dir)
{
    ResolvedCase rc = resolve_case(case_name, config.case_options);
    // The fair-search variants are defined by their sampling distribution.
    apply_overrides(config, rc.overrides);
    return run_case(rc.problem, config, out_dir);
}

ordered_json report_json(const RunArtifact &a)
{
    ordered_json r;
    r["case"] = a.case_name;
    r["stages"] = a.completed;
    const TrainReport &t = a.train_report;
    r["training"] = {{"epochs_run", t.epochs_run},
                     {"best_epoch", t.best_epoch},
                     {"early_stopped", t.early_stopped},
                     {"initial_val_loss", t.initial_val_loss},
                     {"best_val_loss", t.best_val_loss()},
                     {"final_train_loss", t.final_train_loss()},
                     {"final_val_loss", t.final_val_loss()}};
    r["weak_points"] = a.weak.points.size();
    if (!a.weak.warning.empty()) {
        r["warning"] = a.weak.warning;
    }
    r["strong_points"] = a.strong.points.size();
    r["filter"] = {{"h", a.filter_config.h},
                   {"f_min", a.filter_config.f_min},
                   {"f_max", a.filter_config.f_max},
                   {"single_slab", a.strong.single_slab},
                   {"scan_iterations", a.strong.scan_iterations}};
    r["density"] = to_json(a.density);
    r["front_error"] = a.front ? ordered_json(to_json(*a.front)) : ordered_json(nullptr);
    return r;
}

void write_artifact(const std::filesystem::path &dir, const MooProblem &problem, const RunArtifact &a)
{
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "config.json");
        ordered_json c = to_json(a.config);
        c["case"] = a.case_name;
        out << c.dump(2) << '\n';
    }
    {
        auto out = open_out(dir / "train_samples.csv");
        std::vector<std::string> header = csv::numbered("x_", problem.n());
        header.insert(header.end(), {"d_norm", "label_pareto", "validation"});
        csv::write_row(out, header);
        auto rows = [&](const std::vector<LabeledSample> &set, double flag) {
            for (const auto &s : set) {
                Vector row = s.x;
                row.insert(row.end(), {s.label.normalized, s.label.label_pareto, flag});
                csv::write_row(out, row);
            }
        };
        rows(a.train_labeled, 0.0);
        rows(a.validation_labeled, 1.0);
    }
    {
        auto out = open_out(dir / "weak_front.csv");
        write_front_csv(out, in_display_sense(problem, a.weak.points));
    }
    {
        auto out = open_out(dir / "strong_front.csv");
        write_front_csv(out, in_display_sense(problem, a.strong.points));
    }
    {
        auto out = open_out(dir / "loss_curve.csv");
        write_train_report_csv(out, a.train_report);
    }
    save_model_file(dir / "model.txt", a.model);
    {
        auto out = open_out(dir / "report.json");
        out << report_json(a).dump(2) << '\n';
    }
}

std::vector<SummaryRow> run_all(const std::vector<std::string> &cases, const RunConfig &config,
                                const std::optional<std::filesystem::path> &out_root)
{
    std::vector<SummaryRow> rows;
    for (const auto &name : cases) {
        SummaryRow row;
        row.case_name = name;
        try {
            std::optional<std::filesystem::path> dir;
            if (out_root) {
                dir = *out_root / name;
            }
            const RunArtifact a = run_case(name, config, dir);
            row.ok = true;
            row.density = a.density;
        } catch (const StageError &e) {
            row.error = e.what();
        } catch (const std::exception &e) {
            row.error = std::string("config: ") + e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_summary(std::ostream &out, const std::vector<SummaryRow> &rows)
{
    out << std::left << std::setw(22) << "Case" << std::right << std::setw(10) << "Density"
        << std::setw(10) << "Points" << std::setw(10) << "Evals" << '\n';
    for (const auto &r : rows) {
        out << std::left << std::setw(22) << r.case_name << std::right;
        if (!r.ok) {
            out << "  failed: " << r.error << '\n';
            continue;
        }
        std::ostringstream pct;
        pct << std::fixed << std::setprecision(2) << r.density.percent << '%';
        out << std::setw(10) << pct.str() << std::setw(10) << r.density.points << std::setw(10)
            << r.density.evaluations << '\n';
    }
}

void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows)
{
    out << "case,density,points,evals,error\n";
    for (const auto &r : rows) {
        out << r.case_name << ',';
        if (r.ok) {
            out << csv::format(r.density.percent) << ',' << r.density.points << ','
                << r.density.evaluations << ",\n";
        } else {
            std::string msg = r.error;
            for (char &c : msg) {
                if (c == ',' || c == '\n') {
                    c = ';';
                }
            }
            out << ",,," << msg << '\n';
        }
    }
}

} // namespace hnpf
