#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hnpf/csv.hpp"
#include "hnpf/errors.hpp"
#include "hnpf/filter.hpp"
#include "hnpf/neural.hpp"
#include "hnpf/pipeline.hpp"
#include "hnpf/problem_io.hpp"
#include "hnpf/verify.hpp"

namespace {

using namespace hnpf;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

/// Usage problems found after parsing (unknown case, bad combination of flags).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunFlags {
    std::string case_name;
    std::string problem_file;
    std::string config_file;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;
    std::optional<double> threshold;
    std::vector<double> h;
    std::optional<std::string> label_mode;
};

void add_run_flags(CLI::App *cmd, RunFlags &f, bool single_case)
{
    if (single_case) {
        cmd->add_option("--case", f.case_name, "Built-in case name (see list-cases)");
        cmd->add_option("--problem", f.problem_file, "JSON problem description")->check(CLI::ExistingFile);
    }
    cmd->add_option("--seed", f.seed, "Seed for sampling and training");
    cmd->add_option("--epochs", f.epochs, "Maximum training epochs")->check(CLI::Range(1, 1000000));
    cmd->add_option("--threshold", f.threshold, "Minimum p_pareto for the weak set")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--h", f.h, "Filter slab width (one value, or one per objective)")->delimiter(',');
    cmd->add_option("--label-mode", f.label_mode, "soft or hard training labels")
        ->check(CLI::IsMember({"soft", "hard"}));
    cmd->add_option("--out", f.out, "Output directory (default: $HNPF_OUTPUT_DIR or ./runs)");
    cmd->add_option("--config", f.config_file, "JSON overrides for any run setting")->check(CLI::ExistingFile);
}

nlohmann::json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw InputError(path + ": " + e.what());
    }
}

RunConfig build_config(const RunFlags &f)
{
    RunConfig cfg;
    if (!f.config_file.empty()) {
        apply_overrides(cfg, read_json_file(f.config_file));
    }
    if (f.seed) {
        cfg.sample.seed = cfg.train.seed = *f.seed;
    }
    if (f.epochs) {
        cfg.train.max_epochs = *f.epochs;
    }
    if (f.threshold) {
        cfg.train.threshold = *f.threshold;
    }
    if (!f.h.empty()) {
        cfg.h = f.h;
    }
    if (f.label_mode) {
        cfg.train.label_mode = *f.label_mode == "hard" ? LabelMode::hard : LabelMode::soft;
    }
    cfg.validate();
    return cfg;
}

std::filesystem::path output_root(const RunFlags &f)
{
    if (!f.out.empty()) {
        return f.out;
    }
    if (const char *env = std::getenv("HNPF_OUTPUT_DIR"); env && *env) {
        return env;
    }
    return "runs";
}

MooProblem problem_for(const std::string &case_name, const std::string &problem_file,
                       const CaseOptions &options = {})
{
    if (case_name.empty() == problem_file.empty()) {
        throw UsageError("give exactly one of --case or --problem");
    }
    if (!problem_file.empty()) {
        return load_problem_file(problem_file);
    }
    try {
        return resolve_case(case_name, options).problem;
    } catch (const InputError &e) {
        throw UsageError(e.what());
    }
}

int cmd_run(const RunFlags &f)
{
    RunConfig cfg;
    try {
        cfg = build_config(f);
    } catch (const InputError &e) {
        throw UsageError(e.what());
    }
    std::string name;
    MooProblem problem;
    if (!f.problem_file.empty() && f.case_name.empty()) {
        problem = load_problem_file(f.problem_file);
        name = problem.name.empty() ? "custom" : problem.name;
    } else {
        (void)problem_for(f.case_name, f.problem_file, cfg.case_options);
        name = f.case_name;
    }
    const auto dir = output_root(f) / name;
    try {
        const RunArtifact a = f.problem_file.empty() ? run_case(name, cfg, dir) : run_case(problem, cfg, dir);
        std::cout << to_text(a.density) << '\n';
        if (a.front) {
            std::cout << to_text(*a.front) << '\n';
        }
        if (!a.weak.warning.empty()) {
            std::cout << "warning: " << a.weak.warning << '\n';
        }
        std::cout << "training: " << a.train_report.epochs_run << " epochs, best epoch "
                  << a.train_report.best_epoch << ", best validation loss "
                  << csv::format(a.train_report.best_val_loss()) << '\n';
        for (const auto &t : a.timings) {
            std::cout << "  " << t.stage << ": " << csv::format(t.seconds) << " s\n";
        }
        std::cout << "artifact: " << dir.string() << '\n';
    } catch (const StageError &e) {
        std::cerr << "error in stage '" << e.stage() << "': " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}

int cmd_run_all(const RunFlags &f, std::vector<std::string> cases)
{
    RunConfig cfg;
    try {
        cfg = build_config(f);
    } catch (const InputError &e) {
        throw UsageError(e.what());
    }
    const auto known = case_names();
    if (cases.empty()) {
        cases = known;
    }
    for (const auto &c : cases) {
        if (std::find(known.begin(), known.end(), c) == known.end()) {
            throw UsageError("unknown case '" + c + "'");
        }
    }
    const auto root = output_root(f);
    const auto rows = run_all(cases, cfg, root);
    write_summary(std::cout, rows);
    std::filesystem::create_directories(root);
    std::ofstream summary(root / "summary.csv", std::ios::binary);
    write_summary_csv(summary, rows);
    for (const auto &r : rows) {
        if (!r.ok) {
            return kFailure;
        }
    }
    return kOk;
}

struct FilterFlags {
    std::string input;
    std::string output;
    std::size_t k = 0;
    std::vector<double> h;
    std::size_t levels = 200;
    bool oracle = false;
    bool maximize = false;
};

int cmd_filter(const FilterFlags &f)
{
    std::ifstream in(f.input);
    if (!in) {
        throw InputError("cannot open " + f.input);
    }
    PointTable table = read_point_table(in, f.k);
    if (table.points.empty()) {
        std::cerr << "error: " << f.input << " has no data rows\n";
        return kFailure;
    }
    std::vector<FrontPoint> canonical = table.points;
    if (f.maximize) {
        for (auto &p : canonical) {
            for (double &v : p.fx) {
                v = -v;
            }
        }
    }
    StrongParetoSet result;
    if (f.oracle) {
        result = oracle_filter(canonical);
    } else {
        FilterConfig cfg = FilterConfig::from_points(canonical, f.levels);
        if (!f.h.empty()) {
            if (f.h.size() != 1 && f.h.size() != table.k) {
                throw UsageError("--h needs one value or one per objective");
            }
            for (std::size_t i = 0; i < table.k; ++i) {
                cfg.h[i] = f.h.size() == 1 ? f.h[0] : f.h[i];
            }
        }
        result = plane_filter(canonical, cfg);
    }
    if (f.output.empty() || f.output == "-") {
        write_filter_csv(std::cout, table.points, result);
    } else {
        std::ofstream out(f.output, std::ios::binary);
        if (!out) {
            throw InputError("cannot write " + f.output);
        }
        write_filter_csv(out, table.points, result);
    }
    std::cerr << result.points.size() << " of " << table.points.size() << " points survive\n";
    return kOk;
}

std::vector<Vector> read_x_columns(const std::string &path, std::size_t n)
{
    const csv::Table t = csv::read_file(path);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < n; ++i) {
        const long c = t.column("x_" + std::to_string(i + 1));
        if (c < 0) {
            throw InputError(path + ": missing column x_" + std::to_string(i + 1));
        }
        cols.push_back(static_cast<std::size_t>(c));
    }
    std::vector<Vector> xs;
    for (const auto &row : t.rows) {
        Vector x;
        for (std::size_t c : cols) {
            x.push_back(row[c]);
        }
        xs.push_back(std::move(x));
    }
    return xs;
}

struct CertifyFlags {
    std::string case_name;
    std::string problem_file;
    std::string input;
    std::string output;
    double epsilon = 0.001;
};

int cmd_certify(const CertifyFlags &f)
{
    const MooProblem problem = problem_for(f.case_name, f.problem_file);
    const auto xs = read_x_columns(f.input, problem.n());
    const auto certs = certify_points(problem, xs, f.epsilon);
    std::ofstream file;
    if (!f.output.empty() && f.output != "-") {
        file.open(f.output, std::ios::binary);
        if (!file) {
            throw InputError("cannot write " + f.output);
        }
    }
    std::ostream &out = file.is_open() ? file : std::cout;
    std::vector<std::string> header{"index"};
    for (auto &s : csv::numbered("x_", problem.n())) {
        header.push_back(s);
    }
    header.insert(header.end(), {"raw", "d_norm", "feasible", "pass"});
    csv::write_row(out, header);
    std::size_t passed = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Vector row{static_cast<double>(i)};
        row.insert(row.end(), xs[i].begin(), xs[i].end());
        row.insert(row.end(), {certs[i].raw, certs[i].normalized, certs[i].feasible ? 1.0 : 0.0,
                               certs[i].pass ? 1.0 : 0.0});
        csv::write_row(out, row);
        passed += certs[i].pass ? 1 : 0;
    }
    std::cerr << passed << " of " << xs.size() << " points certified at epsilon " << csv::format(f.epsilon) << '\n';
    return kOk;
}

struct FieldFlags {
    std::string case_name;
    std::string problem_file;
    std::string model;
    std::string points;
    std::string output;
    std::size_t resolution = 200;
};

int cmd_export_field(const FieldFlags &f)
{
    const MooProblem problem = problem_for(f.case_name, f.problem_file);
    const MlpModel model = load_model_file(f.model);
    if (model.inputs() != problem.n()) {
        throw InputError("model expects " + std::to_string(model.inputs()) + " inputs, problem has " +
                         std::to_string(problem.n()));
    }
    std::vector<Vector> xs;
    if (!f.points.empty()) {
        xs = read_x_columns(f.points, problem.n());
    } else {
        if (problem.n() > 3) {
            throw UnsupportedError("grid export needs n <= 3; pass --points for point-list mode");
        }
        const std::size_t r = f.resolution;
        std::size_t total = 1;
        for (std::size_t i = 0; i < problem.n(); ++i) {
            total *= r;
        }
        xs.reserve(total);
        for (std::size_t idx = 0; idx < total; ++idx) {
            Vector x(problem.n());
            std::size_t rest = idx;
            for (std::size_t i = problem.n(); i-- > 0;) {
                const std::size_t j = rest % r;
                rest /= r;
                const Interval &b = problem.bounds[i];
                x[i] = r == 1 ? 0.5 * (b.lo + b.hi)
                              : b.lo + (b.hi - b.lo) * static_cast<double>(j) / static_cast<double>(r - 1);
            }
            xs.push_back(std::move(x));
        }
    }
    std::ofstream file;
    if (!f.output.empty() && f.output != "-") {
        file.open(f.output, std::ios::binary);
        if (!file) {
            throw InputError("cannot write " + f.output);
        }
    }
    std::ostream &out = file.is_open() ? file : std::cout;
    std::vector<std::string> header = csv::numbered("x_", problem.n());
    header.emplace_back("p_pareto");
    csv::write_row(out, header);
    for (const auto &x : xs) {
        Vector row = x;
        row.push_back(forward(model, x).pareto);
        csv::write_row(out, row);
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Two-stage Pareto front extraction: Fritz-John labelled classifier plus plane-search filter"};
    // -h stays free for the slab width.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.allow_extras(false);

    RunFlags run_flags;
    auto *run = app.add_subcommand("run", "Run the full pipeline on one case");
    add_run_flags(run, run_flags, true);

    RunFlags all_flags;
    std::vector<std::string> all_cases;
    auto *run_all_cmd = app.add_subcommand("run-all", "Run several cases and print a density table");
    run_all_cmd->add_option("--cases", all_cases, "Cases to run (default: all)")->delimiter(',');
    add_run_flags(run_all_cmd, all_flags, false);

    FilterFlags filter_flags;
    auto *filter = app.add_subcommand("filter", "Strong-Pareto filter for a CSV point set");
    filter->add_option("input", filter_flags.input, "CSV with columns [index,] x_*, f_*")->required();
    filter->add_option("-o,--output", filter_flags.output, "Output CSV (default stdout)");
    filter->add_option("--k", filter_flags.k, "Expected number of objective columns");
    filter->add_option("--h", filter_flags.h, "Slab width (one value, or one per objective)")->delimiter(',');
    filter->add_option("--levels", filter_flags.levels, "Slabs per objective when --h is absent")
        ->check(CLI::PositiveNumber);
    filter->add_flag("--oracle", filter_flags.oracle, "Use the all-pairs non-dominance filter");
    filter->add_flag("--maximize", filter_flags.maximize, "Objectives are to be maximized");

    CertifyFlags cert_flags;
    auto *certify = app.add_subcommand("certify", "Fritz-John check of candidate points");
    certify->add_option("--case", cert_flags.case_name, "Built-in case name");
    certify->add_option("--problem", cert_flags.problem_file, "JSON problem description")->check(CLI::ExistingFile);
    certify->add_option("input", cert_flags.input, "CSV with columns x_1..x_n")->required()->check(CLI::ExistingFile);
    certify->add_option("-o,--output", cert_flags.output, "Output CSV (default stdout)");
    certify->add_option("--epsilon", cert_flags.epsilon, "Pass threshold on the normalized discriminant")
        ->check(CLI::Range(0.0, 1.0));

    auto *list = app.add_subcommand("list-cases", "Print the available case names");

    FieldFlags field_flags;
    auto *field = app.add_subcommand("export-probability-field", "Evaluate a trained model on a grid");
    field->add_option("--case", field_flags.case_name, "Built-in case name");
    field->add_option("--problem", field_flags.problem_file, "JSON problem description")->check(CLI::ExistingFile);
    field->add_option("--model", field_flags.model, "model.txt from a run")->required()->check(CLI::ExistingFile);
    field->add_option("--resolution", field_flags.resolution, "Grid points per axis")->check(CLI::PositiveNumber);
    field->add_option("--points", field_flags.points, "CSV of x_* columns instead of a grid")
        ->check(CLI::ExistingFile);
    field->add_option("-o,--output", field_flags.output, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_flags);
        }
        if (run_all_cmd->parsed()) {
            return cmd_run_all(all_flags, all_cases);
        }
        if (filter->parsed()) {
            return cmd_filter(filter_flags);
        }
        if (certify->parsed()) {
            return cmd_certify(cert_flags);
        }
        if (list->parsed()) {
            for (const auto &name : case_names()) {
                std::cout << name << '\n';
            }
            return kOk;
        }
        if (field->parsed()) {
            return cmd_export_field(field_flags);
        }
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
