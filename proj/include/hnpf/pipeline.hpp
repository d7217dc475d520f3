#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnpf/filter.hpp"
#include "hnpf/front.hpp"
#include "hnpf/neural.hpp"
#include "hnpf/problems.hpp"
#include "hnpf/sampler.hpp"
#include "hnpf/verify.hpp"

namespace hnpf {

/// Everything that determines a run apart from the problem itself.
struct RunConfig {
    SamplePlan sample;
    TrainConfig train;
    /// Slabs per objective when `h` is empty.
    std::size_t filter_levels = 1000;
    /// Explicit slab width: one value for every objective, or one per objective.
    Vector h;
    double front_tolerance = kGeometricTolerance;
    /// Denominator option for Case VII.
    CaseOptions case_options;

    void validate() const;
};

/// Nested {"sample": {...}, "train": {...}, "filter": {...}, "verify": {...}, "cases": {...}}.
nlohmann::ordered_json to_json(const RunConfig &config);
/// Overrides the fields present in `overrides`; unknown keys throw InputError.
void apply_overrides(RunConfig &config, const nlohmann::json &overrides);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunArtifact {
    std::string case_name;
    RunConfig config;
    std::vector<std::string> completed;  ///< stages finished, in order
    SampleSplit samples;
    std::vector<LabeledSample> train_labeled;
    std::vector<LabeledSample> validation_labeled;
    MlpModel model;
    TrainReport train_report;
    std::size_t evaluations = 0;
    WeakParetoSet weak;
    FilterConfig filter_config;
    StrongParetoSet strong;
    DensityReport density;
    std::optional<FrontErrorReport> front;
    /// Wall-clock seconds per stage. Kept out of the written files so reruns
    /// produce identical bytes.
    std::vector<StageTiming> timings;
};

/// A stage failed; `partial()` holds the stages that completed.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string &what, RunArtifact partial);

    const std::string &stage() const noexcept { return stage_; }
    const RunArtifact &partial() const noexcept { return partial_; }

private:
    std::string stage_;
    RunArtifact partial_;
};

struct ResolvedCase {
    MooProblem problem;
    /// Case-specific settings layered over the caller's config (e.g. binomial sampling).
    nlohmann::json overrides = nlohmann::json::object();
};

/// "I".."VII", "fair-search-uniform", "fair-search-binomial". Throws InputError otherwise.
ResolvedCase resolve_case(const std::string &name, const CaseOptions &options = {});
std::vector<std::string> case_names();

/// sample → label → train → extract → filter → verify. When `out_dir` is set the
/// artifact is written there (see write_artifact). Throws StageError.
RunArtifact run_case(const MooProblem &problem, const RunConfig &config,
                     const std::optional<std::filesystem::path> &out_dir = std::nullopt);
RunArtifact run_case(const std::string &case_name, RunConfig config,
                     const std::optional<std::filesystem::path> &out_dir = std::nullopt);

/// config.json, train_samples.csv, weak_front.csv, strong_front.csv,
/// loss_curve.csv, model.txt, report.json. Front CSVs show objectives in the
/// problem's own sense.
void write_artifact(const std::filesystem::path &dir, const MooProblem &problem,
                    const RunArtifact &artifact);
nlohmann::ordered_json report_json(const RunArtifact &artifact);

struct SummaryRow {
    std::string case_name;
    bool ok = false;
    std::string error;  ///< "stage: message" on failure
    DensityReport density;
};

/// Runs each case in order with the same base config; a failing case is
/// recorded and the rest continue. With `out_root`, case c goes to out_root/c.
std::vector<SummaryRow> run_all(const std::vector<std::string> &cases, const RunConfig &config,
                                const std::optional<std::filesystem::path> &out_root = std::nullopt);

/// Columns Case, Density, Points, Evals.
void write_summary(std::ostream &out, const std::vector<SummaryRow> &rows);
void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows);

} // namespace hnpf
