#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alignability/corpus.hpp"
#include "alignability/metrics.hpp"

namespace alignability {

struct PairRecord {
    std::string src;
    std::string tgt;
    PairMetrics metrics;
    bool has_metrics = false;
    GroupLabels groups;
    std::map<std::string, double> downstream;  // task name -> transfer score
    std::map<std::string, double> embedding;   // measure name -> value
};

struct CorrelationRow {
    std::string task;
    std::string metric;
    std::string group;  // all | same_script | diff_script | same_family | diff_family
    double rho = 0.0;
    double p_value = 0.0;
    size_t n = 0;
};

struct SpearmanResult {
    double rho;
    double p;
};

struct DownstreamRecord {
    std::string task;
    std::string src;
    std::string tgt;
    double score;
};

// Midrank tie handling; rho is the Pearson correlation of the rank vectors,
// p from the two-sided t approximation (p = 0 at rho = +-1). Throws on
// n < 3 and on constant input.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

// Exact two-sided permutation p-value, for n <= 8.
double spearman_exact_p(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> midranks(const std::vector<double>& v);

// Looks a value up by name: downstream task first, then the standard
// metrics (jsd, one_to_one_fwd, one_to_one_rev, alignability), then
// embedding measures.
std::optional<double> value_of(const PairRecord& record, const std::string& name);

// Correlation rows for groups {all, same_script, diff_script} and, when
// include_family is set, the different-script set split by family. Pairs
// missing the task or any named metric are dropped from all metrics; groups
// with n < 3 (or constant input) are suppressed with a warning.
std::vector<CorrelationRow> correlate_by_group(const std::vector<PairRecord>& records,
                                               const std::string& task,
                                               const std::vector<std::string>& metrics,
                                               bool include_family = false,
                                               bool exact_p = false);

// Spearman of (target-language data_size, value) over pairs with English
// as the source language. Throws with fewer than 3 qualifying pairs.
CorrelationRow data_size_correlation(const std::vector<PairRecord>& records,
                                     const std::string& value_name,
                                     const MetadataTable& metadata);

// Ordinary least squares. Throws on fewer than 2 points or constant x.
std::pair<double, double> linear_fit(const std::vector<std::pair<double, double>>& points);

// CSV with header task,metric,group,rho,p,n; full-precision floats.
std::string render_correlation_table(const std::vector<CorrelationRow>& rows);
std::vector<CorrelationRow> parse_correlation_csv(const std::string& text);

// Human-readable table; rho cells use the compact 2-decimal form (-.33).
std::string render_correlation_text(const std::vector<CorrelationRow>& rows);
std::string format_rho(double rho);

std::vector<DownstreamRecord> load_downstream_csv(const std::string& path);

// Joins metric rows, downstream scores and embedding measures into ordered
// pair records with group labels. Metrics attach to both pair orders
// (directional fields swapped); pairs without metrics are dropped.
std::vector<PairRecord> build_pair_records(
    const std::vector<PairMetrics>& metrics, const std::vector<DownstreamRecord>& downstream,
    const MetadataTable& metadata,
    const std::map<std::pair<std::string, std::string>, std::map<std::string, double>>&
        embedding = {});

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    bool same_script = false;
};

// Standalone deterministic SVG scatter plot: distinct markers per script
// group, optional least-squares line spanning the x range. A non-empty
// metadata string is embedded as an XML comment.
std::string render_scatter_svg(const std::vector<ScatterPoint>& points,
                               std::optional<std::pair<double, double>> fit,
                               const std::string& x_label, const std::string& y_label,
                               const std::string& metadata = "");

}  // namespace alignability
