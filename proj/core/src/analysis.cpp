#include "alignability/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "alignability/error.hpp"
#include "alignability/log.hpp"
#include "alignability/util.hpp"

namespace alignability {

std::vector<double> midranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double rank = 0.5 * static_cast<double>(i + j) + 1.0;  // average of 1-based ranks
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double da = a[i] - mean_a;
        double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 && var_b == 0.0)
        fail("analysis.constant-input", "both inputs are constant");
    if (var_a == 0.0 || var_b == 0.0)
        fail("analysis.constant-input", "one input is constant (zero rank variance)");
    return cov / std::sqrt(var_a * var_b);
}

double rho_of(const std::vector<double>& x, const std::vector<double>& y) {
    double rho = pearson(midranks(x), midranks(y));
    return std::clamp(rho, -1.0, 1.0);
}

}  // namespace

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        fail("analysis.length-mismatch", "input sequences have different lengths");
    if (x.size() < 3)
        fail("analysis.too-few-points",
             "spearman needs at least 3 points, got " + std::to_string(x.size()));
    for (double v : x)
        if (!std::isfinite(v)) fail("analysis.non-finite", "non-finite value in x");
    for (double v : y)
        if (!std::isfinite(v)) fail("analysis.non-finite", "non-finite value in y");

    double rho = rho_of(x, y);
    double p;
    if (rho == 1.0 || rho == -1.0) {
        p = 0.0;
    } else {
        double n = static_cast<double>(x.size());
        double t = rho * std::sqrt((n - 2.0) / (1.0 - rho * rho));
        boost::math::students_t_distribution<double> dist(n - 2.0);
        p = 2.0 * boost::math::cdf(dist, -std::abs(t));
    }
    return {rho, p};
}

double spearman_exact_p(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        fail("analysis.length-mismatch", "input sequences have different lengths");
    if (x.size() < 3 || x.size() > 8)
        fail("analysis.too-few-points", "exact permutation p-value supports 3 <= n <= 8");
    double observed = std::abs(rho_of(x, y));

    std::vector<double> ry = midranks(y);
    std::vector<double> rx = midranks(x);
    std::sort(ry.begin(), ry.end());
    long long hits = 0, total = 0;
    do {
        double rho = std::clamp(pearson(rx, ry), -1.0, 1.0);
        if (std::abs(rho) >= observed - 1e-12) ++hits;
        ++total;
    } while (std::next_permutation(ry.begin(), ry.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

std::optional<double> value_of(const PairRecord& record, const std::string& name) {
    auto it = record.downstream.find(name);
    if (it != record.downstream.end()) return it->second;
    if (record.has_metrics) {
        if (name == "jsd") return record.metrics.jsd;
        if (name == "one_to_one_fwd") return record.metrics.one_to_one_fwd;
        if (name == "one_to_one_rev") return record.metrics.one_to_one_rev;
        if (name == "alignability") return record.metrics.alignability;
    }
    auto eit = record.embedding.find(name);
    if (eit != record.embedding.end()) return eit->second;
    return std::nullopt;
}

std::vector<CorrelationRow> correlate_by_group(const std::vector<PairRecord>& records,
                                               const std::string& task,
                                               const std::vector<std::string>& metrics,
                                               bool include_family, bool exact_p) {
    // the pair set is shared by all metrics of a task: a pair missing any
    // value is dropped everywhere
    std::vector<const PairRecord*> usable;
    size_t dropped = 0;
    for (const auto& r : records) {
        if (!value_of(r, task)) continue;
        bool complete = true;
        for (const auto& m : metrics)
            if (!value_of(r, m)) {
                complete = false;
                break;
            }
        if (complete)
            usable.push_back(&r);
        else
            ++dropped;
    }
    if (dropped)
        log_info("task " + task + ": dropped " + std::to_string(dropped) +
                 " pair(s) missing at least one metric value");

    struct Group {
        const char* name;
        bool (*member)(const GroupLabels&);
    };
    std::vector<Group> groups = {
        {"all", [](const GroupLabels&) { return true; }},
        {"same_script", [](const GroupLabels& g) { return g.same_script; }},
        {"diff_script", [](const GroupLabels& g) { return !g.same_script; }},
    };
    if (include_family) {
        groups.push_back(
            {"same_family", [](const GroupLabels& g) { return !g.same_script && g.same_family; }});
        groups.push_back(
            {"diff_family", [](const GroupLabels& g) { return !g.same_script && !g.same_family; }});
    }

    std::vector<CorrelationRow> rows;
    for (const auto& metric : metrics) {
        for (const auto& group : groups) {
            std::vector<double> xs, ys;
            for (const PairRecord* r : usable) {
                if (!group.member(r->groups)) continue;
                xs.push_back(*value_of(*r, metric));
                ys.push_back(*value_of(*r, task));
            }
            if (xs.size() < 3) {
                log_warn("task " + task + ", metric " + metric + ", group " + group.name +
                         ": suppressed (n=" + std::to_string(xs.size()) + " < 3)");
                continue;
            }
            try {
                SpearmanResult res = spearman(xs, ys);
                if (exact_p && xs.size() <= 8) res.p = spearman_exact_p(xs, ys);
                rows.push_back({task, metric, group.name, res.rho, res.p, xs.size()});
            } catch (const Error& e) {
                log_warn("task " + task + ", metric " + metric + ", group " + group.name +
                         ": suppressed (" + e.what() + ")");
            }
        }
    }
    return rows;
}

CorrelationRow data_size_correlation(const std::vector<PairRecord>& records,
                                     const std::string& value_name,
                                     const MetadataTable& metadata) {
    std::vector<double> sizes, values;
    for (const auto& r : records) {
        if (r.src != "en") continue;
        std::optional<double> v = value_of(r, value_name);
        if (!v) continue;
        sizes.push_back(static_cast<double>(metadata.at(r.tgt).data_size));
        values.push_back(*v);
    }
    if (sizes.size() < 3)
        fail("analysis.too-few-points", "data-size correlation needs at least 3 English-source "
                                        "pairs with \"" + value_name + "\", got " +
                                            std::to_string(sizes.size()));
    SpearmanResult res = spearman(sizes, values);
    return {value_name, "data_size", "en_source", res.rho, res.p, sizes.size()};
}

std::pair<double, double> linear_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        fail("analysis.too-few-points", "linear fit needs at least 2 points");
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(points.size());
    mean_y /= static_cast<double>(points.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (sxx == 0.0) fail("analysis.constant-input", "linear fit with constant x");
    double slope = sxy / sxx;
    return {slope, mean_y - slope * mean_x};
}

std::string render_correlation_table(const std::vector<CorrelationRow>& rows) {
    std::ostringstream out;
    out << "task,metric,group,rho,p,n\n";
    for (const auto& r : rows)
        out << r.task << ',' << r.metric << ',' << r.group << ',' << format_double_exact(r.rho)
            << ',' << format_double_exact(r.p_value) << ',' << r.n << '\n';
    return out.str();
}

std::vector<CorrelationRow> parse_correlation_csv(const std::string& text) {
    std::vector<CorrelationRow> rows;
    bool header_seen = false;
    size_t lineno = 0;
    for (const auto& line : split(text, '\n')) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "task,metric,group,rho,p,n")
                fail("data.correlation-csv", "line " + std::to_string(lineno) + ": bad header");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 6)
            fail("data.correlation-csv",
                 "line " + std::to_string(lineno) + ": expected 6 columns");
        bool ok1 = false, ok2 = false;
        double rho = parse_double(cols[3], ok1);
        double p = parse_double(cols[4], ok2);
        std::optional<long long> n = parse_int(cols[5]);
        if (!ok1 || !ok2 || !n || *n < 0)
            fail("data.correlation-csv", "line " + std::to_string(lineno) + ": bad number");
        rows.push_back({cols[0], cols[1], cols[2], rho, p, static_cast<size_t>(*n)});
    }
    if (!header_seen) fail("data.correlation-csv", "missing header line");
    return rows;
}

std::string format_rho(double rho) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", rho);
    std::string s(buf);
    // compact form used in correlation tables: -.33, .87
    size_t zero = s.find("0.");
    if (zero != std::string::npos && (zero == 0 || s[zero - 1] == '-')) s.erase(zero, 1);
    return s;
}

std::string render_correlation_text(const std::vector<CorrelationRow>& rows) {
    size_t task_w = 4, metric_w = 6, group_w = 5;
    for (const auto& r : rows) {
        task_w = std::max(task_w, r.task.size());
        metric_w = std::max(metric_w, r.metric.size());
        group_w = std::max(group_w, r.group.size());
    }
    auto pad = [](const std::string& s, size_t w) {
        return s + std::string(w - s.size() + 2, ' ');
    };
    std::ostringstream out;
    out << pad("task", task_w) << pad("metric", metric_w) << pad("group", group_w)
        << pad("rho", 5) << pad("p", 9) << "n\n";
    for (const auto& r : rows) {
        char pbuf[32];
        std::snprintf(pbuf, sizeof(pbuf), "%.3g", r.p_value);
        out << pad(r.task, task_w) << pad(r.metric, metric_w) << pad(r.group, group_w)
            << pad(format_rho(r.rho), 5) << pad(pbuf, 9) << r.n << '\n';
    }
    return out.str();
}

std::vector<DownstreamRecord> load_downstream_csv(const std::string& path) {
    std::vector<DownstreamRecord> out;
    std::vector<std::string> lines = read_lines(path);
    bool header_seen = false;
    for (size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "task,src,tgt,score")
                fail("data.downstream-csv",
                     path + " line " + std::to_string(i + 1) + ": expected header task,src,tgt,score");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 4)
            fail("data.downstream-csv",
                 path + " line " + std::to_string(i + 1) + ": expected 4 columns");
        bool ok = false;
        double score = parse_double(cols[3], ok);
        if (!ok || !std::isfinite(score))
            fail("data.downstream-csv",
                 path + " line " + std::to_string(i + 1) + ": bad score \"" + cols[3] + "\"");
        out.push_back({cols[0], cols[1], cols[2], score});
    }
    if (!header_seen) fail("data.downstream-csv", path + ": missing header line");
    return out;
}

std::vector<PairRecord> build_pair_records(
    const std::vector<PairMetrics>& metrics, const std::vector<DownstreamRecord>& downstream,
    const MetadataTable& metadata,
    const std::map<std::pair<std::string, std::string>, std::map<std::string, double>>&
        embedding) {
    std::map<std::pair<std::string, std::string>, PairRecord> records;

    auto record_for = [&](const std::string& src, const std::string& tgt) -> PairRecord& {
        auto key = std::make_pair(src, tgt);
        auto it = records.find(key);
        if (it == records.end()) {
            PairRecord r;
            r.src = src;
            r.tgt = tgt;
            r.groups = pair_grouping(src, tgt, metadata);
            it = records.emplace(key, std::move(r)).first;
        }
        return it->second;
    };

    for (const auto& m : metrics) {
        PairRecord& fwd = record_for(m.src, m.tgt);
        fwd.metrics = m;
        fwd.has_metrics = true;
        PairRecord& rev = record_for(m.tgt, m.src);
        if (!rev.has_metrics) {
            // symmetric metrics carry over; directional proportions swap
            rev.metrics = {m.tgt, m.src, m.jsd, m.one_to_one_rev, m.one_to_one_fwd,
                           m.alignability};
            rev.has_metrics = true;
        }
    }
    for (const auto& [pair, measures] : embedding) {
        PairRecord& r = record_for(pair.first, pair.second);
        for (const auto& [name, value] : measures) r.embedding[name] = value;
    }
    for (const auto& d : downstream) {
        auto key = std::make_pair(d.src, d.tgt);
        auto it = records.find(key);
        if (it == records.end() || !it->second.has_metrics) {
            log_warn("downstream pair " + d.src + "-" + d.tgt + " has no metrics; dropped");
            continue;
        }
        it->second.downstream[d.task] = d.score;
    }

    std::vector<PairRecord> out;
    out.reserve(records.size());
    for (auto& [key, r] : records) {
        (void)key;
        if (r.has_metrics) out.push_back(std::move(r));
    }
    return out;
}

}  // namespace alignability
