#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abr/cell.hpp"
#include "abr/units.hpp"

namespace abr {

enum class MetricKind : std::uint8_t { tcr, queue_len, utilization, laf_stamp };

// A time series for one entity. Sample times are strictly increasing; a
// non-monotone append is an engine bug.
struct MetricSeries {
    MetricKind kind = MetricKind::tcr;
    std::string key;
    std::vector<std::pair<SimTime, double>> samples;

    void record(SimTime t, double value) {
        if (!samples.empty() && t <= samples.back().first)
            throw InvariantViolation("metric series " + key + ": non-monotone sample at t=" +
                                     std::to_string(t.count_ns()) + "ns");
        samples.emplace_back(t, value);
    }
};

// Time-weighted mean of a last-value-holds step series over [from, to).
inline double step_mean(const MetricSeries& series, SimTime from, SimTime to) {
    if (series.samples.empty())
        throw InvariantViolation("step_mean: empty series " + series.key);
    if (to <= from)
        throw InvariantViolation("step_mean: empty window");
    const auto& s = series.samples;
    double weighted = 0.0;
    std::int64_t a = from.count_ns(), b = to.count_ns();
    for (std::size_t i = 0; i < s.size(); ++i) {
        // value i holds on [t_i, t_{i+1}); the first value extends backwards
        std::int64_t seg_start = i == 0 ? a : std::max(a, s[i].first.count_ns());
        std::int64_t seg_end = i + 1 < s.size() ? std::min(b, s[i + 1].first.count_ns()) : b;
        if (seg_end > seg_start)
            weighted += s[i].second * static_cast<double>(seg_end - seg_start);
    }
    return weighted / static_cast<double>(b - a);
}

// Step-series value at time t (last sample at or before t; the first sample's
// value extends backwards).
inline double step_value_at(const MetricSeries& series, SimTime t) {
    if (series.samples.empty())
        throw InvariantViolation("step_value_at: empty series " + series.key);
    double v = series.samples.front().second;
    for (const auto& [st, sv] : series.samples) {
        if (st > t)
            break;
        v = sv;
    }
    return v;
}

struct UtilSample {
    std::int64_t window_end_ns = 0;
    double utilization = 0.0;
    bool saturated = false;  // above 1.0 by at most one cell's worth of quantization
};

// Per-window link utilization from cell departure-completion times. Window k
// covers ((k)W, (k+1)W]; only windows ending at or before `horizon_ns` are
// reported. Values may exceed 1.0 by one cell of quantization.
inline std::vector<UtilSample> utilization_per_window(const std::vector<std::int64_t>& departs_ns,
                                                      std::int64_t tx_ns, std::int64_t window_ns,
                                                      std::int64_t horizon_ns) {
    if (window_ns <= 0)
        throw ConfigError("utilization window must be > 0");
    std::int64_t windows = horizon_ns / window_ns;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(windows), 0);
    for (std::int64_t d : departs_ns) {
        if (d <= 0 || d > windows * window_ns)
            continue;
        ++counts[static_cast<std::size_t>((d - 1) / window_ns)];
    }
    std::vector<UtilSample> out;
    out.reserve(counts.size());
    for (std::int64_t k = 0; k < windows; ++k) {
        double u = static_cast<double>(counts[static_cast<std::size_t>(k)]) *
                   static_cast<double>(tx_ns) / static_cast<double>(window_ns);
        out.push_back({(k + 1) * window_ns, u, u > 1.0});
    }
    return out;
}

// Incremental form of utilization_per_window used during a run: departures
// are bucketed as they are scheduled.
class UtilWindowCounter {
  public:
    UtilWindowCounter() = default;
    UtilWindowCounter(std::int64_t window_ns, std::int64_t tx_ns)
        : window_ns_(window_ns), tx_ns_(tx_ns) {
        if (window_ns <= 0)
            throw ConfigError("utilization window must be > 0");
    }

    void add_departure(std::int64_t depart_ns) {
        if (depart_ns <= 0)
            return;
        auto idx = static_cast<std::size_t>((depart_ns - 1) / window_ns_);
        if (idx >= counts_.size())
            counts_.resize(idx + 1, 0);
        ++counts_[idx];
    }

    std::vector<UtilSample> samples(std::int64_t horizon_ns) const {
        std::int64_t windows = horizon_ns / window_ns_;
        std::vector<UtilSample> out;
        out.reserve(static_cast<std::size_t>(windows));
        for (std::int64_t k = 0; k < windows; ++k) {
            std::int64_t c =
                k < static_cast<std::int64_t>(counts_.size()) ? counts_[static_cast<std::size_t>(k)] : 0;
            double u = static_cast<double>(c) * static_cast<double>(tx_ns_) /
                       static_cast<double>(window_ns_);
            out.push_back({(k + 1) * window_ns_, u, u > 1.0});
        }
        return out;
    }

  private:
    std::int64_t window_ns_ = 1;
    std::int64_t tx_ns_ = 0;
    std::vector<std::int64_t> counts_;
};

// Jain's index: (sum x)^2 / (n * sum x^2), in (0, 1]. Equal rates score 1.
inline double jain_fairness_index(const std::vector<double>& rates) {
    if (rates.empty())
        throw std::domain_error("jain_fairness_index: no rates");
    double sum = 0.0, sum_sq = 0.0;
    for (double r : rates) {
        if (!std::isfinite(r) || r < 0.0)
            throw std::domain_error("jain_fairness_index: rates must be finite and >= 0");
        sum += r;
        sum_sq += r * r;
    }
    if (sum_sq == 0.0)
        throw std::domain_error("jain_fairness_index: all rates are zero");
    return sum * sum / (static_cast<double>(rates.size()) * sum_sq);
}

// Six significant digits, the serialization precision of every CSV number.
inline std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct VcSummary {
    VcId vc;
    double mean_tcr_cps = 0.0;
    double delivered_cps = 0.0;
    std::optional<std::int64_t> convergence_ns;
};

struct LinkSummary {
    std::string link;
    double mean_utilization = 0.0;
    std::int64_t max_qlen_cells = 0;
};

// Steady-state statistics over a declared window (warmup before
// window_start_ns is excluded and documented in the output).
struct RunSummary {
    std::int64_t window_start_ns = 0;
    std::int64_t window_end_ns = 0;
    std::vector<VcSummary> vcs;
    std::vector<LinkSummary> links;
    double jain_index = 0.0;
    std::int64_t saturated_util_windows = 0;
};

namespace detail {
inline std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error(path + ": cannot open for writing");
    return out;
}
inline void finish_csv(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out)
        throw std::runtime_error(path + ": write failed");
}
}  // namespace detail

struct TcrTraceRow {
    std::int64_t time_ns;
    std::int32_t vc;
    double tcr_cps;
};

inline void emit_tcr_csv(const std::string& path, const std::vector<TcrTraceRow>& rows) {
    auto out = detail::open_csv(path);
    out << "time_ns,vc,tcr_cps\n";
    for (const auto& r : rows)
        out << r.time_ns << ',' << r.vc << ',' << format_g6(r.tcr_cps) << '\n';
    detail::finish_csv(out, path);
}

struct QueueTraceRow {
    std::int64_t time_ns;
    std::string switch_id;
    std::string port_id;
    std::int64_t qlen_cells;
};

inline void emit_queue_csv(const std::string& path, const std::vector<QueueTraceRow>& rows) {
    auto out = detail::open_csv(path);
    out << "time_ns,switch,port,qlen_cells\n";
    for (const auto& r : rows)
        out << r.time_ns << ',' << r.switch_id << ',' << r.port_id << ',' << r.qlen_cells << '\n';
    detail::finish_csv(out, path);
}

struct UtilTraceRow {
    std::int64_t window_end_ns;
    std::string link;
    double utilization;
};

inline void emit_util_csv(const std::string& path, const std::vector<UtilTraceRow>& rows) {
    auto out = detail::open_csv(path);
    out << "window_end_ns,link,utilization\n";
    for (const auto& r : rows)
        out << r.window_end_ns << ',' << r.link << ',' << format_g6(r.utilization) << '\n';
    detail::finish_csv(out, path);
}

struct LafTraceRow {
    std::int64_t time_ns;
    std::string switch_id;
    std::string port_id;
    std::int32_t vc;
    double laf;
};

inline void emit_laf_csv(const std::string& path, const std::vector<LafTraceRow>& rows) {
    auto out = detail::open_csv(path);
    out << "time_ns,switch,port,vc,laf\n";
    for (const auto& r : rows)
        out << r.time_ns << ',' << r.switch_id << ',' << r.port_id << ',' << r.vc << ','
            << format_g6(r.laf) << '\n';
    detail::finish_csv(out, path);
}

inline void emit_summary_csv(const std::string& path, const RunSummary& summary) {
    auto out = detail::open_csv(path);
    out << "entity,id,window_start_ns,window_end_ns,mean_tcr_cps,delivered_cps,"
           "mean_utilization,max_qlen_cells,convergence_ns,jain_index\n";
    for (const auto& vc : summary.vcs) {
        out << "vc," << vc.vc.value() << ',' << summary.window_start_ns << ','
            << summary.window_end_ns << ',' << format_g6(vc.mean_tcr_cps) << ','
            << format_g6(vc.delivered_cps) << ",,,"
            << (vc.convergence_ns ? std::to_string(*vc.convergence_ns) : std::string()) << ",\n";
    }
    for (const auto& link : summary.links) {
        out << "link," << link.link << ',' << summary.window_start_ns << ','
            << summary.window_end_ns << ",,," << format_g6(link.mean_utilization) << ','
            << link.max_qlen_cells << ",,\n";
    }
    out << "run,all," << summary.window_start_ns << ',' << summary.window_end_ns << ",,,,,,"
        << format_g6(summary.jain_index) << '\n';
    detail::finish_csv(out, path);
}

}  // namespace abr
