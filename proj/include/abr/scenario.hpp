#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abr/units.hpp"

namespace abr {

enum class TrafficMode : std::uint8_t { persistent, scheduled };

// Per-source knobs. Unset optionals are filled by validate_and_resolve:
// pcr defaults to the access-link cell rate, icr to a tenth of pcr, the
// floor to 10 cells/s and the initial averaging interval to the protocol AI.
struct SourceCfg {
    std::string id;
    std::optional<double> icr_cps;
    std::optional<double> pcr_cps;
    std::optional<double> tcr_floor_cps;
    std::optional<std::int64_t> initial_ai_ns;
    std::vector<std::array<std::int64_t, 2>> active_windows;  // [start, end) ns
    TrafficMode traffic = TrafficMode::persistent;
};

struct SwitchCfg {
    std::string id;
    std::optional<std::int64_t> ai_ns;
    std::optional<double> target_utilization;
    std::optional<double> tub_half_width;
    std::optional<std::int64_t> phase_offset_ns;
};

struct DestinationCfg {
    std::string id;
};

struct LinkCfg {
    std::string id;
    std::string from;
    std::string to;
    double bandwidth_bps = 155e6;
    std::optional<double> length_km;           // default 1 km when neither is given
    std::optional<std::int64_t> prop_delay_ns; // wins over length_km when set
};

struct VcRouteCfg {
    std::int32_t id = -1;
    std::vector<std::string> route;  // [source, switches..., destination]
};

struct PortOverrideCfg {
    std::string switch_id;
    std::string link_id;  // a port is named by the link it feeds
    std::optional<std::int64_t> ai_ns;
    std::optional<double> target_utilization;
    std::optional<double> tub_half_width;
    std::optional<std::int64_t> phase_offset_ns;
};

struct ProtocolParams {
    double target_utilization = 0.9;
    double tub_half_width = 0.1;
    std::int64_t ai_ns = 300000;
    int cell_size_bits = 424;  // 53-byte cells
    double ns_per_km = 5000.0;
};

struct MetricsParams {
    std::int64_t queue_sample_period_ns = 50000;
    std::optional<std::int64_t> util_window_ns;  // defaults to the protocol AI
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::int64_t duration_ns = 600'000'000;
    std::optional<std::uint64_t> seed;  // optional switch timer-phase jitter; off by default
    ProtocolParams protocol;
    MetricsParams metrics;
    std::vector<SourceCfg> sources;
    std::vector<SwitchCfg> switches;
    std::vector<DestinationCfg> destinations;
    std::vector<LinkCfg> links;
    std::vector<VcRouteCfg> vcs;
    std::vector<PortOverrideCfg> port_overrides;
};

inline std::int64_t link_prop_delay_ns(const LinkCfg& link, const ProtocolParams& protocol) {
    if (link.prop_delay_ns)
        return *link.prop_delay_ns;
    double km = link.length_km.value_or(1.0);
    return std::llround(km * protocol.ns_per_km);
}

// Validates the whole scenario and fills every defaultable field in place.
// Returns the list of violations (empty means the config is usable).
// Idempotent, so loading and construction may both call it.
inline std::vector<std::string> validate_and_resolve(ScenarioConfig& cfg) {
    std::vector<std::string> errs;
    auto err = [&errs](const std::string& m) { errs.push_back(m); };

    if (cfg.duration_ns <= 0)
        err("duration_ns must be > 0");
    const ProtocolParams& pp = cfg.protocol;
    if (!(pp.target_utilization > 0.0) || pp.target_utilization > 1.0)
        err("protocol.target_utilization must be in (0, 1]");
    if (pp.tub_half_width < 0.0 || pp.tub_half_width >= 1.0)
        err("protocol.tub_half_width must be in [0, 1)");
    if (pp.ai_ns <= 0)
        err("protocol.ai_ns must be > 0");
    if (pp.cell_size_bits <= 0)
        err("protocol.cell_size_bits must be > 0");
    if (!(pp.ns_per_km > 0.0))
        err("protocol.ns_per_km must be > 0");
    if (cfg.metrics.queue_sample_period_ns <= 0)
        err("metrics.queue_sample_period_ns must be > 0");
    if (!cfg.metrics.util_window_ns)
        cfg.metrics.util_window_ns = pp.ai_ns;
    if (*cfg.metrics.util_window_ns <= 0)
        err("metrics.util_window_ns must be > 0");

    // Node namespace is shared so links can name any endpoint.
    enum class NodeType { source, switch_, destination };
    std::map<std::string, NodeType> nodes;
    auto add_node = [&](const std::string& id, NodeType t, const char* what) {
        if (id.empty())
            err(std::string(what) + ": empty id");
        else if (!nodes.emplace(id, t).second)
            err(std::string(what) + " '" + id + "': duplicate node id");
    };
    for (const auto& s : cfg.sources)
        add_node(s.id, NodeType::source, "source");
    for (const auto& s : cfg.switches)
        add_node(s.id, NodeType::switch_, "switch");
    for (const auto& d : cfg.destinations)
        add_node(d.id, NodeType::destination, "destination");

    std::map<std::string, const LinkCfg*> link_by_id;
    std::map<std::pair<std::string, std::string>, const LinkCfg*> link_by_pair;
    for (const auto& l : cfg.links) {
        if (l.id.empty()) {
            err("link: empty id");
            continue;
        }
        if (!link_by_id.emplace(l.id, &l).second)
            err("link '" + l.id + "': duplicate link id");
        if (!nodes.count(l.from))
            err("link '" + l.id + "': unknown endpoint '" + l.from + "'");
        if (!nodes.count(l.to))
            err("link '" + l.id + "': unknown endpoint '" + l.to + "'");
        if (l.from == l.to)
            err("link '" + l.id + "': from == to");
        if (!(l.bandwidth_bps > 0.0))
            err("link '" + l.id + "': bandwidth_bps must be > 0");
        if (l.length_km && !(*l.length_km > 0.0))
            err("link '" + l.id + "': length_km must be > 0");
        if (l.prop_delay_ns && *l.prop_delay_ns <= 0)
            err("link '" + l.id + "': prop_delay_ns must be > 0");
        if (!link_by_pair.emplace(std::make_pair(l.from, l.to), &l).second)
            err("link '" + l.id + "': duplicate link for pair " + l.from + " -> " + l.to);
    }

    // Routes: source, zero or more switches, destination; forward and
    // reverse links must exist between every consecutive pair.
    std::set<std::int32_t> vc_ids;
    std::map<std::string, const VcRouteCfg*> vc_by_source;
    for (const auto& vc : cfg.vcs) {
        std::string ctx = "vc " + std::to_string(vc.id);
        if (vc.id < 0)
            err(ctx + ": id must be >= 0");
        if (!vc_ids.insert(vc.id).second)
            err(ctx + ": duplicate vc id");
        if (vc.route.size() < 2) {
            err(ctx + ": route needs at least a source and a destination");
            continue;
        }
        bool route_ok = true;
        std::set<std::string> seen_nodes;
        for (std::size_t i = 0; i < vc.route.size(); ++i) {
            const std::string& n = vc.route[i];
            auto it = nodes.find(n);
            if (it == nodes.end()) {
                err(ctx + ": route references unknown node '" + n + "'");
                route_ok = false;
                continue;
            }
            if (!seen_nodes.insert(n).second) {
                err(ctx + ": route visits '" + n + "' twice");
                route_ok = false;
            }
            NodeType want = i == 0               ? NodeType::source
                            : i + 1 == vc.route.size() ? NodeType::destination
                                                       : NodeType::switch_;
            if (it->second != want) {
                err(ctx + ": node '" + n + "' has the wrong role at position " +
                    std::to_string(i));
                route_ok = false;
            }
        }
        if (route_ok) {
            for (std::size_t i = 0; i + 1 < vc.route.size(); ++i) {
                if (!link_by_pair.count({vc.route[i], vc.route[i + 1]}))
                    err(ctx + ": missing forward link " + vc.route[i] + " -> " + vc.route[i + 1]);
                if (!link_by_pair.count({vc.route[i + 1], vc.route[i]}))
                    err(ctx + ": missing reverse link " + vc.route[i + 1] + " -> " + vc.route[i]);
            }
            if (!vc_by_source.emplace(vc.route.front(), &vc).second)
                err(ctx + ": source '" + vc.route.front() + "' already carries another vc");
        }
    }

    for (auto& src : cfg.sources) {
        std::string ctx = "source '" + src.id + "'";
        if (!vc_by_source.count(src.id))
            err(ctx + ": no vc route starts here");
        // The access link pins the peak cell rate.
        const LinkCfg* access = nullptr;
        int outgoing = 0;
        for (const auto& l : cfg.links)
            if (l.from == src.id) {
                ++outgoing;
                access = &l;
            }
        if (outgoing != 1) {
            err(ctx + ": needs exactly one outgoing link, has " + std::to_string(outgoing));
            continue;
        }
        if (!src.pcr_cps)
            src.pcr_cps = access->bandwidth_bps / pp.cell_size_bits;
        if (!src.icr_cps)
            src.icr_cps = 0.1 * *src.pcr_cps;
        if (!src.tcr_floor_cps)
            src.tcr_floor_cps = 10.0;
        if (!src.initial_ai_ns)
            src.initial_ai_ns = pp.ai_ns;
        if (!(*src.tcr_floor_cps > 0.0) || *src.tcr_floor_cps > *src.icr_cps ||
            *src.icr_cps > *src.pcr_cps)
            err(ctx + ": need 0 < tcr_floor_cps <= icr_cps <= pcr_cps");
        if (*src.initial_ai_ns <= 0)
            err(ctx + ": initial_ai_ns must be > 0");
        if (src.traffic == TrafficMode::persistent && !src.active_windows.empty())
            err(ctx + ": persistent traffic takes no active_windows");
        if (src.traffic == TrafficMode::scheduled) {
            if (src.active_windows.empty())
                err(ctx + ": scheduled traffic needs active_windows");
            std::int64_t prev_end = -1;
            for (const auto& w : src.active_windows) {
                if (w[0] < 0 || w[1] <= w[0])
                    err(ctx + ": window [" + std::to_string(w[0]) + ", " + std::to_string(w[1]) +
                        ") is not a valid interval");
                if (w[0] < prev_end)
                    err(ctx + ": active_windows must be sorted and non-overlapping");
                prev_end = w[1];
            }
        }
    }

    for (auto& sw : cfg.switches) {
        std::string ctx = "switch '" + sw.id + "'";
        if (sw.ai_ns && *sw.ai_ns <= 0)
            err(ctx + ": ai_ns must be > 0");
        if (sw.target_utilization &&
            (!(*sw.target_utilization > 0.0) || *sw.target_utilization > 1.0))
            err(ctx + ": target_utilization must be in (0, 1]");
        if (sw.tub_half_width && (*sw.tub_half_width < 0.0 || *sw.tub_half_width >= 1.0))
            err(ctx + ": tub_half_width must be in [0, 1)");
        if (sw.phase_offset_ns && *sw.phase_offset_ns < 0)
            err(ctx + ": phase_offset_ns must be >= 0");
    }

    for (const auto& po : cfg.port_overrides) {
        std::string ctx = "port_override (" + po.switch_id + ", " + po.link_id + ")";
        auto node = nodes.find(po.switch_id);
        if (node == nodes.end() || node->second != NodeType::switch_)
            err(ctx + ": unknown switch");
        auto link = link_by_id.find(po.link_id);
        if (link == link_by_id.end())
            err(ctx + ": unknown link");
        else if (link->second->from != po.switch_id)
            err(ctx + ": link does not leave this switch");
        if (po.ai_ns && *po.ai_ns <= 0)
            err(ctx + ": ai_ns must be > 0");
        if (po.target_utilization &&
            (!(*po.target_utilization > 0.0) || *po.target_utilization > 1.0))
            err(ctx + ": target_utilization must be in (0, 1]");
        if (po.tub_half_width && (*po.tub_half_width < 0.0 || *po.tub_half_width >= 1.0))
            err(ctx + ": tub_half_width must be in [0, 1)");
        if (po.phase_offset_ns && *po.phase_offset_ns < 0)
            err(ctx + ": phase_offset_ns must be >= 0");
    }

    return errs;
}

inline void require_valid(ScenarioConfig& cfg) {
    auto errs = validate_and_resolve(cfg);
    if (!errs.empty()) {
        std::string msg = "invalid scenario '" + cfg.name + "':";
        for (const auto& e : errs)
            msg += "\n  - " + e;
        throw ConfigError(msg);
    }
}

struct BuildParams {
    std::int64_t duration_ns = 600'000'000;  // long enough for convergence and transitions
    double link_bandwidth_bps = 155e6;
    double link_length_km = 1.0;
    ProtocolParams protocol;
};

namespace detail {
inline void add_duplex_link(ScenarioConfig& cfg, const std::string& a, const std::string& b,
                            const BuildParams& p) {
    cfg.links.push_back({a + "-" + b, a, b, p.link_bandwidth_bps, p.link_length_km, std::nullopt});
    cfg.links.push_back({b + "-" + a, b, a, p.link_bandwidth_bps, p.link_length_km, std::nullopt});
}
}  // namespace detail

// Two sources through two switches; both VCs share the inter-switch link.
// The second source joins at one third of the run and leaves at two thirds,
// exercising ramp-up, convergence to the fair share, and ramp-back.
inline ScenarioConfig build_transient_scenario(const BuildParams& p = {}) {
    if (p.duration_ns <= 0)
        throw ConfigError("transient scenario: duration must be > 0");
    ScenarioConfig cfg;
    cfg.name = "transient";
    cfg.duration_ns = p.duration_ns;
    cfg.protocol = p.protocol;
    cfg.sources.push_back({.id = "s1"});
    cfg.sources.push_back({.id = "s2",
                           .active_windows = {{p.duration_ns / 3, 2 * p.duration_ns / 3}},
                           .traffic = TrafficMode::scheduled});
    cfg.switches.push_back({.id = "sw1"});
    cfg.switches.push_back({.id = "sw2"});
    cfg.destinations.push_back({.id = "d1"});
    cfg.destinations.push_back({.id = "d2"});
    detail::add_duplex_link(cfg, "s1", "sw1", p);
    detail::add_duplex_link(cfg, "s2", "sw1", p);
    detail::add_duplex_link(cfg, "sw1", "sw2", p);
    detail::add_duplex_link(cfg, "sw2", "d1", p);
    detail::add_duplex_link(cfg, "sw2", "d2", p);
    cfg.vcs.push_back({1, {"s1", "sw1", "sw2", "d1"}});
    cfg.vcs.push_back({2, {"s2", "sw1", "sw2", "d2"}});
    require_valid(cfg);
    return cfg;
}

// n switches in series; VC i enters at switch i and every VC leaves through
// the common exit link after the last switch, which is therefore the shared
// bottleneck. All sources are persistent.
inline ScenarioConfig build_parking_lot(int n, const BuildParams& p = {}) {
    if (n < 2)
        throw ConfigError("parking lot: need n >= 2 switches");
    if (p.duration_ns <= 0)
        throw ConfigError("parking lot: duration must be > 0");
    ScenarioConfig cfg;
    cfg.name = "parkinglot-" + std::to_string(n);
    cfg.duration_ns = p.duration_ns;
    cfg.protocol = p.protocol;
    auto sw = [](int i) { return "sw" + std::to_string(i); };
    for (int i = 1; i <= n; ++i) {
        std::string src = "s" + std::to_string(i);
        cfg.sources.push_back({.id = src});
        cfg.switches.push_back({.id = sw(i)});
        detail::add_duplex_link(cfg, src, sw(i), p);
        if (i > 1)
            detail::add_duplex_link(cfg, sw(i - 1), sw(i), p);
    }
    cfg.destinations.push_back({.id = "d"});
    detail::add_duplex_link(cfg, sw(n), "d", p);
    for (int i = 1; i <= n; ++i) {
        VcRouteCfg vc;
        vc.id = i;
        vc.route.push_back("s" + std::to_string(i));
        for (int j = i; j <= n; ++j)
            vc.route.push_back(sw(j));
        vc.route.push_back("d");
        cfg.vcs.push_back(vc);
    }
    require_valid(cfg);
    return cfg;
}

}  // namespace abr
