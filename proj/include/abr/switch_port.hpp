#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "abr/cell.hpp"
#include "abr/units.hpp"

namespace abr {

// Per-output-port switch algorithm: measure the load level z over an
// averaging interval, count active VCs, and stamp forward control cells with
// the load adjustment factor at the instant they enter the port queue.
//
// Every per-cell handler is O(1) in the number of VCs: the seen-set is an
// epoch-stamped table, so rollover does not touch it either. table_ops()
// counts the per-event table touches and is asserted constant in tests.
class SwitchPortState {
  public:
    SwitchPortState(double link_bw_bps, int cell_size_bits, double target_utilization,
                    double tub_half_width, SimTime averaging_interval)
        : target_utilization_(target_utilization), delta_(tub_half_width),
          averaging_interval_(averaging_interval) {
        if (!(target_utilization > 0.0) || target_utilization > 1.0)
            throw ConfigError("switch port: target_utilization must be in (0, 1]");
        if (tub_half_width < 0.0 || tub_half_width >= 1.0)
            throw ConfigError("switch port: tub_half_width must be in [0, 1)");
        if (averaging_interval.count_ns() <= 0)
            throw ConfigError("switch port: averaging interval must be > 0");
        if (!(link_bw_bps > 0.0))
            throw ConfigError("switch port: link bandwidth must be > 0");
        if (cell_size_bits <= 0)
            throw ConfigError("switch port: cell size must be > 0");
        target_cell_rate_ = RateCps(target_utilization * link_bw_bps / cell_size_bits);
        target_cell_count_ = target_cell_rate_.cps() * averaging_interval.seconds();
        upper_load_bound_ = 1.0 + tub_half_width;
        lower_load_bound_ = 1.0 - tub_half_width;
        fair_share_ = target_cell_rate_;
    }

    // A data cell was routed to this port. Counting only; the caller also
    // enqueues the cell.
    void on_data_cell(const DataCell& cell) {
        ++received_cell_count_;
        mark_vc_seen(cell.vc);
    }

    // Interval rollover: recompute the load level and fair share, then start
    // a fresh measurement.
    void on_averaging_timer() {
        num_active_vcs_ = std::max<std::int64_t>(seen_count_, 1);
        fair_share_ = RateCps(target_cell_rate_.cps() / static_cast<double>(num_active_vcs_));
        load_level_ = static_cast<double>(received_cell_count_) / target_cell_count_;
        ++epoch_;  // clears every VC-seen bit at once
        seen_count_ = 0;
        received_cell_count_ = 0;
    }

    // Feedback decision for a cell offering `ocr`. Inside the band the
    // fairness algorithm nudges underloading sources up (divide by 1+delta)
    // and overloading ones down (divide by 1-delta); outside it the
    // efficiency algorithm returns z itself.
    double load_adjustment_decision(RateCps ocr) const {
        if (load_level_ >= lower_load_bound_ && load_level_ <= upper_load_bound_) {
            if (ocr.cps() > fair_share_.cps())
                return load_level_ / lower_load_bound_;
            return load_level_ / upper_load_bound_;
        }
        return load_level_;
    }

    // Stamp a forward control cell at enqueue time. laf and ai only ever
    // increase, so the source ends up with the bottleneck's decision.
    ControlCell on_forward_control_cell(const ControlCell& cell) {
        ++table_ops_;
        ControlCell stamped = cell;
        stamped.laf = std::max(cell.laf, load_adjustment_decision(cell.ocr));
        stamped.ai = std::max(cell.ai, averaging_interval_);
        return stamped;
    }

    RateCps target_cell_rate() const { return target_cell_rate_; }
    double target_cell_count() const { return target_cell_count_; }
    double target_utilization() const { return target_utilization_; }
    double tub_half_width() const { return delta_; }
    double upper_load_bound() const { return upper_load_bound_; }
    double lower_load_bound() const { return lower_load_bound_; }
    double load_level() const { return load_level_; }
    RateCps fair_share() const { return fair_share_; }
    std::int64_t num_active_vcs() const { return num_active_vcs_; }
    std::int64_t received_cell_count() const { return received_cell_count_; }
    std::int64_t seen_count() const { return seen_count_; }
    SimTime averaging_interval() const { return averaging_interval_; }
    std::uint64_t table_ops() const { return table_ops_; }

  private:
    void mark_vc_seen(VcId vc) {
        ++table_ops_;
        if (vc.value() < 0)
            throw InvariantViolation("switch port: data cell with invalid vc");
        auto idx = static_cast<std::size_t>(vc.value());
        if (idx >= seen_epoch_.size())
            seen_epoch_.resize(idx + 1, 0);  // one-time growth, amortized O(1)
        if (seen_epoch_[idx] != epoch_) {
            seen_epoch_[idx] = epoch_;
            ++seen_count_;
        }
    }

    double target_utilization_;
    double delta_;
    SimTime averaging_interval_;
    RateCps target_cell_rate_;
    double target_cell_count_ = 0.0;
    double upper_load_bound_ = 1.0;
    double lower_load_bound_ = 1.0;
    double load_level_ = 0.0;  // nothing measured yet; early cells see laf 0
    RateCps fair_share_;
    std::int64_t num_active_vcs_ = 1;
    std::int64_t received_cell_count_ = 0;
    std::int64_t seen_count_ = 0;
    std::uint64_t epoch_ = 1;
    std::vector<std::uint64_t> seen_epoch_;
    std::uint64_t table_ops_ = 0;
};

}  // namespace abr
