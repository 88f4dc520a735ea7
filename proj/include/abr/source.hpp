#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <span>
#include <variant>

#include "abr/cell.hpp"
#include "abr/units.hpp"

namespace abr {

// Source endpoint state machine: paced data transmission, periodic control
// cells carrying the measured offered rate, and rate adjustment when a
// control cell comes back. Pure transitions; the engine owns the timers and
// delivers events in order.
class SourceState {
  public:
    SourceState(VcId vc, RateCps icr, SimTime initial_ai, RateCps pcr, RateCps tcr_floor)
        : vc_(vc), tcr_(icr), averaging_interval_(initial_ai), pcr_(pcr), tcr_floor_(tcr_floor) {
        if (!(tcr_floor.cps() > 0.0))
            throw ConfigError("source: tcr_floor must be > 0");
        if (tcr_floor.cps() > icr.cps() || icr.cps() > pcr.cps())
            throw ConfigError("source: need tcr_floor <= icr <= pcr, got floor=" +
                              std::to_string(tcr_floor.cps()) + " icr=" +
                              std::to_string(icr.cps()) + " pcr=" + std::to_string(pcr.cps()));
        if (initial_ai.count_ns() <= 0)
            throw ConfigError("source: initial averaging interval must be > 0");
        inter_cell_time_ = rate_period(tcr_);
    }

    // Host handed us data; queue it FIFO. No transmission side effects.
    void on_host_data(std::span<const DataCell> burst) {
        for (const DataCell& cell : burst) {
            output_queue_.push_back(cell);
            ++cells_enqueued_;
        }
    }
    void on_host_data(const DataCell& cell) { on_host_data(std::span<const DataCell>(&cell, 1)); }

    // One transmission opportunity. A staged control cell takes the slot and
    // is not counted as offered load; otherwise the queue head goes out. The
    // caller rearms the timer at now + inter_cell_time() either way.
    std::optional<std::variant<DataCell, ControlCell>> on_cell_slot_timer(SimTime /*now*/) {
        if (pending_control_) {
            ControlCell cell = *pending_control_;
            pending_control_.reset();
            return cell;
        }
        if (!output_queue_.empty()) {
            DataCell cell = output_queue_.front();
            output_queue_.pop_front();
            ++transmitted_cell_count_;
            return cell;
        }
        return std::nullopt;
    }

    // Averaging interval rollover: measure the offered rate, reset the
    // counter, and stage a fresh control cell for the next slot.
    ControlCell on_averaging_timer(SimTime now) {
        RateCps ocr(static_cast<double>(transmitted_cell_count_) * 1e9 /
                    static_cast<double>(averaging_interval_.count_ns()));
        transmitted_cell_count_ = 0;
        ControlCell cell{vc_, max(tcr_, ocr), ocr, 0.0, SimTime(), Direction::forward, now};
        if (pending_control_)
            ++stale_control_replaced_;  // previous cell never got a slot; supersede it
        pending_control_ = cell;
        return cell;
    }

    // Feedback arrived. laf >= 1 may only lower the rate, laf < 1 may only
    // raise it; laf == 0 means no switch constrained us, so ramp to peak.
    void on_control_cell_return(const ControlCell& cell) {
        if (cell.vc != vc_) {
            ++unknown_vc_drops_;
            return;
        }
        double new_tcr = cell.laf == 0.0 ? pcr_.cps() : cell.tcr.cps() / cell.laf;
        double tcr = tcr_.cps();
        if (cell.laf >= 1.0 && new_tcr < tcr)
            tcr = new_tcr;
        else if (cell.laf < 1.0 && new_tcr > tcr)
            tcr = new_tcr;
        tcr_ = RateCps(std::clamp(tcr, tcr_floor_.cps(), pcr_.cps()));
        inter_cell_time_ = rate_period(tcr_);
        if (cell.ai.count_ns() > 0)
            averaging_interval_ = cell.ai;
    }

    VcId vc() const { return vc_; }
    RateCps tcr() const { return tcr_; }
    RateCps pcr() const { return pcr_; }
    RateCps tcr_floor() const { return tcr_floor_; }
    SimTime inter_cell_time() const { return inter_cell_time_; }
    SimTime averaging_interval() const { return averaging_interval_; }
    std::int64_t transmitted_cell_count() const { return transmitted_cell_count_; }
    std::size_t queue_len() const { return output_queue_.size(); }
    std::int64_t cells_enqueued() const { return cells_enqueued_; }
    bool has_pending_control() const { return pending_control_.has_value(); }
    std::int64_t unknown_vc_drops() const { return unknown_vc_drops_; }
    std::int64_t stale_control_replaced() const { return stale_control_replaced_; }

  private:
    VcId vc_;
    RateCps tcr_;
    SimTime inter_cell_time_;
    SimTime averaging_interval_;
    RateCps pcr_;
    RateCps tcr_floor_;
    std::int64_t transmitted_cell_count_ = 0;
    std::int64_t cells_enqueued_ = 0;
    std::deque<DataCell> output_queue_;
    std::optional<ControlCell> pending_control_;
    std::int64_t unknown_vc_drops_ = 0;
    std::int64_t stale_control_replaced_ = 0;
};

}  // namespace abr
