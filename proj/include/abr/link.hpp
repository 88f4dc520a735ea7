#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>

#include "abr/units.hpp"

namespace abr {

// Unidirectional link with an unbounded FIFO at its head, serviced at full
// link rate. Service is computed analytically: each offered cell departs
// when the previous one finishes, so cells never overlap on the wire.
class Link {
  public:
    Link(std::string id, double bandwidth_bps, SimTime prop_delay, SimTime tx_time)
        : id_(std::move(id)), bandwidth_bps_(bandwidth_bps), prop_delay_(prop_delay),
          tx_time_(tx_time) {
        if (!(bandwidth_bps > 0.0))
            throw ConfigError("link " + id_ + ": bandwidth must be > 0");
        if (prop_delay.count_ns() <= 0)
            throw ConfigError("link " + id_ + ": propagation delay must be > 0");
    }

    struct Offer {
        SimTime departs;  // transmission finished, cell leaves the queue
        SimTime arrives;  // cell reaches the far end
    };

    // Accept a cell at `now`; it serializes behind anything in flight.
    Offer offer(SimTime now, bool is_data) {
        SimTime start = std::max(now, next_free_);
        SimTime departs = start + tx_time_;
        next_free_ = departs;
        pending_departures_.push_back(departs);
        ++offered_;
        if (is_data)
            ++data_offered_;
        return {departs, departs + prop_delay_};
    }

    void on_arrival(bool is_data) {
        ++arrived_;
        if (is_data)
            ++data_arrived_;
    }

    // Cells waiting or in transmission at `now`.
    std::int64_t queue_len(SimTime now) {
        while (!pending_departures_.empty() && pending_departures_.front() <= now)
            pending_departures_.pop_front();
        return static_cast<std::int64_t>(pending_departures_.size());
    }

    // Data cells offered but not yet delivered to the far node.
    std::int64_t data_in_transit() const { return data_offered_ - data_arrived_; }

    const std::string& id() const { return id_; }
    double bandwidth_bps() const { return bandwidth_bps_; }
    SimTime prop_delay() const { return prop_delay_; }
    SimTime tx_time() const { return tx_time_; }
    std::int64_t offered() const { return offered_; }
    std::int64_t arrived() const { return arrived_; }

  private:
    std::string id_;
    double bandwidth_bps_;
    SimTime prop_delay_;
    SimTime tx_time_;
    SimTime next_free_;
    std::deque<SimTime> pending_departures_;
    std::int64_t offered_ = 0;
    std::int64_t arrived_ = 0;
    std::int64_t data_offered_ = 0;
    std::int64_t data_arrived_ = 0;
};

}  // namespace abr
