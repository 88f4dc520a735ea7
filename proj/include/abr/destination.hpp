#pragma once

#include <cstdint>
#include <string>

#include "abr/cell.hpp"
#include "abr/units.hpp"

namespace abr {

// Destination endpoint for one VC: count delivered data cells (asserting the
// end-to-end FIFO invariant) and turn control cells straight around.
class DestinationState {
  public:
    explicit DestinationState(VcId vc) : vc_(vc) {}

    void on_data_cell(const DataCell& cell) {
        if (cell.vc != vc_)
            throw InvariantViolation("destination: data cell for wrong vc");
        if (cell.seq != data_cells_received_)
            throw InvariantViolation("destination vc " + std::to_string(vc_.value()) +
                                     ": out-of-order seq " + std::to_string(cell.seq) +
                                     ", expected " + std::to_string(data_cells_received_));
        last_seq_seen_ = cell.seq;
        ++data_cells_received_;
    }

    // Turnaround preserves every field bit-exactly; only the direction flips.
    ControlCell on_control_cell(const ControlCell& cell) const {
        ControlCell back = cell;
        back.direction = Direction::reverse;
        return back;
    }

    VcId vc() const { return vc_; }
    std::int64_t data_cells_received() const { return data_cells_received_; }
    std::int64_t last_seq_seen() const { return last_seq_seen_; }

  private:
    VcId vc_;
    std::int64_t data_cells_received_ = 0;
    std::int64_t last_seq_seen_ = -1;
};

}  // namespace abr
