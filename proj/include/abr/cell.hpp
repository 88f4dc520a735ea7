#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "abr/units.hpp"

namespace abr {

// Virtual connection identifier; unique per connection within a scenario.
class VcId {
  public:
    constexpr VcId() = default;
    constexpr explicit VcId(std::int32_t v) : v_(v) {}
    constexpr std::int32_t value() const { return v_; }
    friend constexpr auto operator<=>(VcId, VcId) = default;

  private:
    std::int32_t v_ = -1;
};

enum class Direction : std::uint8_t { forward, reverse };

struct DataCell {
    VcId vc;
    std::int64_t seq = 0;  // strictly increasing per source
};

// In-band feedback carrier. The source fills every field; switches on the
// forward path only raise laf and ai; the destination flips direction.
struct ControlCell {
    VcId vc;
    RateCps tcr;      // pacing rate when the cell was created (max of knob and measured)
    RateCps ocr;      // measured rate over the last averaging interval
    double laf = 0.0; // load adjustment factor, starts at 0
    SimTime ai;       // largest averaging interval seen on the path, starts at 0
    Direction direction = Direction::forward;
    SimTime created_at;
};

// Field-consistency check. Reports violations instead of aborting so callers
// can surface them; an empty list means the cell is well formed.
inline std::vector<std::string> validate_control_cell(const ControlCell& cell) {
    std::vector<std::string> violations;
    if (cell.ocr.cps() > cell.tcr.cps())
        violations.push_back("ocr (" + std::to_string(cell.ocr.cps()) + ") exceeds tcr (" +
                             std::to_string(cell.tcr.cps()) + ")");
    if (!std::isfinite(cell.laf))
        violations.push_back("laf is not finite");
    else if (cell.laf < 0.0)
        violations.push_back("laf (" + std::to_string(cell.laf) + ") is negative");
    if (cell.ai.count_ns() < 0)
        violations.push_back("ai is negative");
    return violations;
}

}  // namespace abr
