#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <queue>
#include <variant>
#include <vector>

#include "abr/cell.hpp"
#include "abr/units.hpp"

namespace abr {

enum class EventKind : std::uint8_t {
    cell_arrival,
    timer_expiry,
    source_activation,
    source_deactivation,
    metric_sample,
};

// One scheduled occurrence. `target` and `sub` address the owning entity
// (link index for arrivals, node index plus timer/port id otherwise); `epoch`
// invalidates timers that were armed before a source went idle.
struct Event {
    SimTime at;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::timer_expiry;
    std::int32_t target = -1;
    std::int32_t sub = 0;
    std::uint64_t epoch = 0;
    std::variant<std::monostate, DataCell, ControlCell> payload;
};

// FNV-1a over the dispatched event stream. Two runs of the same scenario
// must produce the same digest.
class TraceHash {
  public:
    void fold(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h_ ^= (v >> (i * 8)) & 0xff;
            h_ *= 0x100000001b3ull;
        }
    }
    void fold(double v) { fold(std::bit_cast<std::uint64_t>(v)); }

    void fold_event(const Event& e) {
        fold(static_cast<std::uint64_t>(e.at.count_ns()));
        fold(e.seq);
        fold(static_cast<std::uint64_t>(e.kind));
        fold(static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.target)));
        fold(static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.sub)));
        if (const auto* d = std::get_if<DataCell>(&e.payload)) {
            fold(static_cast<std::uint64_t>(d->vc.value()));
            fold(static_cast<std::uint64_t>(d->seq));
        } else if (const auto* c = std::get_if<ControlCell>(&e.payload)) {
            fold(static_cast<std::uint64_t>(c->vc.value()));
            fold(c->tcr.cps());
            fold(c->ocr.cps());
            fold(c->laf);
            fold(static_cast<std::uint64_t>(c->ai.count_ns()));
            fold(static_cast<std::uint64_t>(c->direction));
        }
    }

    std::uint64_t digest() const { return h_; }

  private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

// Totally ordered discrete-event queue. Ties in time break by schedule order
// (seq), which is assigned once per schedule() call and never reused.
class EventQueue {
  public:
    void schedule(Event e) {
        if (e.at < now_)
            throw InvariantViolation("schedule: event in the past (t=" +
                                     std::to_string(e.at.count_ns()) + "ns, now=" +
                                     std::to_string(now_.count_ns()) + "ns)");
        e.seq = next_seq_++;
        heap_.push(std::move(e));
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    SimTime now() const { return now_; }

    // Next event at or before `horizon`, advancing the clock to it. When the
    // queue runs dry (or only holds later events) the clock lands on the
    // horizon and nothing is returned.
    std::optional<Event> pop_until(SimTime horizon) {
        if (heap_.empty() || heap_.top().at > horizon) {
            if (horizon > now_)
                now_ = horizon;
            return std::nullopt;
        }
        Event e = heap_.top();
        heap_.pop();
        now_ = e.at;
        return e;
    }

  private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at)
                return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    SimTime now_;
};

}  // namespace abr
