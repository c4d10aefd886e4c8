#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "ncstune/rng.hpp"

namespace ncstune {

/// Stochastic delay law of one network path, bounds in seconds. Truncated
/// laws resample until the draw lands inside [lo, hi], which preserves the
/// conditional shape of the parent distribution.
struct DelayLaw {
    enum class Kind { kConstant, kUniform, kTruncatedNormal, kTruncatedExponential };

    Kind kind = Kind::kConstant;
    double lo = 0.0;    // lower bound (constant value when kConstant)
    double hi = 0.0;    // upper bound
    double mean = 0.0;  // kTruncatedNormal
    double sd = 0.0;    // kTruncatedNormal
    double rate = 1.0;  // kTruncatedExponential

    static DelayLaw constant(double d);
    static DelayLaw uniform(double lo, double hi);
    static DelayLaw truncated_normal(double mean, double sd, double lo, double hi);
    static DelayLaw truncated_exponential(double rate, double lo, double hi);
};

double sample_delay(const DelayLaw& law, RngStream& rng);

struct ChannelConfig {
    double drop_prob = 0.0;
    DelayLaw delay;
    std::uint64_t seed = 0;  // mixed with the replicate seed
};

/// A time-stamped value in flight. Sequence numbers are the time stamps:
/// integer, assigned at send, strictly increasing per channel.
struct Packet {
    std::uint64_t seq = 0;
    double payload = 0.0;
    double send_time = 0.0;
    double delivery_time = 0.0;
};

enum class TsoOutcome : std::uint8_t { kPending, kAccepted, kDiscarded, kDropped };

struct PacketRecord {
    std::uint64_t seq = 0;
    double send_time = 0.0;
    double delivery_time = 0.0;  // meaningless when dropped
    bool dropped = false;
    TsoOutcome tso = TsoOutcome::kPending;
};

struct ChannelStats {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t tso_accepted = 0;
    std::uint64_t tso_discarded = 0;
    std::uint64_t in_flight_remaining = 0;
    std::vector<std::uint64_t> delay_histogram;  // over [lo, hi] of the law
    double hist_lo = 0.0;
    double hist_hi = 0.0;
};

/// One lossy, randomly-delaying path. The drop decision is drawn before the
/// delay and the delay draw is consumed even for dropped packets, so changing
/// drop_prob alone does not reshuffle the delay sequence.
class Channel {
public:
    Channel(const ChannelConfig& cfg, std::uint64_t stream_seed);

    /// Time-stamps and sends one value; returns its sequence number.
    std::uint64_t send(double payload, double now);

    /// Removes and returns every in-flight packet with delivery_time <= now
    /// (plus a nanosecond of slack against rounding dust), ordered by
    /// delivery time (ties by sequence number).
    std::vector<Packet> poll(double now);

    /// Records what the receiving buffer did with a delivered packet.
    void record_tso(std::uint64_t seq, bool accepted);

    ChannelStats stats(int histogram_bins = 20) const;
    const std::vector<PacketRecord>& log() const { return log_; }

private:
    ChannelConfig cfg_;
    RngStream rng_;
    std::uint64_t next_seq_ = 0;
    std::vector<PacketRecord> log_;

    struct InFlightOrder {
        bool operator()(const Packet& a, const Packet& b) const {
            if (a.delivery_time != b.delivery_time)
                return a.delivery_time > b.delivery_time;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Packet, std::vector<Packet>, InFlightOrder> in_flight_;
};

struct AuditResult {
    ChannelStats stats;
    std::vector<PacketRecord> log;
};

/// Drives one channel with a time-driven schedule (one packet per ts) through
/// a receive-side stamp filter, drains it, and returns the finished log.
AuditResult audit_channel(const ChannelConfig& cfg, int packets, double ts,
                          std::uint64_t stream_seed, bool tso_enabled = true,
                          int histogram_bins = 20);

/// Receive-side time-stamp-order filter: a packet passes only if strictly
/// newer than the last accepted one; older or duplicate stamps are discarded.
struct TsoBuffer {
    std::optional<std::uint64_t> last_seq;
    double held_value = 0.0;

    bool accept(const Packet& p) {
        if (last_seq && p.seq <= *last_seq) return false;
        last_seq = p.seq;
        held_value = p.payload;
        return true;
    }

    /// Pass-through update used when TSO filtering is disabled: every
    /// delivered packet overwrites the hold, whatever its stamp.
    void force(const Packet& p) { held_value = p.payload; }
};

}  // namespace ncstune
