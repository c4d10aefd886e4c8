#include "ncstune/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncstune {

DelayLaw DelayLaw::constant(double d) {
    if (d < 0.0) throw std::invalid_argument("delay: negative constant");
    DelayLaw law;
    law.kind = Kind::kConstant;
    law.lo = law.hi = d;
    return law;
}

DelayLaw DelayLaw::uniform(double lo, double hi) {
    if (lo < 0.0 || hi < lo) throw std::invalid_argument("delay: bad uniform bounds");
    DelayLaw law;
    law.kind = Kind::kUniform;
    law.lo = lo;
    law.hi = hi;
    return law;
}

DelayLaw DelayLaw::truncated_normal(double mean, double sd, double lo, double hi) {
    if (lo < 0.0 || hi < lo || sd < 0.0)
        throw std::invalid_argument("delay: bad truncated normal");
    DelayLaw law;
    law.kind = Kind::kTruncatedNormal;
    law.mean = mean;
    law.sd = sd;
    law.lo = lo;
    law.hi = hi;
    return law;
}

DelayLaw DelayLaw::truncated_exponential(double rate, double lo, double hi) {
    if (lo < 0.0 || hi < lo || !(rate > 0.0))
        throw std::invalid_argument("delay: bad truncated exponential");
    DelayLaw law;
    law.kind = Kind::kTruncatedExponential;
    law.rate = rate;
    law.lo = lo;
    law.hi = hi;
    return law;
}

double sample_delay(const DelayLaw& law, RngStream& rng) {
    switch (law.kind) {
        case DelayLaw::Kind::kConstant:
            return law.lo;
        case DelayLaw::Kind::kUniform:
            return rng.uniform(law.lo, law.hi);
        case DelayLaw::Kind::kTruncatedNormal: {
            for (int i = 0; i < 100000; ++i) {
                const double d = rng.normal(law.mean, law.sd);
                if (d >= law.lo && d <= law.hi) return d;
            }
            // Essentially unreachable for sane parameters; clamp the mean
            // rather than spin forever on a degenerate config.
            return std::clamp(law.mean, law.lo, law.hi);
        }
        case DelayLaw::Kind::kTruncatedExponential: {
            for (int i = 0; i < 100000; ++i) {
                const double d = rng.exponential(law.rate);
                if (d >= law.lo && d <= law.hi) return d;
            }
            return law.lo;
        }
    }
    return law.lo;
}

Channel::Channel(const ChannelConfig& cfg, std::uint64_t stream_seed)
    : cfg_(cfg), rng_(stream_seed) {
    if (cfg.drop_prob < 0.0 || cfg.drop_prob > 1.0)
        throw std::invalid_argument("channel: drop_prob outside [0, 1]");
}

std::uint64_t Channel::send(double payload, double now) {
    const std::uint64_t seq = next_seq_++;
    const bool dropped = rng_.bernoulli(cfg_.drop_prob);
    const double delay = sample_delay(cfg_.delay, rng_);  // consumed either way

    PacketRecord rec;
    rec.seq = seq;
    rec.send_time = now;
    rec.dropped = dropped;
    if (dropped) {
        rec.tso = TsoOutcome::kDropped;
    } else {
        rec.delivery_time = now + delay;
        in_flight_.push(Packet{seq, payload, now, rec.delivery_time});
    }
    log_.push_back(rec);
    return seq;
}

std::vector<Packet> Channel::poll(double now) {
    // a nanosecond of slack so a delay that is an exact multiple of the
    // sampling period is delivered at that poll instead of slipping a whole
    // sample on rounding dust (k*ts + d vs (k+n)*ts differ in the last bit)
    constexpr double kDeliverySlack = 1e-9;
    std::vector<Packet> out;
    while (!in_flight_.empty() &&
           in_flight_.top().delivery_time <= now + kDeliverySlack) {
        out.push_back(in_flight_.top());
        in_flight_.pop();
    }
    return out;
}

void Channel::record_tso(std::uint64_t seq, bool accepted) {
    log_[seq].tso = accepted ? TsoOutcome::kAccepted : TsoOutcome::kDiscarded;
}

ChannelStats Channel::stats(int histogram_bins) const {
    ChannelStats st;
    st.hist_lo = cfg_.delay.lo;
    st.hist_hi = cfg_.delay.hi;
    st.delay_histogram.assign(std::max(histogram_bins, 1), 0);
    const double width = st.hist_hi - st.hist_lo;
    for (const auto& rec : log_) {
        ++st.sent;
        if (rec.dropped) {
            ++st.dropped;
            continue;
        }
        if (rec.tso == TsoOutcome::kPending) {
            ++st.in_flight_remaining;
            continue;
        }
        ++st.delivered;
        if (rec.tso == TsoOutcome::kAccepted) ++st.tso_accepted;
        if (rec.tso == TsoOutcome::kDiscarded) ++st.tso_discarded;
        const double d = rec.delivery_time - rec.send_time;
        int bin = 0;
        if (width > 0.0) {
            bin = static_cast<int>((d - st.hist_lo) / width *
                                   static_cast<double>(st.delay_histogram.size()));
            bin = std::clamp(bin, 0, static_cast<int>(st.delay_histogram.size()) - 1);
        }
        ++st.delay_histogram[static_cast<std::size_t>(bin)];
    }
    return st;
}

AuditResult audit_channel(const ChannelConfig& cfg, int packets, double ts,
                          std::uint64_t stream_seed, bool tso_enabled,
                          int histogram_bins) {
    Channel ch(cfg, stream_seed);
    TsoBuffer buf;
    const auto receive = [&](double now) {
        for (const Packet& p : ch.poll(now)) {
            if (tso_enabled) {
                ch.record_tso(p.seq, buf.accept(p));
            } else {
                buf.force(p);
                ch.record_tso(p.seq, true);
            }
        }
    };
    for (int k = 0; k < packets; ++k) {
        const double now = static_cast<double>(k) * ts;
        ch.send(static_cast<double>(k), now);
        receive(now);
    }
    // drain: nothing can still be in flight past the last send plus the
    // delay law's upper bound
    receive(static_cast<double>(packets) * ts + cfg.delay.hi + ts);
    return AuditResult{ch.stats(histogram_bins), ch.log()};
}

}  // namespace ncstune
