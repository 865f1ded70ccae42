#include "dcbsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "dcbsim/channelization.hpp"
#include "dcbsim/occupancy.hpp"

namespace dcbsim {

double power_at_dbm(const Vec2& rx, ChannelId channel, std::span<const ActiveTx> active,
                    const PhyParams& phy, const PathLossFn& path_loss) {
  double sum_mw = 0.0;
  for (const ActiveTx& tx : active) {
    if (!tx.channels.test(channel)) continue;
    double per_channel_dbm =
        rx_power_per_channel_dbm(tx.tx_power_dbm, tx.n_c, distance(tx.source, rx), phy, path_loss);
    sum_mw += dbm_to_mw(per_channel_dbm);
  }
  return mw_to_dbm(sum_mw);
}

bool channel_busy(double power_dbm, const PhyParams& phy) { return power_dbm >= phy.cca_dbm; }

namespace {

enum class Ev { Arrival, DifsDone, BackoffExpiry, TxEnd, SampleTick, IterationBoundary, SwitchDone };

struct Event {
  double t = 0.0;
  std::uint64_t ord = 0;
  Ev kind = Ev::Arrival;
  int node = -1;
  std::uint64_t token = 0;
  long long index = 0;  // boundary/tick counter
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.ord > b.ord;
  }
};

// Iteration boundaries must see every same-instant arrival/ACK, so they sort
// after ordinary events at equal timestamps.
constexpr std::uint64_t kBoundaryBias = 1ull << 63;

struct Node {
  // configuration
  int id = 0;
  Vec2 ap, sta;
  Allocation alloc;
  bool dcb = true;
  double load_bps = 0.0;
  ChannelId primary = 1;
  std::array<double, 4> snr_w{};   // noise-only SNR at the STA per width
  std::array<double, 4> rate_w{};  // sustained rate per width (0 if width unusable)

  Rng rng_traffic, rng_backoff, rng_select;

  MacState mac;
  std::uint64_t difs_token = 0, expiry_token = 0;
  double expiry_time = -1.0, countdown_start = 0.0;

  Buffer buffer;
  Frame frame;
  std::vector<Packet> inflight;
  double switch_until = -1.0;

  std::array<double, kNumChannels> agg_mw{};  // aggregate from other nodes, per channel
  std::array<ChannelActivity, kNumChannels> activity{};
  std::array<double, kNumChannels> rx_cur_mw{}, rx_max_mw{};  // interference at own STA

  OccupancySamples samples;

  long long gen_pkts = 0, del_pkts = 0, drop_pkts = 0;
  long long gen_bits = 0, del_bits = 0;
  long long iter_ack_bits = 0, iter_gen_bits = 0;
  std::vector<IterationRecord> records;
  std::vector<double> delays;

  Node(const WlanConfig& cfg, const TrafficParams& traffic)
      : id(cfg.id),
        ap(cfg.ap),
        sta(cfg.sta),
        alloc(cfg.alloc),
        dcb(cfg.dcb),
        load_bps(cfg.load_bps),
        primary(cfg.alloc.primary),
        buffer(traffic.buffer_packets),
        samples(cfg.alloc) {}
};

class Simulation {
 public:
  Simulation(const Scenario& scenario, const SimParams& params, std::uint64_t seed)
      : p_(params), seed_(seed) {
    cca_mw_ = dbm_to_mw(p_.phy.cca_dbm);
    noise_mw_ = dbm_to_mw(p_.phy.noise_dbm);
    gain_db_ = p_.phy.tx_gain_db + p_.phy.rx_gain_db;
    n_iterations_ = static_cast<long long>(std::floor(p_.t_obs_s / p_.selection.iteration_s + 1e-9));

    for (const WlanConfig& cfg : scenario.wlans) {
      Node node(cfg, p_.traffic);
      node.rng_traffic = make_stream(seed_, static_cast<std::uint64_t>(cfg.id), 1);
      node.rng_backoff = make_stream(seed_, static_cast<std::uint64_t>(cfg.id), 2);
      node.rng_select = make_stream(seed_, static_cast<std::uint64_t>(cfg.id), 3);
      double d = distance(cfg.ap, cfg.sta);
      for (int w = 0; w < 4; ++w) {
        node.snr_w[w] = p_.phy.tx_power_dbm + gain_db_ - p_.path_loss(d) -
                        10.0 * std::log10(static_cast<double>(kWidths[w])) - p_.phy.noise_dbm;
        auto m = p_.mcs.select_mcs(node.snr_w[w], kWidths[w]);
        node.rate_w[w] = m ? p_.mcs.rate_bps(*m, kWidths[w]) : 0.0;
      }
      nodes_.push_back(std::move(node));
    }

    int n = static_cast<int>(nodes_.size());
    ap_base_mw_.assign(n, std::vector<double>(n, 0.0));
    sta_base_mw_.assign(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s) {
      for (int d = 0; d < n; ++d) {
        if (s != d)
          ap_base_mw_[s][d] = dbm_to_mw(p_.phy.tx_power_dbm + gain_db_ -
                                        p_.path_loss(distance(nodes_[s].ap, nodes_[d].ap)));
        sta_base_mw_[s][d] = dbm_to_mw(p_.phy.tx_power_dbm + gain_db_ -
                                       p_.path_loss(distance(nodes_[s].ap, nodes_[d].sta)));
      }
    }
  }

  SimulationResult run() {
    for (Node& node : nodes_)
      push(next_interarrival_s(node.rng_traffic, node.load_bps, p_.traffic), Ev::Arrival, node.id);
    if (p_.sample_period_s > 0) push_tick(1);
    if (n_iterations_ >= 1) push_boundary(1);

    while (!queue_.empty()) {
      Event e = queue_.top();
      if (e.t > p_.t_obs_s) break;
      queue_.pop();
      now_ = e.t;
      dispatch(e);
    }

    SimulationResult result;
    result.t_obs_s = p_.t_obs_s;
    for (Node& node : nodes_) {
      WlanResult w;
      w.generated_packets = node.gen_pkts;
      w.delivered_packets = node.del_pkts;
      w.dropped_packets = node.drop_pkts;
      w.residual_packets = node.buffer.size() + static_cast<long long>(node.inflight.size());
      w.generated_bits = node.gen_bits;
      w.delivered_bits = node.del_bits;
      w.delays_s = std::move(node.delays);
      w.iterations = std::move(node.records);
      if (w.generated_packets != w.delivered_packets + w.dropped_packets + w.residual_packets)
        throw std::logic_error("packet conservation violated for wlan " + std::to_string(node.id));
      result.wlans.push_back(std::move(w));
    }
    result.switches = std::move(switches_);
    result.decisions = std::move(decisions_);
    result.occupancy = std::move(occupancy_rows_);
    return result;
  }

 private:
  void push(double t, Ev kind, int node, std::uint64_t token = 0, long long index = 0) {
    queue_.push(Event{t, ++seq_, kind, node, token, index});
  }

  void push_boundary(long long k) {
    queue_.push(Event{static_cast<double>(k) * p_.selection.iteration_s, kBoundaryBias | ++seq_,
                      Ev::IterationBoundary, -1, 0, k});
  }

  void push_tick(long long i) {
    queue_.push(Event{static_cast<double>(i) * p_.sample_period_s, ++seq_, Ev::SampleTick, -1, 0, i});
  }

  void dispatch(const Event& e) {
    switch (e.kind) {
      case Ev::Arrival: on_arrival(nodes_[e.node]); break;
      case Ev::DifsDone:
        if (e.token == nodes_[e.node].difs_token) on_difs_done(nodes_[e.node]);
        break;
      case Ev::BackoffExpiry:
        if (e.token == nodes_[e.node].expiry_token) transmit(nodes_[e.node]);
        break;
      case Ev::TxEnd: on_tx_end(nodes_[e.node]); break;
      case Ev::SampleTick: on_sample_tick(e.index); break;
      case Ev::IterationBoundary: on_boundary(e.index); break;
      case Ev::SwitchDone: on_switch_done(nodes_[e.node]); break;
    }
  }

  // --- traffic ---

  void on_arrival(Node& node) {
    ++node.gen_pkts;
    node.gen_bits += p_.traffic.packet_bits;
    node.iter_gen_bits += p_.traffic.packet_bits;
    if (node.buffer.enqueue({now_, p_.traffic.packet_bits}) == EnqueueResult::Dropped) {
      ++node.drop_pkts;
    } else if (node.mac.phase == Phase::Idle) {
      node.mac.stage = 0;
      node.mac.remaining_slots = draw_backoff(0, node.rng_backoff, p_.mac);
      enter_contention(node);
    }
    push(now_ + next_interarrival_s(node.rng_traffic, node.load_bps, p_.traffic), Ev::Arrival,
         node.id);
  }

  // --- channel access ---

  bool primary_busy(const Node& node) const { return node.activity[node.primary - 1].busy; }

  void enter_contention(Node& node) {
    node.mac.phase = Phase::WaitDifs;
    ++node.difs_token;
    if (!primary_busy(node)) {
      double t = std::max(now_, node.activity[node.primary - 1].since + p_.mac.difs_s);
      push(t, Ev::DifsDone, node.id, node.difs_token);
    }
    // Busy primary: the idle transition schedules the DIFS wait.
  }

  void on_difs_done(Node& node) {
    if (node.mac.phase != Phase::WaitDifs) return;
    node.mac.phase = Phase::Counting;
    node.countdown_start = now_;
    if (node.mac.remaining_slots == 0) {
      transmit(node);
      return;
    }
    ++node.expiry_token;
    node.expiry_time = now_ + node.mac.remaining_slots * p_.mac.slot_s;
    push(node.expiry_time, Ev::BackoffExpiry, node.id, node.expiry_token);
  }

  void on_primary_busy(Node& node) {
    switch (node.mac.phase) {
      case Phase::WaitDifs:
        ++node.difs_token;  // drop any pending DIFS completion
        break;
      case Phase::Counting: {
        // A transmission starting exactly at the expiry instant cannot be
        // sensed before the slot boundary: the expiry stands and collides.
        if (node.expiry_time == now_) break;
        int elapsed = static_cast<int>(std::floor((now_ - node.countdown_start) / p_.mac.slot_s + 1e-7));
        elapsed = std::clamp(elapsed, 0, node.mac.remaining_slots - 1);
        node.mac.remaining_slots -= elapsed;
        ++node.expiry_token;
        node.mac.phase = Phase::WaitDifs;
        ++node.difs_token;
        break;
      }
      default: break;
    }
  }

  void on_primary_idle(Node& node) {
    if (node.mac.phase != Phase::WaitDifs) return;
    ++node.difs_token;
    push(now_ + p_.mac.difs_s, Ev::DifsDone, node.id, node.difs_token);
  }

  std::uint8_t instantaneous_free_mask(const Node& node) const {
    std::uint8_t mask = 0;
    for (int c = 0; c < kNumChannels; ++c)
      if (node.agg_mw[c] < cca_mw_) mask |= static_cast<std::uint8_t>(1u << c);
    return mask;
  }

  void transmit(Node& node) {
    if (node.dcb) node.samples.record(now_, instantaneous_free_mask(node));
    ChannelSet free = node.dcb
                          ? pifs_assessment(node.activity, now_, node.primary, node.alloc, p_.mac)
                          : tx_channel_set(node.primary, 1);
    node.frame = build_frame(node.buffer.size(), node.primary, free, node.alloc, node.dcb,
                             node.snr_w, p_.mcs, p_.traffic, p_.mac);
    node.inflight = node.buffer.dequeue_frame(node.frame.n_agg);
    node.mac.phase = Phase::Transmitting;

    // Interference already on the air at this STA.
    for (int c : node.frame.channels.channels()) {
      double sum = 0.0;
      for (const Node& other : nodes_)
        if (other.id != node.id && other.mac.phase == Phase::Transmitting &&
            other.frame.channels.test(c))
          sum += sta_base_mw_[other.id][node.id] / other.frame.n_c;
      node.rx_cur_mw[c - 1] = sum;
      node.rx_max_mw[c - 1] = sum;
    }

    spectrum_changed(node);
    push(now_ + node.frame.duration_s, Ev::TxEnd, node.id);
  }

  // Re-evaluates carrier sense and ongoing receptions after `source` started
  // or stopped transmitting. `source` must already be in its new phase.
  void spectrum_changed(Node& source) {
    const std::vector<int> changed = source.frame.channels.channels();
    bool adding = source.mac.phase == Phase::Transmitting;
    for (Node& other : nodes_) {
      if (other.id == source.id) continue;
      for (int c : changed) {
        double sum = 0.0;
        for (const Node& src : nodes_)
          if (src.id != other.id && src.mac.phase == Phase::Transmitting &&
              src.frame.channels.test(c))
            sum += ap_base_mw_[src.id][other.id] / src.frame.n_c;
        other.agg_mw[c - 1] = sum;
        bool busy = sum >= cca_mw_;
        if (busy != other.activity[c - 1].busy) {
          other.activity[c - 1].set(busy, now_);
          if (c == other.primary) busy ? on_primary_busy(other) : on_primary_idle(other);
        }
      }
      if (other.mac.phase == Phase::Transmitting) {
        for (int c : changed) {
          if (!other.frame.channels.test(c)) continue;
          double contrib = sta_base_mw_[source.id][other.id] / source.frame.n_c;
          double& cur = other.rx_cur_mw[c - 1];
          cur = adding ? cur + contrib : std::max(0.0, cur - contrib);
          if (cur > other.rx_max_mw[c - 1]) other.rx_max_mw[c - 1] = cur;
        }
      }
    }
  }

  void on_tx_end(Node& node) {
    double signal_dbm = mw_to_dbm(sta_base_mw_[node.id][node.id] / node.frame.n_c);
    double min_sinr = std::numeric_limits<double>::infinity();
    for (int c : node.frame.channels.channels()) {
      double sinr = signal_dbm - mw_to_dbm(node.rx_max_mw[c - 1] + noise_mw_);
      min_sinr = std::min(min_sinr, sinr);
    }
    bool delivered = capture_ok(min_sinr, p_.phy);

    node.mac.phase = Phase::Idle;  // off the air before recomputing aggregates
    spectrum_changed(node);

    if (delivered) {
      node.del_pkts += node.frame.n_agg;
      long long bits = static_cast<long long>(node.frame.n_agg) * p_.traffic.packet_bits;
      node.del_bits += bits;
      node.iter_ack_bits += bits;
      for (const Packet& pkt : node.inflight) node.delays.push_back(now_ - pkt.arrival_s);
      node.mac.stage = 0;
    } else {
      node.buffer.push_front(node.inflight);
      node.mac.stage = std::min(node.mac.stage + 1, p_.mac.max_stage);
    }
    node.inflight.clear();

    if (now_ < node.switch_until) {
      node.mac.phase = Phase::Switching;
    } else if (!node.buffer.empty()) {
      node.mac.remaining_slots = draw_backoff(node.mac.stage, node.rng_backoff, p_.mac);
      enter_contention(node);
    }
  }

  // --- occupancy sampling ---

  void on_sample_tick(long long i) {
    for (Node& node : nodes_) {
      if (node.mac.phase == Phase::Transmitting || node.mac.phase == Phase::Switching) continue;
      node.samples.record(now_, instantaneous_free_mask(node));
    }
    push_tick(i + 1);
  }

  // --- iteration boundaries (Algorithm body) ---

  void on_boundary(long long k) {
    double T = p_.selection.iteration_s;
    for (Node& node : nodes_) {
      double s = node.iter_ack_bits / T;
      double ell = node.iter_gen_bits / T;
      bool sat = satisfied(s, ell, p_.selection.eta);
      node.records.push_back({s, ell, sat, node.primary});
      if (p_.collect_occupancy) emit_occupancy_rows(node, static_cast<int>(k));

      bool adaptive = p_.adaptive_wlan < 0 || node.id == p_.adaptive_wlan;
      bool can_switch =
          adaptive && p_.selection.scheme != Scheme::FP && node.alloc.channels.count() >= 2;
      if (!sat && can_switch) {
        apply_switch(node);
      } else if (p_.collect_decisions) {
        decisions_.push_back({node.id, now_, sat, node.primary, node.primary, {}, false});
      }

      node.iter_ack_bits = 0;
      node.iter_gen_bits = 0;
      node.samples.clear();
    }
    if (k + 1 <= n_iterations_) push_boundary(k + 1);
  }

  void apply_switch(Node& node) {
    SelectionDecision dec;
    ChannelId new_p = select_primary(p_.selection.scheme, node.primary, node.samples.stats(),
                                     node.alloc, node.dcb, node.rate_w, node.rng_select, &dec);
    if (p_.collect_decisions)
      decisions_.push_back({node.id, now_, false, node.primary, new_p, dec.rhat_bps, dec.rhat_valid});
    switches_.push_back({now_, node.id, node.primary, new_p});
    node.primary = new_p;

    ++node.difs_token;
    ++node.expiry_token;
    double delta = p_.selection.switch_delay_s;
    node.switch_until = now_ + delta;
    if (node.mac.phase == Phase::Transmitting) {
      // The frame already on the air finishes; TxEnd picks up the wait.
      if (delta > 0) push(node.switch_until, Ev::SwitchDone, node.id);
    } else if (delta > 0) {
      node.mac.phase = Phase::Switching;
      push(node.switch_until, Ev::SwitchDone, node.id);
    } else {
      resume_after_switch(node);
    }
  }

  void on_switch_done(Node& node) {
    if (node.mac.phase != Phase::Switching) return;
    resume_after_switch(node);
  }

  void resume_after_switch(Node& node) {
    node.mac.stage = 0;
    if (!node.buffer.empty()) {
      node.mac.remaining_slots = draw_backoff(0, node.rng_backoff, p_.mac);
      enter_contention(node);
    } else {
      node.mac.phase = Phase::Idle;
    }
  }

  void emit_occupancy_rows(const Node& node, int iteration) {
    OccupancyStats stats = node.samples.stats();
    if (stats.no_data()) return;
    for (int c : node.alloc.channels.channels())
      occupancy_rows_.push_back({node.id, iteration, "pi_c" + std::to_string(c), stats.pi(c)});
    for (int c : node.alloc.channels.channels())
      for (int n_c : allowed_widths(c, node.alloc))
        occupancy_rows_.push_back({node.id, iteration,
                                   "rho_p" + std::to_string(c) + "_w" + std::to_string(n_c),
                                   stats.rho(c, n_c)});
  }

  const SimParams& p_;
  std::uint64_t seed_;
  double cca_mw_ = 0.0, noise_mw_ = 0.0, gain_db_ = 0.0;
  long long n_iterations_ = 0;
  double now_ = 0.0;
  std::uint64_t seq_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::vector<double>> ap_base_mw_, sta_base_mw_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::vector<SwitchEvent> switches_;
  std::vector<DecisionRow> decisions_;
  std::vector<OccupancyRow> occupancy_rows_;
};

}  // namespace

void validate_for_run(const Scenario& scenario, const SimParams& params) {
  if (!(params.t_obs_s > 0)) throw std::invalid_argument("t_obs must be positive");
  if (!(params.selection.iteration_s > 0)) throw std::invalid_argument("iteration must be positive");
  if (!(params.selection.eta > 0 && params.selection.eta <= 1))
    throw std::invalid_argument("eta must be in (0, 1]");
  if (params.selection.switch_delay_s < 0)
    throw std::invalid_argument("switch delay must be non-negative");
  if (!(params.sample_period_s > 0)) throw std::invalid_argument("sample period must be positive");
  const TrafficParams& tr = params.traffic;
  if (tr.packet_bits < 1 || tr.buffer_packets < 1 || tr.max_aggregation < 1 ||
      tr.max_aggregation > tr.buffer_packets)
    throw std::invalid_argument("invalid traffic parameters");
  const MacParams& mac = params.mac;
  if (mac.cw_min < 1 || mac.max_stage < 0 || !(mac.slot_s > 0) || !(mac.sifs_s > 0))
    throw std::invalid_argument("invalid MAC parameters");
  if (std::abs(mac.pifs_s - (mac.sifs_s + mac.slot_s)) > 1e-12 ||
      std::abs(mac.difs_s - (mac.sifs_s + 2 * mac.slot_s)) > 1e-12)
    throw std::invalid_argument("PIFS must be SIFS+slot and DIFS must be SIFS+2*slot");
  params.mcs.validate();
  if (!params.path_loss) throw std::invalid_argument("path loss model missing");

  if (scenario.wlans.empty()) throw std::invalid_argument("scenario has no WLANs");
  for (size_t i = 0; i < scenario.wlans.size(); ++i) {
    const WlanConfig& w = scenario.wlans[i];
    std::string tag = "wlan[" + std::to_string(i) + "]: ";
    if (w.id != static_cast<int>(i)) throw std::invalid_argument(tag + "ids must be sequential");
    validate_allocation(w.alloc);
    if (!(w.load_bps > 0)) throw std::invalid_argument(tag + "load must be positive");
    double d = distance(w.ap, w.sta);
    if (!(d > 0)) throw std::invalid_argument(tag + "AP and STA positions coincide");
    std::vector<int> widths =
        w.dcb ? allowed_widths(w.alloc.primary, w.alloc) : std::vector<int>{1};
    for (int n_c : widths) {
      double snr = params.phy.tx_power_dbm + params.phy.tx_gain_db + params.phy.rx_gain_db -
                   params.path_loss(d) - 10.0 * std::log10(static_cast<double>(n_c)) -
                   params.phy.noise_dbm;
      if (!params.mcs.select_mcs(snr, n_c))
        throw std::invalid_argument(tag + "link cannot sustain mcs 0 at width " +
                                    std::to_string(n_c));
    }
  }
}

SimulationResult run_simulation(const Scenario& scenario, const SimParams& params,
                                std::uint64_t seed) {
  validate_for_run(scenario, params);
  Simulation sim(scenario, params, seed);
  return sim.run();
}

}  // namespace dcbsim
