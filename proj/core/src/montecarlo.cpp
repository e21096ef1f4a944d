#include "qfluct/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "qfluct/errors.hpp"

namespace qfluct {
namespace {

struct Event {
  Rotation toHere;
  bool pulse = false;
  int checkpoint = -1;
};

struct Checkpoint {
  QubitState up;
};

// Pulses and final-time measurements in firing order, each carrying the
// propagator from the previous event.
struct Schedule {
  std::vector<Event> events;
  std::vector<Checkpoint> checkpoints;
  int nPulses = 0;
  QubitState startPlus;
  QubitState startMinus;
  double gibbsUp = 0.5;
};

Schedule build_schedule(const ProtocolConfig& config, const std::vector<double>& tfGrid) {
  struct Key {
    int group;
    int kind;
    double time;
    int checkpoint;
  };
  std::vector<Key> keys;
  int maxPulses = 0;
  for (std::size_t j = 0; j < tfGrid.size(); ++j) {
    const int n = pulse_count(config.tau, tfGrid[j]);
    maxPulses = std::max(maxPulses, n);
    keys.push_back({n, 1, std::max(tfGrid[j], n * config.tau), static_cast<int>(j)});
  }
  for (int k = 1; k <= maxPulses; ++k) {
    keys.push_back({k, 0, k * config.tau, -1});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return std::tie(a.group, a.kind, a.time, a.checkpoint) < std::tie(b.group, b.kind, b.time, b.checkpoint);
  });

  Schedule s;
  s.nPulses = maxPulses;
  const EigenSystem es0 = instantaneous_eigensystem(config.drive, 0.0);
  s.startPlus = es0.basisPlus;
  s.startMinus = es0.basisMinus;
  s.gibbsUp = initial_up_weight(config);
  s.checkpoints.resize(tfGrid.size(), Checkpoint{QubitState::ground()});
  for (std::size_t j = 0; j < tfGrid.size(); ++j) {
    s.checkpoints[j].up = instantaneous_eigensystem(config.drive, tfGrid[j]).basisPlus;
  }
  double t = 0.0;
  for (const Key& k : keys) {
    s.events.push_back({propagator(config.drive, t, k.time), k.kind == 0, k.checkpoint});
    t = k.time;
  }
  return s;
}

enum class Start { fixedPlus, fixedMinus, gibbs };

struct Tally {
  // counts[checkpoint][column]
  std::vector<std::array<std::uint64_t, 2>> trials;
  std::vector<std::array<std::uint64_t, 2>> ups;

  explicit Tally(std::size_t m) : trials(m), ups(m) {}

  void add(const Tally& o) {
    for (std::size_t j = 0; j < trials.size(); ++j) {
      for (int c = 0; c < 2; ++c) {
        trials[j][c] += o.trials[j][c];
        ups[j][c] += o.ups[j][c];
      }
    }
  }
};

struct Job {
  const ProtocolConfig& config;
  const Schedule& schedule;
  Start start;
  std::uint64_t masterSeed;
  std::vector<TrajectoryRecord>* records;
};

void run_one(const Job& job, std::uint64_t k, Tally& tally) {
  EigenIndex initial;
  std::uint64_t streamIndex;
  if (job.start == Start::gibbs) {
    streamIndex = k;
  } else {
    streamIndex = 2 * k + (job.start == Start::fixedMinus ? 1 : 0);
  }
  RandomStream stream = derive_stream(job.masterSeed, streamIndex);
  if (job.start == Start::gibbs) {
    initial = stream.bernoulli(job.schedule.gibbsUp) ? EigenIndex::plus : EigenIndex::minus;
  } else {
    initial = job.start == Start::fixedPlus ? EigenIndex::plus : EigenIndex::minus;
  }
  const int col = static_cast<int>(initial);

  TrajectoryRecord* rec = job.records ? &(*job.records)[k] : nullptr;
  if (rec) {
    rec->initialEigenIndex = initial;
    rec->seedIndex = streamIndex;
    rec->pulseEvents.reserve(job.schedule.nPulses);
  }

  QubitState s = initial == EigenIndex::plus ? job.schedule.startPlus : job.schedule.startMinus;
  for (const Event& e : job.schedule.events) {
    s = e.toHere.apply(s);
    if (e.pulse) {
      auto [next, event] = sample_pulse(s, job.config.channel, stream);
      s = next;
      if (rec) rec->pulseEvents.push_back(event);
    }
    if (e.checkpoint >= 0) {
      const double pUp = std::clamp(s.overlap(job.schedule.checkpoints[e.checkpoint].up), 0.0, 1.0);
      const bool up = stream.bernoulli(pUp);
      tally.trials[e.checkpoint][col] += 1;
      tally.ups[e.checkpoint][col] += up ? 1 : 0;
      if (rec) rec->finalEigenIndex = up ? EigenIndex::plus : EigenIndex::minus;
    }
  }
}

unsigned resolve_workers(unsigned requested, std::uint64_t n) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(n, 1)));
}

Tally run_job(const Job& job, std::uint64_t n, unsigned workers) {
  const std::size_t m = job.schedule.checkpoints.size();
  workers = resolve_workers(workers, n);
  std::vector<Tally> partial(workers, Tally(m));
  const auto work = [&](unsigned w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    for (std::uint64_t k = begin; k < end; ++k) run_one(job, k, partial[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  Tally total(m);
  for (const Tally& t : partial) total.add(t);
  return total;
}

std::vector<EnsembleStats> to_stats(const Tally& t, std::uint64_t seed) {
  std::vector<EnsembleStats> out(t.trials.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].trials = t.trials[j];
    out[j].upCounts = t.ups[j];
    out[j].masterSeed = seed;
  }
  return out;
}

std::vector<EnsembleStats> run_columns(const ProtocolConfig& config, const std::vector<double>& tfGrid,
                                       std::uint64_t n, std::uint64_t seed, const McOptions& options,
                                       std::vector<TrajectoryRecord>* records) {
  config.validate();
  const Schedule schedule = build_schedule(config, tfGrid);
  if (config.gibbsWeighting == GibbsWeighting::sampleInitial) {
    if (records) records->assign(n, {});
    return to_stats(run_job({config, schedule, Start::gibbs, seed, records}, n, options.workers), seed);
  }
  std::vector<TrajectoryRecord> plusRecords;
  std::vector<TrajectoryRecord> minusRecords;
  if (records) {
    plusRecords.resize(n);
    minusRecords.resize(n);
  }
  Tally total = run_job({config, schedule, Start::fixedPlus, seed, records ? &plusRecords : nullptr},
                        n, options.workers);
  total.add(run_job({config, schedule, Start::fixedMinus, seed, records ? &minusRecords : nullptr}, n,
                    options.workers));
  if (records) {
    records->clear();
    records->reserve(2 * n);
    for (std::uint64_t k = 0; k < n; ++k) {
      records->push_back(std::move(plusRecords[k]));
      records->push_back(std::move(minusRecords[k]));
    }
  }
  return to_stats(total, seed);
}

}  // namespace

ConditionalMatrix EnsembleStats::conditional_estimate() const {
  ConditionalMatrix cm;
  for (int c = 0; c < 2; ++c) {
    if (trials[c] == 0) continue;
    const double up = static_cast<double>(upCounts[c]) / static_cast<double>(trials[c]);
    cm.pJgivenI[0][c] = up;
    cm.pJgivenI[1][c] = static_cast<double>(trials[c] - upCounts[c]) / static_cast<double>(trials[c]);
  }
  return cm;
}

std::array<std::array<double, 2>, 2> EnsembleStats::std_err() const {
  const ConditionalMatrix cm = conditional_estimate();
  std::array<std::array<double, 2>, 2> se{};
  for (int c = 0; c < 2; ++c) {
    if (trials[c] == 0) continue;
    const double p = cm.pJgivenI[0][c];
    const double e = std::sqrt(p * (1.0 - p) / static_cast<double>(trials[c]));
    se[0][c] = e;
    se[1][c] = e;
  }
  return se;
}

void EnsembleStats::merge(const EnsembleStats& other) {
  for (int c = 0; c < 2; ++c) {
    trials[c] += other.trials[c];
    upCounts[c] += other.upCounts[c];
  }
}

McResult run_trajectories(const ProtocolConfig& config, EigenIndex initial, std::uint64_t n,
                          std::uint64_t masterSeed, const McOptions& options) {
  config.validate();
  const Schedule schedule = build_schedule(config, {config.tf});
  McResult result;
  std::vector<TrajectoryRecord>* records = nullptr;
  if (options.keepRecords) {
    result.records.resize(n);
    records = &result.records;
  }
  const Start start = initial == EigenIndex::plus ? Start::fixedPlus : Start::fixedMinus;
  result.stats = to_stats(run_job({config, schedule, start, masterSeed, records}, n, options.workers),
                          masterSeed)[0];
  return result;
}

McResult run_ensemble(const ProtocolConfig& config, std::uint64_t n, std::uint64_t masterSeed,
                      const McOptions& options) {
  McResult result;
  result.stats = run_columns(config, {config.tf}, n, masterSeed, options,
                             options.keepRecords ? &result.records : nullptr)[0];
  return result;
}

std::vector<EnsembleStats> run_trajectory_sweep(const ProtocolConfig& config,
                                                const std::vector<double>& tfGrid, std::uint64_t n,
                                                std::uint64_t masterSeed, const McOptions& options) {
  if (tfGrid.empty()) return {};
  ProtocolConfig base = config.at_final_time(*std::max_element(tfGrid.begin(), tfGrid.end()));
  return run_columns(base, tfGrid, n, masterSeed, options, nullptr);
}

FrReport fr_estimate_mc(const EnsembleStats& stats, const ProtocolConfig& config, double gamma) {
  if (!stats.has_column(EigenIndex::plus) || !stats.has_column(EigenIndex::minus)) {
    throw IncompleteEnsembleError("fr_estimate_mc: both initial eigenstates need trajectories");
  }
  const ConditionalMatrix cm = stats.conditional_estimate();
  FrReport r = fr_report(cm, config, gamma);
  if (gamma == 0.0) {
    r.frValue = 1.0;
    r.stdErr = 0.0;
    return r;
  }
  const EigenSystem start = instantaneous_eigensystem(config.drive, 0.0);
  const EigenSystem end = instantaneous_eigensystem(config.drive, config.tf);
  const double pUp = initial_up_weight(config);
  const auto se = stats.std_err();
  double var = 0.0;
  for (int c = 0; c < 2; ++c) {
    const double ei = c == 0 ? start.ePlus : start.eMinus;
    const double weight = c == 0 ? pUp : 1.0 - pUp;
    const double slope = weight * (std::exp(-gamma * (end.ePlus - ei)) - std::exp(-gamma * (end.eMinus - ei)));
    var += slope * slope * se[0][c] * se[0][c];
  }
  r.stdErr = std::sqrt(var);
  return r;
}

void write_trajectory_records(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  const auto sign = [](EigenIndex i) { return i == EigenIndex::plus ? '+' : '-'; };
  for (const TrajectoryRecord& r : records) {
    std::string events;
    events.reserve(r.pulseEvents.size());
    for (const PulseEvent& e : r.pulseEvents) {
      if (!e.absorbed) {
        events.push_back('-');
      } else if (e.projectionOutcome == ProjectionOutcome::zero) {
        events.push_back('0');
      } else {
        events.push_back(e.pumped.value_or(false) ? 'p' : '1');
      }
    }
    out << fmt::format("{} {} {} {} {}\n", r.seedIndex, sign(r.initialEigenIndex),
                       sign(r.finalEigenIndex), r.pulseEvents.size(), events.empty() ? "." : events);
  }
}

}  // namespace qfluct
