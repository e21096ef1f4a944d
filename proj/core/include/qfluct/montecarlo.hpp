#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qfluct/channel.hpp"
#include "qfluct/protocol.hpp"

namespace qfluct {

struct TrajectoryRecord {
  EigenIndex initialEigenIndex = EigenIndex::plus;
  EigenIndex finalEigenIndex = EigenIndex::plus;
  std::vector<PulseEvent> pulseEvents;
  std::uint64_t seedIndex = 0;
};

/// Exact integer tallies of a trajectory ensemble, one column per initial eigenstate.
struct EnsembleStats {
  std::array<std::uint64_t, 2> trials{};
  std::array<std::uint64_t, 2> upCounts{};
  std::uint64_t masterSeed = 0;

  std::uint64_t n_trajectories() const { return trials[0] + trials[1]; }
  bool has_column(EigenIndex i) const { return trials[static_cast<int>(i)] > 0; }

  /// Empirical conditional frequencies; a missing column reads as zero.
  ConditionalMatrix conditional_estimate() const;
  /// sqrt(p (1 - p) / N) per entry of the estimate.
  std::array<std::array<double, 2>, 2> std_err() const;

  void merge(const EnsembleStats& other);
  bool operator==(const EnsembleStats&) const = default;
};

struct McOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
  bool keepRecords = false;
};

struct McResult {
  EnsembleStats stats;
  std::vector<TrajectoryRecord> records;
};

/// n trajectories started in eigenstate `initial`. Trajectory k draws from
/// derive_stream(masterSeed, 2k + initial).
McResult run_trajectories(const ProtocolConfig& config, EigenIndex initial, std::uint64_t n,
                          std::uint64_t masterSeed, const McOptions& options = {});

/// Both columns. Post-weighting runs n trajectories per eigenstate; Gibbs
/// sampling runs n in total with the initial eigenstate drawn per trajectory.
McResult run_ensemble(const ProtocolConfig& config, std::uint64_t n, std::uint64_t masterSeed,
                      const McOptions& options = {});

/// One ensemble per final time, sharing trajectories. Each final time gets its
/// own Born draw, so every column has the exact single-run distribution.
/// `config.tf` and `config.nPulses` are ignored; the grid need not be sorted.
std::vector<EnsembleStats> run_trajectory_sweep(const ProtocolConfig& config,
                                                const std::vector<double>& tfGrid, std::uint64_t n,
                                                std::uint64_t masterSeed,
                                                const McOptions& options = {});

/// Gibbs post-weighted functional with propagated binomial error.
/// Throws IncompleteEnsembleError when a column is empty.
FrReport fr_estimate_mc(const EnsembleStats& stats, const ProtocolConfig& config, double gamma);

/// Writes one whitespace-separated line per record:
/// seed_index initial final n_pulses events, where events is a string over
/// {'-': not absorbed, '0': outcome zero, 'p': outcome one then pumped, '1': outcome one kept}.
void write_trajectory_records(std::ostream& out, const std::vector<TrajectoryRecord>& records);

}  // namespace qfluct
