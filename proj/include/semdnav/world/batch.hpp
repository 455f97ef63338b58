#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semdnav/world/episode.hpp"

namespace semdnav::world {

/// One episode of a sweep. The environment and the network are seeded
/// separately so either can be held fixed.
struct BatchCell {
    std::string group;  // aggregation key, e.g. "density=15"
    EnvSpec env;
    std::uint64_t env_seed = 1;
    std::uint64_t net_seed = 1;
    EpisodeConfig episode;
};

struct BatchRow {
    std::string group;
    EnvSpec env;
    std::uint64_t env_seed = 0;
    std::uint64_t net_seed = 0;
    std::optional<Outcome> outcome;  // empty when the cell failed
    double end_time_s = 0.0;
    std::optional<double> collision_time_s;
    std::uint64_t saccades = 0;
    EpisodeMetrics metrics;
    std::string error;  // message of a failed cell
};

/// "Success" is an episode that ended without a collision.
inline bool succeeded(const BatchRow& r) { return r.outcome && *r.outcome != Outcome::collided; }

/// Runs every cell on up to `parallelism` worker threads. Rows come back in
/// cell order and do not depend on the thread count. A cell that throws is
/// recorded with its error and the batch carries on.
std::vector<BatchRow> run_batch(const std::vector<BatchCell>& cells, unsigned parallelism);

/// Per-group aggregate; means skip NaN metrics.
struct BatchSummary {
    std::string group;
    std::size_t runs = 0;
    std::size_t failed = 0;
    double success_rate = 0.0;
    double mean_clearance_au = 0.0;
    double mean_velocity_au_s = 0.0;
    double mean_lateral_std_au = 0.0;
    /// Crossings of the variable gap over all gap crossings; NaN without any.
    double gap_entry_probability = 0.0;
    std::uint64_t gap_crossings = 0;
};

/// Groups in order of first appearance.
std::vector<BatchSummary> summarize(const std::vector<BatchRow>& rows);

void write_batch_csv(std::ostream& os, const std::vector<BatchRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<BatchSummary>& summary);

}  // namespace semdnav::world
