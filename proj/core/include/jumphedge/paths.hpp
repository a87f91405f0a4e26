#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "jumphedge/grids.hpp"

namespace jumphedge::sim {

// One simulated trajectory on the event-augmented grid: every time-grid node
// plus the path's exact jump times, in increasing order. values[i] is the
// state just after event i (post-jump at jump events); left limits at jumps
// are kept in Jump::value_before. dW[i] is the Brownian increment over
// (times[i-1], times[i]] when the model has a diffusion part.
struct Path {
    struct Jump {
        std::int32_t event_index;
        std::int32_t atom;
        double value_before;
    };

    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> dW;               // empty for pure-jump models
    std::vector<Jump> jumps;
    std::vector<std::int32_t> node_event;  // event index of grid node k
    std::uint64_t stream_id = 0;
    bool truncated = false;    // stopped early (jump would have killed positivity)
    double truncated_time = 0.0;

    double terminal() const { return values.back(); }
    std::size_t n_events() const { return times.size(); }
    bool is_jump_event(std::size_t i) const;
};

struct PathSet {
    std::vector<Path> paths;
    TimeGrid grid;
    std::string model_fingerprint;
    std::string measure_label;  // "P" or "Q(...)"
    std::uint64_t seed = 0;

    std::size_t size() const { return paths.size(); }
};

// Flow-derivative companion: xi[p][i] is the stochastic exponential along
// path p at event i (same event indexing as base.paths[p]).
struct FlowPathSet {
    PathSet base;
    std::vector<std::vector<double>> xi;
};

// Pair coupling for the comparison runs: same Brownian increments and the
// same jump times/marks drive both members.
struct CoupledPathSet {
    PathSet lower;  // started at x
    PathSet upper;  // started at y > x
};

// CSV dump, columns: path_id,time,value,is_jump,atom_index
void write_paths_csv(const PathSet& ps, std::ostream& os);

}  // namespace jumphedge::sim
