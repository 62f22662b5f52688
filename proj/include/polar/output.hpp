#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "polar/interval.hpp"
#include "polar/nncs.hpp"

namespace polar {

/// A 2D projection; an index of -1 denotes global time.
struct Projection {
  int x = -1;
  int y = 0;

  friend bool operator==(const Projection&, const Projection&) = default;
};

inline constexpr int kTimeAxis = -1;

/// (t, x_i) for every state.
std::vector<Projection> default_projections(std::size_t num_states);

/// Parses "a:b[,c:d...]" where names are state names or "t".
std::vector<Projection> parse_projections(std::string_view spec, const std::vector<std::string>& state_names);

std::string axis_name(int axis, const std::vector<std::string>& state_names);

/// Bounds of x, y, x + y and x - y over one flowpipe.
struct Octagon {
  Interval x;
  Interval y;
  Interval sum;
  Interval diff;

  /// Vertices of the octagon in counter-clockwise order.
  std::vector<std::pair<double, double>> vertices() const;
};

Octagon octagon(const StepFlowpipe& fp, double control_step, const Projection& proj);

struct SimulationSet {
  std::vector<Trajectory> trajectories;
  std::size_t violations = 0;
};

/// One row per flowpipe and projection.
void write_csv(std::ostream& out, const NNCSModel& model, const ReachResult& result,
               const std::vector<Projection>& projections);

/// Structured dump without timing data, so identical runs give identical bytes.
void write_json(std::ostream& out, const NNCSModel& model, const ReachResult& result,
                const std::vector<Projection>& projections, const SimulationSet* sims = nullptr);

/// Octagons of one projection plus simulated trajectories, if any.
void write_svg(std::ostream& out, const NNCSModel& model, const ReachResult& result, const Projection& proj,
               const SimulationSet* sims = nullptr);

/// Long format: trajectory, t, then one column per state.
void write_trajectories_csv(std::ostream& out, const NNCSModel& model, const SimulationSet& sims);

}  // namespace polar
