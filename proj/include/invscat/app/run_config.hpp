#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invscat/forward_model.hpp"

namespace invscat::app {

enum class PotentialKind { Exponential, SquareWell, Table };

// Builtin potentials: exp is -depth * exp(-rate r), well is -depth for
// r <= radius, table is a CSV "r,V" interpolated linearly.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Exponential;
  double depth = 3.0;
  double rate = 1.5;
  double radius = 1.0;
  std::optional<double> cutoff;
  std::filesystem::path table;
};

// Defaults reproduce the reference experiment: V = -3 exp(-1.5 r), 40
// uniform S-matrix points on (0, 8], h = 0.04, R = 4.
struct RunConfig {
  double h = 0.04;
  double range = 4.0;
  double q_edge = 8.0;
  int q_points = 40;
  double forward_step = 1e-3;
  double window_lo = 0.2;
  double window_hi = 3.0;
  std::filesystem::path out = "out";
  PotentialSpec potential;

  // N = R / h; validate() guarantees it is integral.
  int n() const;
  void validate() const;
  // q_edge * i / q_points, i = 1..q_points.
  std::vector<double> q_grid() const;
};

// Sets one key (h, R, q_edge, q_points, forward_step, window, out,
// potential, depth, rate, radius, cutoff, table). Throws ValidationError on
// unknown keys or unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat "key = value" file; '#' starts a comment.
RunConfig read_config_file(const std::filesystem::path& path, RunConfig base = {});

// The same format read_config_file accepts.
std::string to_text(const RunConfig& config);
void write_config_snapshot(const RunConfig& config, const std::filesystem::path& dir);

Potential make_potential(const PotentialSpec& spec);

}  // namespace invscat::app
