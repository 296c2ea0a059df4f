#include "spinbath/pulses.hpp"

#include "spinbath/errors.hpp"

namespace spinbath {

PulseSequence schedule(SequenceKind kind, int n_pulses, double total_time) {
  if (total_time <= 0.0) throw ConfigError("sequence total time must be > 0");
  PulseSequence seq;
  seq.kind = kind;
  seq.total_time = total_time;
  if (kind == SequenceKind::fid) {
    seq.n_pulses = 0;
    return seq;
  }
  if (n_pulses < 1) throw ConfigError("CPMG needs at least one pulse");
  seq.n_pulses = n_pulses;
  seq.pulse_times.reserve(static_cast<std::size_t>(n_pulses));
  for (int j = 1; j <= n_pulses; ++j)
    seq.pulse_times.push_back((2.0 * j - 1.0) * total_time / (2.0 * n_pulses));
  return seq;
}

std::vector<double> PulseSequence::segment_durations() const {
  if (n_pulses == 0) return {total_time};
  const double tau = total_time / (2.0 * n_pulses);
  std::vector<double> segments(static_cast<std::size_t>(n_pulses) + 1, 2.0 * tau);
  segments.front() = tau;
  segments.back() = tau;
  return segments;
}

}  // namespace spinbath
