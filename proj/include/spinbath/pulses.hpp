#pragma once

#include <vector>

namespace spinbath {

enum class SequenceKind { fid, cpmg };

// Timed pi-pulse schedule acting on the central transition.  The preparing
// pi/2 pulse is implicit (simulations start from the superposition state), so
// the schedule holds only the refocusing pulses: pulse j of CPMG-N sits at
// (2j - 1) t / (2N).  Hahn echo is CPMG with N = 1; FID has no pulses.
struct PulseSequence {
  SequenceKind kind = SequenceKind::fid;
  int n_pulses = 0;
  double total_time = 0.0;          // s
  std::vector<double> pulse_times;  // strictly increasing, inside (0, total_time)

  // Durations of the n_pulses + 1 free-evolution segments: tau, 2tau, ...,
  // 2tau, tau with tau = total_time / (2N).  FID yields one segment.
  std::vector<double> segment_durations() const;
};

PulseSequence schedule(SequenceKind kind, int n_pulses, double total_time);

}  // namespace spinbath
