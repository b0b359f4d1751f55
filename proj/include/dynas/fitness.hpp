#pragma once

namespace dynas {

// All benchmark functions are maximized. Most produce integers; the
// concatenated trap produces multiples of 1/5, which are inexact in binary,
// so every fitness-vs-target comparison allows this absolute slack.
inline constexpr double fitness_eps = 1e-9;

inline bool fitness_reaches(double f, double target) { return f >= target - fitness_eps; }

} // namespace dynas
