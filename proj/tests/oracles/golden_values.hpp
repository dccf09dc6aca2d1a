// Generated by golden_values.py (50-digit quadrature). Do not edit.
#pragma once

namespace dante::golden {

inline constexpr double kSnakeCollapseW1Alpha0p25 = 0.96054556154784595540;
inline constexpr double kSnakeCollapseW1Alpha1 = 0.64269908169872415481;
inline constexpr double kSnakeCollapseW1Alpha4 = 0.19513897266438641107;
inline constexpr double kSnakeTimeW1Alpha1Lambda0p5 = 0.21087527719832109670;
inline constexpr double kTurtleCollapseU1Beta0p25 = 1.0441589570993240165;
inline constexpr double kTurtleCollapseU1Beta0p5 = 1.2159728110007215124;
inline constexpr double kTurtleCollapseU1Beta0p9 = 3.4494786638035434026;
inline constexpr double kTurtleCollapseU0p75Beta0p5 = 0.91197960825054113427;
inline constexpr double kTurtleTimeU1Beta0p5Mu0p5 = 0.69389333245105950409;

}  // namespace dante::golden
