#pragma once

namespace semdnav {

/// Side length of the square robot; one arbitrary unit (a.u.) of distance.
inline constexpr double kRobotSizeM = 0.4;

inline constexpr double m_to_au(double m) { return m / kRobotSizeM; }
inline constexpr double au_to_m(double au) { return au * kRobotSizeM; }

}  // namespace semdnav
