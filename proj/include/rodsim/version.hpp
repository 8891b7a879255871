#ifndef RODSIM_VERSION_HPP
#define RODSIM_VERSION_HPP

namespace rodsim {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace rodsim

#endif
