#ifndef SMOOTHMIX_VERSION_HPP
#define SMOOTHMIX_VERSION_HPP

namespace smoothmix {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smoothmix

#endif
