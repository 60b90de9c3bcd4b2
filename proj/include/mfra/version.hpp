#ifndef MFRA_VERSION_HPP
#define MFRA_VERSION_HPP

namespace mfra {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace mfra

#endif
