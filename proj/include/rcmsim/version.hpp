#pragma once

#define RCMSIM_VERSION_MAJOR 1
#define RCMSIM_VERSION_MINOR 0
#define RCMSIM_VERSION_PATCH 0
#define RCMSIM_VERSION_STRING "1.0.0"

namespace rcmsim {
inline const char* version() { return RCMSIM_VERSION_STRING; }
}  // namespace rcmsim
