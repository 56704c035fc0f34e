#pragma once

// Command-line front end: qs2l <spectrum|collide|vstate|evolve|verify> [flags].
//
// Exit codes: 0 success, 1 numeric failure, 2 configuration error (nothing written),
// 3 refusal because the requested V-state sits on a spectral collision.

#include <ostream>

namespace qs2l::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRefused = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qs2l::cli
