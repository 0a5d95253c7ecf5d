#ifndef NBPK_CLI_HPP
#define NBPK_CLI_HPP

#include <cstdint>
#include <iosfwd>

namespace nbpk::cli {

inline constexpr std::uint64_t kDefaultSeed = 12345;

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the nbpk tool. Results go to `out` unless --out names a
/// file; diagnostics and usage text go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nbpk::cli

#endif  // NBPK_CLI_HPP
