#pragma once

namespace umrn {
namespace cli {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 usage or data error, 2 statistical rejection (the run itself worked).
int run(int argc, const char* const* argv);

}  // namespace cli
}  // namespace umrn
