#pragma once

// Runs the spotdag CLI as a child process and compares its output files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef SPOTDAG_CLI_PATH
#error "SPOTDAG_CLI_PATH must point at the spotdag executable"
#endif

namespace spotdag::testing {

namespace fs = std::filesystem;

inline fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("spotdag-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Exit status of `spotdag <args>`, stdout and stderr sent to `log`.
inline int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + SPOTDAG_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Every regular file in `a` has a byte-identical twin in `b` and vice versa;
/// mismatches are appended to `diff`.
inline bool same_files(const fs::path& a, const fs::path& b, std::vector<std::string>& diff) {
  bool ok = true;
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++count;
    const auto twin = b / e.path().filename();
    if (!fs::exists(twin) || slurp(e.path()) != slurp(twin)) {
      diff.push_back(e.path().filename().string());
      ok = false;
    }
  }
  std::size_t other = 0;
  for (const auto& e : fs::directory_iterator(b)) other += e.is_regular_file() ? 1 : 0;
  return ok && count == other && count > 0;
}

}  // namespace spotdag::testing
