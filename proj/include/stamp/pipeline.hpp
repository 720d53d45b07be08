#pragma once

#include <filesystem>
#include <vector>

#include "stamp/config.hpp"

namespace stamp {

// Stage runners behind the CLI subcommands. Each reads only the inputs named
// in the config, writes its outputs plus "<stage>_report.json" under out_dir,
// and returns that report. Reports hash every input and output file and echo
// the effective parameters; they contain no timestamps, so reruns are
// byte-identical.

/// Validates every configured input plus `extra` paths. report["ok"] is the verdict.
Json run_validate(const Config& config, const std::vector<std::filesystem::path>& extra,
                  const std::filesystem::path& out_dir);
Json run_transfer(const Config& config, const std::filesystem::path& out_dir);
Json run_disocclude(const Config& config, const std::filesystem::path& out_dir);
Json run_pseudo(const Config& config, const std::filesystem::path& out_dir);
Json run_coverage(const Config& config, const std::filesystem::path& out_dir);
Json run_curate(const Config& config, const std::filesystem::path& out_dir);
Json run_manifest(const Config& config, const std::filesystem::path& out_dir);

}  // namespace stamp
